#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "agora/codec.hpp"

namespace agora::crypto {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(const codec::Writer& w);

// SHA256(domain-separation tag || data), the project's generic keyed hash
Digest tagged_hash(std::string_view tag, std::span<const std::uint8_t> data);

}  // namespace agora::crypto
