#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "agora/codec.hpp"
#include "agora/hash.hpp"
#include "agora/rng.hpp"

namespace agora::crypto {

// digest = SHA256(value || salt); salts are 64-bit
struct HashCommitment {
    Digest digest{};
    std::uint64_t salt = 0;

    bool operator==(const HashCommitment&) const = default;
};

HashCommitment hash_commit(std::span<const std::uint8_t> value, std::uint64_t salt);
bool hash_commit_matches(const HashCommitment& c, std::span<const std::uint8_t> value);

// AES-128-CBC with a fresh random IV per encryption; output is IV || ct.
// Keys are 16 bytes. Decryption failure (bad padding) yields nullopt; a
// wrong key usually yields garbage instead, which callers detect through
// the per-ballot hash commitments.
codec::Bytes enc_vote_code(std::span<const std::uint8_t> code, std::span<const std::uint8_t> key,
                           rng::Prng& rng);
std::optional<codec::Bytes> dec_vote_code(std::span<const std::uint8_t> ct,
                                          std::span<const std::uint8_t> key);

}  // namespace agora::crypto
