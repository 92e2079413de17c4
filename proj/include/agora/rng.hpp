#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "agora/codec.hpp"

namespace agora::rng {

// Deterministic PRNG. Everything random in the system flows from one of
// these so that a run is a pure function of its seed. Independent
// sub-streams are split off with derive(), keyed by a tag, so unrelated
// consumers cannot perturb each other's draw sequences.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : gen_(seed), seed_(seed) {}

    std::uint64_t u64() { return gen_(); }
    // uniform in [0, n), n > 0
    std::uint64_t below(std::uint64_t n);
    std::uint32_t u32() { return static_cast<std::uint32_t>(u64()); }
    bool coin() { return (u64() & 1) != 0; }

    void fill(std::span<std::uint8_t> out);
    codec::Bytes bytes(std::size_t n);

    Prng derive(std::string_view tag) const;
    Prng derive(std::string_view tag, std::uint64_t salt) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::mt19937_64 gen_;
    std::uint64_t seed_;
};

}  // namespace agora::rng
