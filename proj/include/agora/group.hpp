#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "agora/codec.hpp"
#include "agora/rng.hpp"

namespace agora::crypto {

// Scalar in the group's prime-order scalar field, canonical big-endian,
// always fully reduced.
struct Scalar {
    std::array<std::uint8_t, 32> b{};
    bool operator==(const Scalar&) const = default;
};

// Group element in the backend's canonical encoding.
struct Element {
    codec::Bytes b;
    bool operator==(const Element&) const = default;
};

// Prime-order cyclic group with two fixed generators g and h whose relative
// discrete log is not known to anyone. Two backends exist: "p256" (NIST
// P-256, production strength) and "toy64" (31-bit order subgroup of a
// 64-bit prime field, brute-forceable on purpose so tests can run
// exhaustive oracles and large statistical sweeps).
class Group {
public:
    virtual ~Group() = default;

    virtual std::string name() const = 0;

    // scalar field (mod group order)
    virtual Scalar scalar_from_u64(std::uint64_t v) const = 0;
    virtual Scalar scalar_from_bytes(std::span<const std::uint8_t> wide) const = 0;  // mod order
    virtual Scalar scalar_add(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar scalar_sub(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar scalar_mul(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar scalar_neg(const Scalar& a) const = 0;
    virtual Scalar scalar_inv(const Scalar& a) const = 0;  // a != 0
    bool scalar_is_zero(const Scalar& a) const { return a == Scalar{}; }
    Scalar random_scalar(rng::Prng& r) const;

    // group operations; all element arguments must be valid encodings
    virtual Element identity() const = 0;
    virtual Element g() const = 0;
    virtual Element h() const = 0;
    virtual Element mul(const Element& a, const Element& b) const = 0;
    virtual Element inv(const Element& a) const = 0;
    virtual Element exp(const Element& base, const Scalar& s) const = 0;
    virtual Element exp_g(const Scalar& s) const = 0;
    virtual Element exp_h(const Scalar& s) const = 0;
    // a * b^s, the shape every verification equation takes
    virtual Element mul_exp(const Element& a, const Element& b, const Scalar& s) const;
    virtual bool is_valid(const Element& a) const = 0;

    // Bounded discrete log base g: returns e with elem == g^e, e <= bound.
    virtual std::optional<std::uint64_t> dlog_g(const Element& elem, std::uint64_t bound) const;
};

// name: "p256" or "toy64"
std::shared_ptr<const Group> make_group(std::string_view name);

}  // namespace agora::crypto
