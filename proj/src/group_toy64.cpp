#include <stdexcept>

#include "agora/group.hpp"

namespace agora::crypto {
namespace {

// Order-q subgroup of Z_p^*, q = 2^31 - 1 (prime), p = 2*23*q + 1 (prime).
// Generators derived from nothing-up-my-sleeve bases: g = 2^((p-1)/q),
// h = (SHA256("agora-toy64-h") mod p)^((p-1)/q).
constexpr std::uint64_t kP = 98784247763ULL;
constexpr std::uint64_t kQ = 2147483647ULL;
constexpr std::uint64_t kG = 34359770408ULL;
constexpr std::uint64_t kH = 31599772116ULL;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t acc = 1;
    base %= m;
    while (e > 0) {
        if (e & 1) acc = mulmod(acc, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return acc;
}

Scalar scalar_of(std::uint64_t v) {
    Scalar s;
    v %= kQ;
    for (int i = 0; i < 8; i++) s.b[31 - i] = static_cast<std::uint8_t>(v >> (8 * i));
    return s;
}

std::uint64_t scalar_val(const Scalar& s) {
    std::uint64_t v = 0;
    for (int i = 24; i < 32; i++) v = (v << 8) | s.b[i];
    return v;
}

Element elem_of(std::uint64_t v) {
    Element e;
    e.b.resize(8);
    for (int i = 0; i < 8; i++) e.b[7 - i] = static_cast<std::uint8_t>(v >> (8 * i));
    return e;
}

std::uint64_t elem_val(const Element& e) {
    if (e.b.size() != 8) throw std::invalid_argument("toy64: bad element encoding");
    std::uint64_t v = 0;
    for (auto c : e.b) v = (v << 8) | c;
    return v;
}

class Toy64Group final : public Group {
public:
    std::string name() const override { return "toy64"; }

    Scalar scalar_from_u64(std::uint64_t v) const override { return scalar_of(v); }

    Scalar scalar_from_bytes(std::span<const std::uint8_t> wide) const override {
        std::uint64_t acc = 0;
        for (auto c : wide) acc = (mulmod(acc, 256, kQ) + c) % kQ;
        return scalar_of(acc);
    }

    Scalar scalar_add(const Scalar& a, const Scalar& b) const override {
        return scalar_of((scalar_val(a) + scalar_val(b)) % kQ);
    }
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const override {
        return scalar_of((scalar_val(a) + kQ - scalar_val(b)) % kQ);
    }
    Scalar scalar_mul(const Scalar& a, const Scalar& b) const override {
        return scalar_of(mulmod(scalar_val(a), scalar_val(b), kQ));
    }
    Scalar scalar_neg(const Scalar& a) const override {
        std::uint64_t v = scalar_val(a);
        return scalar_of(v == 0 ? 0 : kQ - v);
    }
    Scalar scalar_inv(const Scalar& a) const override {
        std::uint64_t v = scalar_val(a);
        if (v == 0) throw std::invalid_argument("toy64: inverse of zero");
        return scalar_of(powmod(v, kQ - 2, kQ));
    }

    Element identity() const override { return elem_of(1); }
    Element g() const override { return elem_of(kG); }
    Element h() const override { return elem_of(kH); }

    Element mul(const Element& a, const Element& b) const override {
        return elem_of(mulmod(elem_val(a), elem_val(b), kP));
    }
    Element inv(const Element& a) const override {
        return elem_of(powmod(elem_val(a), kP - 2, kP));
    }
    Element exp(const Element& base, const Scalar& s) const override {
        return elem_of(powmod(elem_val(base), scalar_val(s), kP));
    }
    Element exp_g(const Scalar& s) const override { return elem_of(powmod(kG, scalar_val(s), kP)); }
    Element exp_h(const Scalar& s) const override { return elem_of(powmod(kH, scalar_val(s), kP)); }

    bool is_valid(const Element& a) const override {
        if (a.b.size() != 8) return false;
        std::uint64_t v = 0;
        for (auto c : a.b) v = (v << 8) | c;
        if (v == 0 || v >= kP) return false;
        return powmod(v, kQ, kP) == 1;  // subgroup membership
    }
};

}  // namespace

std::shared_ptr<const Group> make_toy64_group() { return std::make_shared<Toy64Group>(); }

}  // namespace agora::crypto
