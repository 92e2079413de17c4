#include "agora/group.hpp"

namespace agora::crypto {

Scalar Group::random_scalar(rng::Prng& r) const {
    // 64 bytes -> mod order keeps the bias negligible for both backends
    std::array<std::uint8_t, 64> wide;
    r.fill(wide);
    return scalar_from_bytes(wide);
}

Element Group::mul_exp(const Element& a, const Element& b, const Scalar& s) const {
    return mul(a, exp(b, s));
}

std::optional<std::uint64_t> Group::dlog_g(const Element& elem, std::uint64_t bound) const {
    Element acc = identity();
    for (std::uint64_t e = 0; e <= bound; e++) {
        if (acc == elem) return e;
        acc = mul(acc, g());
    }
    return std::nullopt;
}

}  // namespace agora::crypto
