#include "agora/rng.hpp"

#include "agora/hash.hpp"

namespace agora::rng {

std::uint64_t Prng::below(std::uint64_t n) {
    // rejection sampling keeps the draw unbiased
    std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t v;
    do {
        v = u64();
    } while (v >= limit);
    return v % n;
}

void Prng::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
        std::uint64_t v = u64();
        for (int s = 56; s >= 0 && i < out.size(); s -= 8) {
            out[i++] = static_cast<std::uint8_t>(v >> s);
        }
    }
}

codec::Bytes Prng::bytes(std::size_t n) {
    codec::Bytes out(n);
    fill(out);
    return out;
}

static std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t salt) {
    codec::Writer w;
    w.u64(base);
    w.str(tag);
    w.u64(salt);
    auto d = crypto::sha256(w.data());
    std::uint64_t s = 0;
    for (int i = 0; i < 8; i++) s = (s << 8) | d[i];
    return s;
}

Prng Prng::derive(std::string_view tag) const { return Prng(derive_seed(seed_, tag, 0)); }

Prng Prng::derive(std::string_view tag, std::uint64_t salt) const {
    return Prng(derive_seed(seed_, tag, salt));
}

}  // namespace agora::rng
