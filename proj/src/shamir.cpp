#include "agora/shamir.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace agora::crypto {

namespace gf256 {

// AES field, x^8 + x^4 + x^3 + x + 1; tables built over the generator
// 0x03 (0x02 does not generate the full multiplicative group)
struct Tables {
    std::array<std::uint8_t, 256> log{};
    std::array<std::uint8_t, 255> exp{};
    Tables() {
        std::uint16_t x = 1;
        for (int i = 0; i < 255; i++) {
            exp[i] = static_cast<std::uint8_t>(x);
            log[x] = static_cast<std::uint8_t>(i);
            x = static_cast<std::uint16_t>((x << 1) ^ x);
            if (x & 0x100) x ^= 0x11b;
        }
    }
};
const Tables& tables() {
    static Tables t;
    return t;
}

std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const Tables& t = tables();
    return t.exp[(t.log[a] + t.log[b]) % 255];
}

std::uint8_t inv(std::uint8_t a) {
    if (a == 0) throw std::invalid_argument("gf256: inverse of zero");
    const Tables& t = tables();
    return t.exp[(255 - t.log[a]) % 255];
}

std::uint8_t eval_poly(std::span<const std::uint8_t> coeffs, std::uint8_t x) {
    std::uint8_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = static_cast<std::uint8_t>(mul(acc, x) ^ *it);
    return acc;
}

}  // namespace gf256

static void check_kn(std::size_t k, std::size_t N, std::size_t max_n) {
    if (k < 1 || k > N) throw std::invalid_argument("shamir: need 1 <= k <= N");
    if (N > max_n) throw std::invalid_argument("shamir: too many shares");
}

std::vector<codec::Bytes> share_bytes(std::span<const std::uint8_t> secret, std::size_t k,
                                      std::size_t N, rng::Prng& rng) {
    check_kn(k, N, 255);
    if (secret.empty()) throw std::invalid_argument("shamir: empty secret");
    std::vector<codec::Bytes> out(N, codec::Bytes(secret.size()));
    std::vector<std::uint8_t> coeffs(k);
    for (std::size_t byte = 0; byte < secret.size(); byte++) {
        coeffs[0] = secret[byte];
        for (std::size_t j = 1; j < k; j++) coeffs[j] = static_cast<std::uint8_t>(rng.u64());
        for (std::size_t i = 0; i < N; i++)
            out[i][byte] = gf256::eval_poly(coeffs, static_cast<std::uint8_t>(i + 1));
    }
    return out;
}

std::optional<codec::Bytes> reconstruct_bytes(
    std::span<const std::pair<std::uint32_t, codec::Bytes>> shares, std::size_t k) {
    if (k < 1) return std::nullopt;
    // first k distinct indices
    std::vector<std::pair<std::uint32_t, const codec::Bytes*>> use;
    for (const auto& [idx, val] : shares) {
        if (idx < 1 || idx > 255) continue;
        bool dup = std::any_of(use.begin(), use.end(), [&](auto& u) { return u.first == idx; });
        if (dup) continue;
        use.emplace_back(idx, &val);
        if (use.size() == k) break;
    }
    if (use.size() < k) return std::nullopt;
    std::size_t len = use[0].second->size();
    for (auto& [idx, val] : use)
        if (val->size() != len) return std::nullopt;

    // Lagrange at x=0:  sum_i y_i * prod_{j!=i} x_j / (x_j - x_i)
    codec::Bytes secret(len, 0);
    for (std::size_t i = 0; i < k; i++) {
        std::uint8_t xi = static_cast<std::uint8_t>(use[i].first);
        std::uint8_t li = 1;
        for (std::size_t j = 0; j < k; j++) {
            if (j == i) continue;
            std::uint8_t xj = static_cast<std::uint8_t>(use[j].first);
            li = gf256::mul(li, gf256::mul(xj, gf256::inv(xi ^ xj)));
        }
        for (std::size_t b = 0; b < len; b++)
            secret[b] = static_cast<std::uint8_t>(secret[b] ^ gf256::mul(li, (*use[i].second)[b]));
    }
    return secret;
}

std::vector<Scalar> share_scalar(const Group& g, const Scalar& secret, std::size_t k,
                                 std::size_t N, rng::Prng& rng) {
    check_kn(k, N, 1u << 20);
    std::vector<Scalar> coeffs(k);
    coeffs[0] = secret;
    for (std::size_t j = 1; j < k; j++) coeffs[j] = g.random_scalar(rng);
    std::vector<Scalar> out(N);
    for (std::size_t i = 0; i < N; i++) {
        Scalar x = g.scalar_from_u64(i + 1);
        Scalar acc = g.scalar_from_u64(0);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            acc = g.scalar_add(g.scalar_mul(acc, x), *it);
        out[i] = acc;
    }
    return out;
}

std::vector<Scalar> lagrange_at_zero(const Group& g, std::span<const std::uint32_t> xs) {
    std::vector<Scalar> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); i++) {
        Scalar num = g.scalar_from_u64(1);
        Scalar den = g.scalar_from_u64(1);
        Scalar xi = g.scalar_from_u64(xs[i]);
        for (std::size_t j = 0; j < xs.size(); j++) {
            if (j == i) continue;
            Scalar xj = g.scalar_from_u64(xs[j]);
            num = g.scalar_mul(num, xj);
            den = g.scalar_mul(den, g.scalar_sub(xj, xi));
        }
        out[i] = g.scalar_mul(num, g.scalar_inv(den));
    }
    return out;
}

std::optional<Scalar> reconstruct_scalar(
    const Group& g, std::span<const std::pair<std::uint32_t, Scalar>> shares, std::size_t k) {
    std::vector<std::uint32_t> xs;
    std::vector<Scalar> ys;
    for (const auto& [idx, val] : shares) {
        if (idx == 0) continue;
        if (std::find(xs.begin(), xs.end(), idx) != xs.end()) continue;
        xs.push_back(idx);
        ys.push_back(val);
        if (xs.size() == k) break;
    }
    if (xs.size() < k) return std::nullopt;
    auto coeffs = lagrange_at_zero(g, xs);
    Scalar acc = g.scalar_from_u64(0);
    for (std::size_t i = 0; i < k; i++) acc = g.scalar_add(acc, g.scalar_mul(coeffs[i], ys[i]));
    return acc;
}

codec::Bytes share_payload(std::string_view context_tag, std::uint32_t index,
                           std::span<const std::uint8_t> value) {
    codec::Writer w;
    w.str("agora-share");
    w.str(context_tag);
    w.u32(index);
    w.bytes(value);
    return w.take();
}

Share make_signed_share(const Group& g, const SigningKey& dealer, std::string_view context_tag,
                        std::uint32_t index, codec::Bytes value) {
    Share s;
    s.index = index;
    s.value = std::move(value);
    s.dealer_sig = sign(g, dealer, share_payload(context_tag, s.index, s.value));
    return s;
}

bool verify_share(const Group& g, const Element& dealer_pub, std::string_view context_tag,
                  const Share& share) {
    return verify_sig(g, dealer_pub, share_payload(context_tag, share.index, share.value),
                      share.dealer_sig);
}

void encode(codec::Writer& w, const Share& s) {
    w.u32(s.index);
    w.bytes(s.value);
    w.raw(sig_encode(s.dealer_sig));
}

Share decode_share(codec::Reader& r) {
    Share s;
    s.index = r.u32();
    s.value = r.bytes();
    s.dealer_sig = sig_decode(r);
    return s;
}

std::vector<Share> share_secret(std::span<const std::uint8_t> secret, std::size_t k, std::size_t N,
                                const Group& g, const SigningKey& dealer,
                                std::string_view context_tag, rng::Prng& rng) {
    auto values = share_bytes(secret, k, N, rng);
    std::vector<Share> out;
    out.reserve(N);
    for (std::size_t i = 0; i < N; i++)
        out.push_back(make_signed_share(g, dealer, context_tag, static_cast<std::uint32_t>(i + 1),
                                        std::move(values[i])));
    return out;
}

std::optional<codec::Bytes> reconstruct(std::span<const Share> shares, std::size_t k) {
    std::vector<std::pair<std::uint32_t, codec::Bytes>> pairs;
    pairs.reserve(shares.size());
    for (const auto& s : shares) pairs.emplace_back(s.index, s.value);
    return reconstruct_bytes(pairs, k);
}

}  // namespace agora::crypto
