#include "agora/shamir.hpp"

#include <algorithm>

#include "doctest.h"

using namespace agora;
using namespace agora::crypto;

namespace {

// Independent interpolation oracle over a small prime field (p = 257 is
// fine for byte values): evaluates the unique degree-(k-1) polynomial
// through the given points at x = 0. Used to cross-check reconstruction
// without touching the implementation's field arithmetic.
std::uint32_t oracle_interpolate_p257(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pts) {
    const std::uint32_t p = 257;
    auto powmod = [&](std::uint32_t b, std::uint32_t e) {
        std::uint32_t acc = 1;
        b %= p;
        while (e) {
            if (e & 1) acc = acc * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return acc;
    };
    std::uint32_t total = 0;
    for (std::size_t i = 0; i < pts.size(); i++) {
        std::uint32_t num = 1, den = 1;
        for (std::size_t j = 0; j < pts.size(); j++) {
            if (i == j) continue;
            num = num * (pts[j].first % p) % p;
            den = den * ((pts[j].first + p - pts[i].first) % p) % p;
        }
        total = (total + pts[i].second % p * num % p * powmod(den, p - 2)) % p;
    }
    return total;
}

}  // namespace

TEST_CASE("oracle: scalar sharing over a test prime field interpolates to the secret") {
    // cross-check the GF(256)-independent semantics: shares of 42 at
    // (k=3, N=4) restricted to indices {1,2,4} reconstruct 42.
    // First, verify the oracle on a hand-built polynomial 42 + 7x + 3x^2 mod 257
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pts;
    for (std::uint32_t x : {1u, 2u, 4u}) pts.push_back({x, (42 + 7 * x + 3 * x * x) % 257});
    CHECK(oracle_interpolate_p257(pts) == 42);
}

TEST_CASE("share 42 at (3,4), reconstruct from shares {1,2,4}") {
    rng::Prng r(1);
    codec::Bytes secret = {42};
    auto shares = share_bytes(secret, 3, 4, r);
    REQUIRE(shares.size() == 4);
    std::vector<std::pair<std::uint32_t, codec::Bytes>> take = {
        {1, shares[0]}, {2, shares[1]}, {4, shares[3]}};
    CHECK(reconstruct_bytes(take, 3) == secret);
}

TEST_CASE("threshold exactness: every k-subset reconstructs the same secret") {
    rng::Prng r(2);
    codec::Bytes secret = r.bytes(16);
    for (auto [k, N] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 4}, {2, 3}}) {
        auto shares = share_bytes(secret, k, N, r);
        // iterate all k-subsets
        std::vector<std::size_t> idx(N);
        for (std::size_t i = 0; i < N; i++) idx[i] = i;
        std::vector<bool> pick(N, false);
        std::fill(pick.end() - static_cast<long>(k), pick.end(), true);
        do {
            std::vector<std::pair<std::uint32_t, codec::Bytes>> subset;
            for (std::size_t i = 0; i < N; i++)
                if (pick[i]) subset.push_back({static_cast<std::uint32_t>(i + 1), shares[i]});
            CHECK(reconstruct_bytes(subset, k) == secret);
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
}

namespace {

// self-contained GF(256) arithmetic for the oracle below (AES polynomial)
std::uint8_t oracle_gf_mul(std::uint8_t a, std::uint8_t b) {
    std::uint8_t acc = 0;
    while (b) {
        if (b & 1) acc ^= a;
        bool hi = a & 0x80;
        a = static_cast<std::uint8_t>(a << 1);
        if (hi) a ^= 0x1b;
        b >>= 1;
    }
    return acc;
}

std::uint8_t oracle_gf_inv(std::uint8_t a) {
    // a^254 in GF(256)
    std::uint8_t acc = 1;
    for (int i = 0; i < 254; i++) acc = oracle_gf_mul(acc, a);
    return acc;
}

// value at x of the unique polynomial through the given points
std::uint8_t oracle_gf_interp_at(const std::vector<std::pair<std::uint8_t, std::uint8_t>>& pts,
                                 std::uint8_t x) {
    std::uint8_t total = 0;
    for (std::size_t i = 0; i < pts.size(); i++) {
        std::uint8_t li = 1;
        for (std::size_t j = 0; j < pts.size(); j++) {
            if (i == j) continue;
            li = oracle_gf_mul(li, oracle_gf_mul(static_cast<std::uint8_t>(x ^ pts[j].first),
                                                 oracle_gf_inv(pts[i].first ^ pts[j].first)));
        }
        total ^= oracle_gf_mul(li, pts[i].second);
    }
    return total;
}

}  // namespace

TEST_CASE("k-1 shares leak nothing: any candidate secret admits a consistent polynomial") {
    rng::Prng r(3);
    codec::Bytes secret = {0x5a};
    auto shares = share_bytes(secret, 3, 4, r);
    std::vector<std::pair<std::uint32_t, codec::Bytes>> two = {{1, shares[0]}, {2, shares[1]}};
    CHECK_FALSE(reconstruct_bytes(two, 3).has_value());
    // constructive: for each candidate, the quadratic through
    // (0,candidate),(1,s1),(2,s2) yields a legal third share at x=3, and
    // reconstructing with it produces exactly that candidate
    for (std::uint32_t candidate = 0; candidate < 256; candidate += 17) {
        std::vector<std::pair<std::uint8_t, std::uint8_t>> pts = {
            {0, static_cast<std::uint8_t>(candidate)}, {1, shares[0][0]}, {2, shares[1][0]}};
        std::uint8_t forged3 = oracle_gf_interp_at(pts, 3);
        std::vector<std::pair<std::uint32_t, codec::Bytes>> three = {
            {1, shares[0]}, {2, shares[1]}, {3, codec::Bytes{forged3}}};
        auto rec = reconstruct_bytes(three, 3);
        REQUIRE(rec.has_value());
        CHECK((*rec)[0] == static_cast<std::uint8_t>(candidate));
    }
}

TEST_CASE("k=1 degenerate: every share equals the secret") {
    rng::Prng r(4);
    codec::Bytes secret = {7, 7, 7};
    auto shares = share_bytes(secret, 1, 5, r);
    for (auto& s : shares) CHECK(s == secret);
}

TEST_CASE("dealer-signed shares: tampering is caught") {
    auto g = make_group("toy64");
    rng::Prng r(5);
    SigningKey dealer = keygen(*g, r);
    codec::Bytes secret = r.bytes(8);
    auto shares = share_secret(secret, 3, 4, *g, dealer, "ctx:receipt:17", r);
    for (auto& s : shares) CHECK(verify_share(*g, dealer.pub, "ctx:receipt:17", s));

    Share bad = shares[0];
    bad.value[0] ^= 1;
    CHECK_FALSE(verify_share(*g, dealer.pub, "ctx:receipt:17", bad));
    // context binding: the same share presented under another tag fails
    CHECK_FALSE(verify_share(*g, dealer.pub, "ctx:receipt:18", shares[0]));
    // index binding
    Share moved = shares[0];
    moved.index = 2;
    CHECK_FALSE(verify_share(*g, dealer.pub, "ctx:receipt:17", moved));

    CHECK(reconstruct(std::span<const Share>(shares.data(), 3), 3) == secret);
    CHECK_FALSE(reconstruct(std::span<const Share>(shares.data(), 2), 3).has_value());
}

TEST_CASE("scalar sharing is linear") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(6);
    Scalar a = g.random_scalar(r), b = g.random_scalar(r);
    auto sa = share_scalar(g, a, 2, 3, r);
    auto sb = share_scalar(g, b, 2, 3, r);
    // per-index sums reconstruct a+b from any 2 indices
    for (std::uint32_t i = 0; i < 3; i++) {
        for (std::uint32_t j = 0; j < 3; j++) {
            if (i == j) continue;
            std::vector<std::pair<std::uint32_t, Scalar>> pts = {
                {i + 1, g.scalar_add(sa[i], sb[i])}, {j + 1, g.scalar_add(sa[j], sb[j])}};
            CHECK(reconstruct_scalar(g, pts, 2) == g.scalar_add(a, b));
        }
    }
    // threshold refusal
    std::vector<std::pair<std::uint32_t, Scalar>> one = {{1, sa[0]}};
    CHECK_FALSE(reconstruct_scalar(g, one, 2).has_value());
}

TEST_CASE("share preconditions") {
    rng::Prng r(7);
    codec::Bytes secret = {1};
    CHECK_THROWS_AS(share_bytes(secret, 0, 4, r), std::invalid_argument);
    CHECK_THROWS_AS(share_bytes(secret, 5, 4, r), std::invalid_argument);
    CHECK_THROWS_AS(share_bytes(codec::Bytes{}, 1, 2, r), std::invalid_argument);
}

TEST_CASE("duplicate share indices are not double counted") {
    rng::Prng r(8);
    codec::Bytes secret = r.bytes(4);
    auto shares = share_bytes(secret, 2, 3, r);
    std::vector<std::pair<std::uint32_t, codec::Bytes>> dup = {{1, shares[0]}, {1, shares[0]}};
    CHECK_FALSE(reconstruct_bytes(dup, 2).has_value());
    dup.push_back({2, shares[1]});
    CHECK(reconstruct_bytes(dup, 2) == secret);
}
