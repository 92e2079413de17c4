#include <set>

#include "agora/commitment.hpp"
#include "agora/group.hpp"
#include "agora/schnorr.hpp"
#include "agora/symmetric.hpp"
#include "doctest.h"

using namespace agora;
using namespace agora::crypto;

static void group_axioms(const Group& g) {
    rng::Prng r(11);
    Scalar a = g.random_scalar(r), b = g.random_scalar(r);
    Element ga = g.exp_g(a);
    CHECK(g.is_valid(ga));
    CHECK(g.mul(ga, g.identity()) == ga);
    CHECK(g.mul(ga, g.inv(ga)) == g.identity());
    // g^a * g^b == g^(a+b)
    CHECK(g.mul(ga, g.exp_g(b)) == g.exp_g(g.scalar_add(a, b)));
    // (g^a)^b == g^(ab)
    CHECK(g.exp(ga, b) == g.exp_g(g.scalar_mul(a, b)));
    // h independent generator sanity
    CHECK(g.h() != g.g());
    CHECK(g.is_valid(g.h()));
    CHECK_FALSE(g.h() == g.identity());
    // scalar field
    Scalar inv = g.scalar_inv(a);
    CHECK(g.scalar_mul(a, inv) == g.scalar_from_u64(1));
    CHECK(g.scalar_add(a, g.scalar_neg(a)) == g.scalar_from_u64(0));
    // exp_h consistency with generic exp
    CHECK(g.exp_h(a) == g.exp(g.h(), a));
    // bounded dlog
    CHECK(g.dlog_g(g.exp_g(g.scalar_from_u64(17)), 20) == 17);
    CHECK_FALSE(g.dlog_g(g.exp_g(g.scalar_from_u64(17)), 16).has_value());
}

TEST_CASE("group axioms toy64") { group_axioms(*make_group("toy64")); }
TEST_CASE("group axioms p256") { group_axioms(*make_group("p256")); }

TEST_CASE("unknown group rejected") { CHECK_THROWS(make_group("p512")); }

TEST_CASE("schnorr sign/verify") {
    for (auto name : {"toy64", "p256"}) {
        auto g = make_group(name);
        rng::Prng r(5);
        SigningKey k = keygen(*g, r);
        codec::Bytes msg = {1, 2, 3, 4};
        Signature sig = sign(*g, k, msg);
        CHECK(verify_sig(*g, k.pub, msg, sig));
        // deterministic
        CHECK(sign(*g, k, msg) == sig);
        // mutated message fails
        codec::Bytes msg2 = msg;
        msg2[0] ^= 1;
        CHECK_FALSE(verify_sig(*g, k.pub, msg2, sig));
        // wrong key fails
        SigningKey k2 = keygen(*g, r);
        CHECK_FALSE(verify_sig(*g, k2.pub, msg, sig));
        // tampered signature fails
        Signature bad = sig;
        bad.z = g->scalar_add(bad.z, g->scalar_from_u64(1));
        CHECK_FALSE(verify_sig(*g, k.pub, msg, bad));
    }
}

TEST_CASE("vote code encryption round trip") {
    rng::Prng r(7);
    codec::Bytes key = r.bytes(16);
    codec::Bytes code = r.bytes(20);  // 160-bit vote code
    auto ct1 = enc_vote_code(code, key, r);
    auto ct2 = enc_vote_code(code, key, r);
    CHECK(ct1 != ct2);  // fresh IV per encryption
    CHECK(dec_vote_code(ct1, key) == code);
    CHECK(dec_vote_code(ct2, key) == code);
    // wrong key: either padding failure or garbage != code
    codec::Bytes key2 = r.bytes(16);
    auto pt = dec_vote_code(ct1, key2);
    CHECK((!pt.has_value() || *pt != code));
}

TEST_CASE("hash commitment") {
    codec::Bytes v = {9, 9, 9};
    auto c = hash_commit(v, 0x1122334455667788ULL);
    CHECK(c == hash_commit(v, 0x1122334455667788ULL));  // deterministic
    CHECK(hash_commit_matches(c, v));
    codec::Bytes v2 = {9, 9, 8};
    CHECK_FALSE(hash_commit_matches(c, v2));
    CHECK(hash_commit(v, 1).digest != c.digest);  // salt matters
}

TEST_CASE("prng determinism and derivation") {
    rng::Prng a(42), b(42);
    CHECK(a.u64() == b.u64());
    CHECK(a.bytes(10) == b.bytes(10));
    rng::Prng c = a.derive("x"), d = b.derive("x"), e = b.derive("y");
    CHECK(c.u64() == d.u64());
    rng::Prng d2 = b.derive("x");
    CHECK(d2.u64() != e.u64());
    std::uint64_t n = a.below(10);
    CHECK(n < 10);
}

static Opening make_opening(const Group& g, const OptionEncoding& enc, rng::Prng& r) {
    Opening o;
    o.message = enc.vec;
    for (std::size_t i = 0; i < enc.vec.size(); i++) o.randomizers.push_back(g.random_scalar(r));
    return o;
}

TEST_CASE("commitment completeness and identity case") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(3);

    OptionEncoding e2 = unit_vector(3, 1);  // second of three options
    Opening o = make_opening(g, e2, r);
    VectorCommitment c = commit(g, e2, o.randomizers);
    auto res = open_and_decode(g, c, o, 10);
    CHECK(res.ok());
    CHECK(res.encoding == e2);

    // zero vector with zero randomizers commits to identity pairs
    OptionEncoding zero{std::vector<std::uint64_t>(3, 0)};
    std::vector<Scalar> zr(3, g.scalar_from_u64(0));
    VectorCommitment cz = commit(g, zero, zr);
    for (auto& [a, b] : cz.components) {
        CHECK(a == g.identity());
        CHECK(b == g.identity());
    }
}

TEST_CASE("commitment binding rejects perturbed openings") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(4);
    for (int trial = 0; trial < 50; trial++) {
        OptionEncoding e = unit_vector(4, r.below(4));
        Opening o = make_opening(g, e, r);
        VectorCommitment c = commit(g, e, o.randomizers);

        Opening bad = o;
        std::size_t idx = r.below(4);
        bad.randomizers[idx] = g.scalar_add(bad.randomizers[idx], g.scalar_from_u64(1));
        CHECK(open_and_decode(g, c, bad, 10).status == OpenStatus::kInconsistent);

        Opening bad2 = o;
        bad2.message[idx] ^= 1;
        CHECK(open_and_decode(g, c, bad2, 10).status == OpenStatus::kInconsistent);
    }
}

TEST_CASE("homomorphism is exact") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(5);
    for (int trial = 0; trial < 200; trial++) {
        OptionEncoding a, b;
        for (int i = 0; i < 3; i++) {
            a.vec.push_back(r.below(5));
            b.vec.push_back(r.below(5));
        }
        Opening oa = make_opening(g, a, r), ob = make_opening(g, b, r);
        VectorCommitment ca = commit(g, a, oa.randomizers), cb = commit(g, b, ob.randomizers);
        VectorCommitment cc = combine(g, ca, cb);
        Opening oc = combine_openings(g, oa, ob);
        auto res = open_and_decode(g, cc, oc, 20);
        REQUIRE(res.ok());
        for (int i = 0; i < 3; i++) CHECK(res.encoding.vec[i] == a.vec[i] + b.vec[i]);
    }
}

TEST_CASE("combining with a zero-vector commitment leaves the message unchanged") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(6);
    OptionEncoding e = unit_vector(3, 0);
    Opening o = make_opening(g, e, r);
    VectorCommitment c = commit(g, e, o.randomizers);

    OptionEncoding zero{std::vector<std::uint64_t>(3, 0)};
    Opening oz = make_opening(g, zero, r);
    VectorCommitment cz = commit(g, zero, oz.randomizers);

    auto res = open_and_decode(g, combine(g, c, cz), combine_openings(g, o, oz), 10);
    REQUIRE(res.ok());
    CHECK(res.encoding == e);
}

TEST_CASE("fold of 3x option1 and 5x option3 opens to (3,0,5)") {
    for (auto name : {"toy64", "p256"}) {
        auto gp = make_group(name);
        const Group& g = *gp;
        rng::Prng r(7);
        std::vector<VectorCommitment> cs;
        std::vector<Opening> os;
        for (int i = 0; i < 3; i++) {
            OptionEncoding e = unit_vector(3, 0);
            os.push_back(make_opening(g, e, r));
            cs.push_back(commit(g, e, os.back().randomizers));
        }
        for (int i = 0; i < 5; i++) {
            OptionEncoding e = unit_vector(3, 2);
            os.push_back(make_opening(g, e, r));
            cs.push_back(commit(g, e, os.back().randomizers));
        }
        VectorCommitment total = cs[0];
        Opening ot = os[0];
        for (std::size_t i = 1; i < cs.size(); i++) {
            total = combine(g, total, cs[i]);
            ot = combine_openings(g, ot, os[i]);
        }
        // tally decode path: message withheld, recovered by bounded dlog
        Opening blind;
        blind.randomizers = ot.randomizers;
        auto res = open_and_decode(g, total, blind, 9);
        REQUIRE(res.ok());
        CHECK(res.encoding.vec == std::vector<std::uint64_t>{3, 0, 5});
    }
}

TEST_CASE("tally decode within max-tally; overflow flagged") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(8);
    // linear-scan oracle over exponents 0..max_tally pins the expected value
    OptionEncoding e{std::vector<std::uint64_t>{5}};
    Opening o = make_opening(g, e, r);
    VectorCommitment c = commit(g, e, o.randomizers);
    Opening blind;
    blind.randomizers = o.randomizers;
    std::uint64_t expected = 0;
    for (std::uint64_t cand = 0; cand <= 9; cand++) {
        Element lifted = g.mul(c.components[0].second, g.inv(g.exp_h(o.randomizers[0])));
        if (lifted == g.exp_g(g.scalar_from_u64(cand))) {
            expected = cand;
            break;
        }
    }
    CHECK(expected == 5);
    auto res = open_and_decode(g, c, blind, 9);
    REQUIRE(res.ok());
    CHECK(res.encoding.vec[0] == expected);

    auto over = open_and_decode(g, c, blind, 4);
    CHECK(over.status == OpenStatus::kOverflow);
}

TEST_CASE("commit arity mismatch rejected") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    OptionEncoding e = unit_vector(3, 0);
    std::vector<Scalar> two(2, g.scalar_from_u64(1));
    CHECK_THROWS_AS(commit(g, e, two), std::invalid_argument);

    rng::Prng r(9);
    Opening o2 = make_opening(g, unit_vector(2, 0), r);
    Opening o3 = make_opening(g, e, r);
    CHECK_THROWS_AS(combine_openings(g, o2, o3), std::invalid_argument);
    VectorCommitment c2 = commit(g, unit_vector(2, 0), o2.randomizers);
    VectorCommitment c3 = commit(g, e, o3.randomizers);
    CHECK_THROWS_AS(combine(g, c2, c3), std::invalid_argument);
}

TEST_CASE("commitment and opening encodings round trip") {
    auto gp = make_group("p256");
    const Group& g = *gp;
    rng::Prng r(10);
    OptionEncoding e = unit_vector(3, 1);
    Opening o = make_opening(g, e, r);
    VectorCommitment c = commit(g, e, o.randomizers);

    codec::Writer w;
    encode(w, c);
    encode(w, o);
    codec::Reader rd(w.data());
    CHECK(decode_commitment(rd) == c);
    CHECK(decode_opening(rd) == o);
    CHECK(rd.done());
}
