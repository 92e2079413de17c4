#include "agora/proofs.hpp"

#include "agora/batch.hpp"
#include "agora/shamir.hpp"
#include "doctest.h"

using namespace agora;
using namespace agora::crypto;

namespace {

Opening opening_for(const Group& g, const OptionEncoding& e, rng::Prng& r) {
    Opening o;
    o.message = e.vec;
    for (std::size_t i = 0; i < e.vec.size(); i++) o.randomizers.push_back(g.random_scalar(r));
    return o;
}

codec::Bytes ctx_bytes(std::string_view s) { return codec::Bytes(s.begin(), s.end()); }

}  // namespace

TEST_CASE("honest proof verifies (completeness)") {
    for (auto name : {"toy64", "p256"}) {
        auto gp = make_group(name);
        const Group& g = *gp;
        rng::Prng r(1);
        OptionEncoding e = unit_vector(3, 1);
        Opening o = opening_for(g, e, r);
        VectorCommitment c = commit(g, e, o.randomizers);
        auto fm = prove_first_move(g, c, o, r);
        CHECK(fm.proof.phase == ProofPhase::kFirstMoveOnly);

        CoinString coins = {0, 1, 0};
        Scalar ch = derive_challenge(g, coins, ctx_bytes("ballot:1:A:0"));
        UnitVectorProof p = finish_proof(g, fm.proof, fm.coeffs, ch);
        CHECK(p.phase == ProofPhase::kComplete);
        CHECK(verify_proof(g, c, p));
    }
}

TEST_CASE("completeness over randomized honest instances") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(2);
    int ok = 0;
    const int kTrials = 1000;
    for (int t = 0; t < kTrials; t++) {
        std::size_t m = 2 + r.below(4);
        OptionEncoding e = unit_vector(m, r.below(m));
        Opening o = opening_for(g, e, r);
        VectorCommitment c = commit(g, e, o.randomizers);
        auto fm = prove_first_move(g, c, o, r);
        CoinString coins;
        for (int i = 0; i < 5; i++) coins.push_back(static_cast<std::uint8_t>(r.below(2)));
        Scalar ch = derive_challenge(g, coins, ctx_bytes("trial"));
        if (verify_proof(g, c, finish_proof(g, fm.proof, fm.coeffs, ch))) ok++;
    }
    CHECK(ok == kTrials);
}

TEST_CASE("transcript checked against a different challenge fails") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(3);
    OptionEncoding e = unit_vector(3, 2);
    Opening o = opening_for(g, e, r);
    VectorCommitment c = commit(g, e, o.randomizers);
    auto fm = prove_first_move(g, c, o, r);
    Scalar ch = derive_challenge(g, {1, 1}, ctx_bytes("x"));
    UnitVectorProof p = finish_proof(g, fm.proof, fm.coeffs, ch);
    REQUIRE(verify_proof(g, c, p));
    p.challenge = derive_challenge(g, {1, 0}, ctx_bytes("x"));
    CHECK_FALSE(verify_proof(g, c, p));
}

TEST_CASE("prover run on a non-unit witness yields a rejected transcript") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(4);
    const std::vector<std::vector<std::uint64_t>> bad_witnesses = {
        {2, 0, 0},  // entry out of {0,1}
        {1, 1, 0},  // sum = 2
        {0, 0, 0},  // sum = 0
    };
    int rejected = 0;
    for (const auto& w : bad_witnesses) {
        for (int t = 0; t < 100; t++) {
            OptionEncoding e{w};
            Opening o = opening_for(g, e, r);
            VectorCommitment c = commit(g, e, o.randomizers);
            auto fm = prove_first_move(g, c, o, r);
            Scalar ch = derive_challenge(g, {static_cast<std::uint8_t>(t & 1)}, ctx_bytes("bad"));
            if (!verify_proof(g, c, finish_proof(g, fm.proof, fm.coeffs, ch))) rejected++;
        }
    }
    CHECK(rejected == 300);
}

TEST_CASE("verify on a first-move-only proof raises incomplete-proof") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(5);
    OptionEncoding e = unit_vector(2, 0);
    Opening o = opening_for(g, e, r);
    VectorCommitment c = commit(g, e, o.randomizers);
    auto fm = prove_first_move(g, c, o, r);
    CHECK_THROWS_AS(verify_proof(g, c, fm.proof), IncompleteProof);
}

TEST_CASE("challenge derivation: deterministic, coin-sensitive, defined on empty input") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    CoinString coins = {0, 1, 1, 0, 1};
    Scalar a = derive_challenge(g, coins, ctx_bytes("ctx"));
    CHECK(a == derive_challenge(g, coins, ctx_bytes("ctx")));
    CoinString flipped = coins;
    flipped[2] ^= 1;
    CHECK_FALSE(a == derive_challenge(g, flipped, ctx_bytes("ctx")));
    CHECK_FALSE(a == derive_challenge(g, coins, ctx_bytes("ctx2")));
    // empty election: no voters, still defined and stable
    Scalar e1 = derive_challenge(g, {}, ctx_bytes("ctx"));
    Scalar e2 = derive_challenge(g, {}, ctx_bytes("ctx"));
    CHECK(e1 == e2);
}

TEST_CASE("trustee-style response shares reconstruct the honest final move") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(6);
    OptionEncoding e = unit_vector(3, 0);
    Opening o = opening_for(g, e, r);
    VectorCommitment c = commit(g, e, o.randomizers);
    auto fm = prove_first_move(g, c, o, r);
    Scalar ch = derive_challenge(g, {1}, ctx_bytes("share"));
    UnitVectorProof direct = finish_proof(g, fm.proof, fm.coeffs, ch);
    REQUIRE(verify_proof(g, c, direct));

    // share every coefficient at (h_t=2, N_t=3), evaluate shares, then
    // Lagrange-combine two trustees' response shares
    auto flat = fm.coeffs.flatten();
    std::vector<std::vector<Scalar>> per_trustee(3);
    for (const Scalar& coeff : flat) {
        auto sh = share_scalar(g, coeff, 2, 3, r);
        for (int t = 0; t < 3; t++) per_trustee[t].push_back(sh[t]);
    }
    std::vector<std::vector<Scalar>> resp_shares(3);
    for (int t = 0; t < 3; t++) resp_shares[t] = response_shares(g, per_trustee[t], 3, ch);

    for (auto [i, j] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}, {0, 2}, {1, 2}}) {
        std::vector<Scalar> combined;
        for (std::size_t s = 0; s < resp_shares[i].size(); s++) {
            std::vector<std::pair<std::uint32_t, Scalar>> pts = {{i + 1, resp_shares[i][s]},
                                                                 {j + 1, resp_shares[j][s]}};
            combined.push_back(*reconstruct_scalar(g, pts, 2));
        }
        UnitVectorProof joined = assemble_proof(fm.proof, ch, combined, 3);
        CHECK(joined == direct);
        CHECK(verify_proof(g, c, joined));
    }
}

TEST_CASE("proof encoding round trips in both phases") {
    auto gp = make_group("p256");
    const Group& g = *gp;
    rng::Prng r(7);
    OptionEncoding e = unit_vector(2, 1);
    Opening o = opening_for(g, e, r);
    VectorCommitment c = commit(g, e, o.randomizers);
    auto fm = prove_first_move(g, c, o, r);

    codec::Writer w1;
    encode(w1, fm.proof);
    codec::Reader r1(w1.data());
    CHECK(decode_proof(r1) == fm.proof);

    UnitVectorProof p = finish_proof(g, fm.proof, fm.coeffs,
                                     derive_challenge(g, {0}, ctx_bytes("rt")));
    codec::Writer w2;
    encode(w2, p);
    codec::Reader r2(w2.data());
    CHECK(decode_proof(r2) == p);
}

TEST_CASE("omp batch kernels match their serial references bit-exactly") {
    auto gp = make_group("toy64");
    const Group& g = *gp;
    rng::Prng r(8);
    std::vector<OptionEncoding> es;
    std::vector<Opening> os;
    for (int i = 0; i < 64; i++) {
        es.push_back(unit_vector(3, r.below(3)));
        os.push_back(opening_for(g, es.back(), r));
    }
    auto serial = batch_commit_serial(g, es, os);
    auto parallel = batch_commit(g, es, os);
    CHECK(serial == parallel);

    rng::Prng prover_rng(9);
    auto fm_s = batch_prove_first_serial(g, serial, os, prover_rng);
    auto fm_p = batch_prove_first(g, serial, os, prover_rng);
    REQUIRE(fm_s.size() == fm_p.size());
    for (std::size_t i = 0; i < fm_s.size(); i++) {
        CHECK(fm_s[i].proof == fm_p[i].proof);
        CHECK(fm_s[i].coeffs.flatten() == fm_p[i].coeffs.flatten());
    }

    Scalar ch = derive_challenge(g, {0, 1}, ctx_bytes("batch"));
    std::vector<UnitVectorProof> proofs;
    for (std::size_t i = 0; i < fm_s.size(); i++)
        proofs.push_back(finish_proof(g, fm_s[i].proof, fm_s[i].coeffs, ch));
    auto v_s = batch_verify_serial(g, serial, proofs);
    auto v_p = batch_verify(g, serial, proofs);
    CHECK(v_s == v_p);
    for (auto ok : v_s) CHECK(ok == 1);
}
