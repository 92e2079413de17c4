#include "agora/ea.hpp"

#include <set>

#include "doctest.h"

using namespace agora;
using namespace agora::ea;

namespace {

ElectionParams small_params(std::uint64_t seed = 1) {
    ElectionParams p;
    p.n = 2;
    p.m = 2;
    p.n_v = 4;
    p.f_v = 1;
    p.n_b = 3;
    p.f_b = 1;
    p.n_t = 3;
    p.h_t = 2;
    p.t_end = 1000;
    p.rng_seed = seed;
    p.group_name = "toy64";
    return p;
}

codec::Bytes reconstruct_msk(const SetupOutput& s, std::size_t quorum) {
    std::vector<crypto::Share> shares;
    for (std::size_t i = 0; i < quorum; i++) shares.push_back(s.vc_inits[i].msk_share);
    auto msk = crypto::reconstruct(shares, quorum);
    REQUIRE(msk.has_value());
    return *msk;
}

crypto::Opening reconstruct_opening(const crypto::Group& g, const SetupOutput& s, std::size_t b,
                                    int part, std::size_t pos, std::size_t h_t) {
    crypto::Opening o;
    std::vector<std::vector<std::pair<std::uint32_t, crypto::Scalar>>> per_comp;
    for (std::size_t t = 0; t < h_t; t++) {
        const auto& line = s.trustee_inits[t].ballots[b].parts[part][pos];
        auto scalars = decode_scalars(line.opening_share.value);
        per_comp.resize(scalars.size());
        for (std::size_t c = 0; c < scalars.size(); c++)
            per_comp[c].push_back({line.opening_share.index, scalars[c]});
    }
    for (auto& pts : per_comp) {
        auto r = crypto::reconstruct_scalar(g, pts, h_t);
        REQUIRE(r.has_value());
        o.randomizers.push_back(*r);
    }
    return o;
}

}  // namespace

TEST_CASE("structural shape: 2 ballots, 2 parts x 2 lines, 4 VC inits") {
    auto s = setup(small_params());
    CHECK(s.ballots.size() == 2);
    for (const auto& b : s.ballots) {
        CHECK(b.part(Part::A).size() == 2);
        CHECK(b.part(Part::B).size() == 2);
    }
    CHECK(s.vc_inits.size() == 4);
    CHECK(s.trustee_inits.size() == 3);
    CHECK(s.bb_init.ballots.size() == 2);
    CHECK(s.public_info.vc_pubs.size() == 4);
    CHECK(s.public_info.bb_pubs.size() == 3);
    CHECK(s.public_info.trustee_pubs.size() == 3);
    // serials assigned 1..n
    CHECK(s.ballots[0].serial_no == 1);
    CHECK(s.ballots[1].serial_no == 2);
}

TEST_CASE("invalid params are rejected with the violated constraint named") {
    ElectionParams p = small_params();
    p.n_v = 3;  // violates N_v >= 3f_v+1
    CHECK_THROWS_WITH_AS(setup(p), "params: N_v >= 3*f_v+1 required", std::invalid_argument);
    p = small_params();
    p.n_b = 2;
    CHECK_THROWS_AS(setup(p), std::invalid_argument);
    p = small_params();
    p.h_t = 4;
    CHECK_THROWS_AS(setup(p), std::invalid_argument);
    p = small_params();
    p.m = 1;
    CHECK_THROWS_AS(setup(p), std::invalid_argument);
    p = small_params();
    p.n = 0;
    CHECK_THROWS_AS(setup(p), std::invalid_argument);
}

TEST_CASE("same seed twice gives identical outputs") {
    auto s1 = setup(small_params(77));
    auto s2 = setup(small_params(77));
    CHECK(s1.ballots == s2.ballots);
    CHECK(s1.vc_inits == s2.vc_inits);
    CHECK(s1.bb_init == s2.bb_init);
    CHECK(s1.trustee_inits == s2.trustee_inits);
    CHECK(s1.public_info == s2.public_info);
    auto s3 = setup(small_params(78));
    CHECK_FALSE(s1.ballots == s3.ballots);
}

TEST_CASE("receipt reconstructs from every (N_v - f_v)-subset of VC shares") {
    auto s = setup(small_params(3));
    auto g = crypto::make_group("toy64");
    for (std::size_t b = 0; b < 2; b++) {
        for (int p = 0; p < 2; p++) {
            for (std::size_t pos = 0; pos < 2; pos++) {
                // collect the 4 shares of this shuffled line
                std::vector<crypto::Share> shares;
                for (const auto& vi : s.vc_inits)
                    shares.push_back(vi.ballots[b].parts[p][pos].receipt_share);
                std::string ctx = receipt_share_context(b + 1, static_cast<Part>(p), pos);
                for (const auto& sh : shares)
                    CHECK(crypto::verify_share(*g, s.public_info.ea_pub, ctx, sh));

                std::set<std::uint64_t> recovered;
                for (std::size_t skip = 0; skip < 4; skip++) {
                    std::vector<crypto::Share> subset;
                    for (std::size_t i = 0; i < 4; i++)
                        if (i != skip) subset.push_back(shares[i]);
                    auto rec = crypto::reconstruct(subset, 3);
                    REQUIRE(rec.has_value());
                    std::uint64_t v = 0;
                    for (auto c : *rec) v = (v << 8) | c;
                    recovered.insert(v);
                }
                CHECK(recovered.size() == 1);
                // equals one of the printed receipts on that part
                bool found = false;
                for (const auto& line : s.ballots[b].parts[p])
                    if (line.receipt == *recovered.begin()) found = true;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("hash commitments and encrypted codes are consistent, bijectively per part") {
    auto s = setup(small_params(4));
    codec::Bytes msk = reconstruct_msk(s, 3);
    CHECK(crypto::hash_commit_matches(s.bb_init.msk_commitment, msk));

    for (std::size_t b = 0; b < s.ballots.size(); b++) {
        for (int p = 0; p < 2; p++) {
            std::set<codec::Bytes> printed;
            for (const auto& line : s.ballots[b].parts[p]) printed.insert(line.vote_code);
            std::set<codec::Bytes> decrypted;
            for (std::size_t pos = 0; pos < s.bb_init.ballots[b].parts[p].size(); pos++) {
                auto code = crypto::dec_vote_code(s.bb_init.ballots[b].parts[p][pos].enc_vote_code,
                                                  msk);
                REQUIRE(code.has_value());
                decrypted.insert(*code);
                // the VC hash commitment at the same shuffled position matches
                CHECK(crypto::hash_commit_matches(
                    s.vc_inits[0].ballots[b].parts[p][pos].code_commitment, *code));
            }
            CHECK(printed == decrypted);
        }
    }
}

TEST_CASE("f_v shares of a receipt or msk reveal nothing reconstructible") {
    auto s = setup(small_params(5));
    std::vector<crypto::Share> one = {s.vc_inits[0].msk_share};
    CHECK_FALSE(crypto::reconstruct(one, 3).has_value());
    std::vector<crypto::Share> rs = {s.vc_inits[0].ballots[0].parts[0][0].receipt_share};
    CHECK_FALSE(crypto::reconstruct(rs, 3).has_value());
}

TEST_CASE("no vote-code collisions across 10^4 codes") {
    ElectionParams p = small_params(6);
    p.n = 250;
    p.m = 10;
    std::set<codec::Bytes> codes;
    std::size_t total = 0;
    for (std::uint64_t seed : {100, 200}) {
        p.rng_seed = seed;
        auto s = setup(p);
        for (const auto& b : s.ballots)
            for (const auto& part : b.parts)
                for (const auto& line : part) {
                    codes.insert(line.vote_code);
                    total++;
                }
    }
    CHECK(total == 10000);
    CHECK(codes.size() == total);
}

TEST_CASE("audit_setup: honest parts pass, swapped commitments betray the EA") {
    auto params = small_params(7);
    auto s = setup(params);
    auto gp = crypto::make_group("toy64");
    const crypto::Group& g = *gp;
    codec::Bytes msk = reconstruct_msk(s, 3);

    auto opened_part = [&](std::size_t b, int p) {
        std::vector<OpenedBbLine> lines;
        for (std::size_t pos = 0; pos < params.m; pos++) {
            const auto& bb_line = s.bb_init.ballots[b].parts[p][pos];
            auto code = crypto::dec_vote_code(bb_line.enc_vote_code, msk);
            REQUIRE(code.has_value());
            lines.push_back(OpenedBbLine{*code, bb_line.commitment,
                                         reconstruct_opening(g, s, b, p, pos, params.h_t)});
        }
        return lines;
    };

    for (std::size_t b = 0; b < 2; b++) {
        for (int p = 0; p < 2; p++) {
            auto report =
                audit_setup(g, s.public_info.params, s.ballots[b].parts[p], opened_part(b, p));
            CHECK(report.passed());
        }
    }

    // malicious EA swaps two options' commitments (and openings) in part A
    auto swapped = opened_part(0, 0);
    std::swap(swapped[0].commitment, swapped[1].commitment);
    std::swap(swapped[0].opening, swapped[1].opening);
    auto report = audit_setup(g, s.public_info.params, s.ballots[0].parts[0], swapped);
    CHECK(report.complete);
    CHECK_FALSE(report.passed());

    // missing opening: incomplete, not a violation
    auto missing = opened_part(0, 0);
    missing[1].opening = crypto::Opening{};
    auto rep2 = audit_setup(g, s.public_info.params, s.ballots[0].parts[0], missing);
    CHECK_FALSE(rep2.complete);
    CHECK(rep2.violations.empty());
}

TEST_CASE("serial clash detection") {
    std::vector<std::uint64_t> ok = {1, 2, 3};
    CHECK(audit_serial_uniqueness(ok).empty());
    std::vector<std::uint64_t> clash = {1, 2, 2, 3};
    auto v = audit_serial_uniqueness(clash);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("clash") != std::string::npos);
}

TEST_CASE("trustee zk shares complete the published first moves") {
    auto params = small_params(8);
    auto s = setup(params);
    auto gp = crypto::make_group("toy64");
    const crypto::Group& g = *gp;

    crypto::CoinString coins = {1, 0};
    for (std::size_t b = 0; b < 2; b++) {
        for (int p = 0; p < 2; p++) {
            for (std::size_t pos = 0; pos < params.m; pos++) {
                const auto& bb_line = s.bb_init.ballots[b].parts[p][pos];
                codec::Bytes ctx(zk_share_context(b + 1, static_cast<Part>(p), pos).begin(),
                                 zk_share_context(b + 1, static_cast<Part>(p), pos).end());
                crypto::Scalar ch = crypto::derive_challenge(g, coins, ctx);

                // two trustees compute response shares; combine and verify
                std::vector<std::vector<crypto::Scalar>> shares(2);
                std::vector<std::uint32_t> xs;
                for (std::size_t t = 0; t < 2; t++) {
                    const auto& line = s.trustee_inits[t].ballots[b].parts[p][pos];
                    shares[t] = crypto::response_shares(
                        g, decode_scalars(line.zk_share.value), params.m, ch);
                    xs.push_back(line.zk_share.index);
                }
                std::vector<crypto::Scalar> resp;
                for (std::size_t i = 0; i < shares[0].size(); i++) {
                    std::vector<std::pair<std::uint32_t, crypto::Scalar>> pts = {
                        {xs[0], shares[0][i]}, {xs[1], shares[1][i]}};
                    resp.push_back(*crypto::reconstruct_scalar(g, pts, 2));
                }
                auto proof = crypto::assemble_proof(bb_line.proof_first, ch, resp, params.m);
                CHECK(crypto::verify_proof(g, bb_line.commitment, proof));
            }
        }
    }
}
