#include "agora/election_run.hpp"

#include "doctest.h"

using namespace agora;

namespace {

ea::ElectionParams small_params(std::uint64_t seed, std::uint32_t n = 6) {
    ea::ElectionParams p;
    p.n = n;
    p.m = 2;
    p.n_v = 4;
    p.f_v = 1;
    p.n_b = 3;
    p.f_b = 1;
    p.n_t = 3;
    p.h_t = 2;
    p.t_end = 500;
    p.rng_seed = seed;
    p.group_name = "toy64";
    return p;
}

run::Scenario scripted(const ea::ElectionParams& params, std::uint64_t seed,
                       const std::string& adversary = "none") {
    run::Scenario sc;
    sc.sim.seed = seed;
    sc.sim.delta = 5;
    sc.sim.drift = 2;
    sc.sim.t_end = sim::Tick(params.t_end);
    sc.sim.adversary = adversary;
    rng::Prng r(seed * 977 + 3);
    for (std::uint64_t s = 1; s <= params.n; s++) {
        if (r.below(4) == 0) continue;  // some ballots stay unvoted
        run::VoterIntent intent;
        intent.serial = s;
        intent.part = r.coin() ? ea::Part::B : ea::Part::A;
        intent.option = static_cast<std::uint32_t>(r.below(params.m));
        intent.start_tick = 5 + sim::Tick(r.below(60));
        sc.intents.push_back(intent);
    }
    return sc;
}

// safety core: every receipt appears in every honest vote set and the tally
void check_safety(const ea::SetupOutput& setup, const run::Scenario& sc,
                  const run::RunResult& result) {
    const auto& params = setup.public_info.params;
    for (const auto& s : result.vc_sets) {
        if (!s) continue;
        for (const auto& v : result.voters) {
            if (!v.got_receipt) continue;
            bool found = false;
            for (const auto& e : s->entries)
                if (e.serial == v.serial && e.voted && e.vote_code == v.cast_code) found = true;
            CHECK(found);
        }
    }
    // byte-identical sets across honest VCs
    std::optional<codec::Bytes> canon;
    for (const auto& s : result.vc_sets) {
        if (!s) continue;
        if (!canon)
            canon = s->canonical();
        else
            CHECK(*canon == s->canonical());
    }
    // receipted votes reach the published tally
    auto transcript = result.majority_transcript(params.f_b);
    REQUIRE(transcript.has_value());
    REQUIRE(transcript->result.has_value());
    std::vector<std::uint64_t> receipted(params.m, 0);
    for (const auto& v : result.voters)
        if (v.got_receipt) receipted[v.option]++;
    // with honest-only voters, receipted votes are the only votes
    CHECK(transcript->result->tally == receipted);
}

}  // namespace

TEST_CASE("silent byzantine VC: liveness via blacklist-and-retry, safety intact") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        auto params = small_params(seed);
        auto setup = ea::setup(params);
        auto sc = scripted(params, seed, "silent-vc");
        sc.sim.corrupted_vcs = {0};
        auto result = run::run_election(setup, sc);
        for (const auto& v : result.voters) {
            CHECK(v.got_receipt);
            CHECK(v.attempts <= 2);  // at most one dead node encountered
        }
        check_safety(setup, sc, result);
    }
}

TEST_CASE("equivocating VC cannot split the vote set or fake receipts") {
    for (std::uint64_t seed : {10, 11, 12, 13, 14}) {
        auto params = small_params(seed);
        auto setup = ea::setup(params);
        auto sc = scripted(params, seed, "equivocating-vc");
        sc.sim.corrupted_vcs = {1};
        sc.sim.corrupted_bbs = {0};
        auto result = run::run_election(setup, sc);
        for (const auto& v : result.voters) CHECK(v.got_receipt);
        check_safety(setup, sc, result);
    }
}

TEST_CASE("share withholder below quorum break-point: receipts still flow at f_v=1") {
    auto params = small_params(20);
    auto setup = ea::setup(params);
    auto sc = scripted(params, 20, "share-withholder");
    sc.sim.corrupted_vcs = {2};
    auto result = run::run_election(setup, sc);
    for (const auto& v : result.voters) CHECK(v.got_receipt);
    check_safety(setup, sc, result);
}

TEST_CASE("suppressing shares beyond the quorum margin stops every receipt") {
    auto params = small_params(21);
    auto setup = ea::setup(params);
    auto sc = scripted(params, 21, "share-withholder");
    sc.sim.corrupted_vcs = {2, 3};  // two withholders of four: quorum unreachable
    sc.sim.unsound_override = true;
    sc.sim.max_ticks = 3000;  // recovery retries would otherwise run long
    auto result = run::run_election(setup, sc);
    for (const auto& v : result.voters) CHECK_FALSE(v.got_receipt);
}

TEST_CASE("recover liar is identified and discarded") {
    for (std::uint64_t seed : {30, 31, 32}) {
        auto params = small_params(seed);
        auto setup = ea::setup(params);
        auto sc = scripted(params, seed, "recover-liar");
        sc.sim.corrupted_vcs = {3};
        auto result = run::run_election(setup, sc);
        for (const auto& v : result.voters) CHECK(v.got_receipt);
        check_safety(setup, sc, result);
    }
}

TEST_CASE("garbage BB replies are filtered by the majority read") {
    auto params = small_params(40);
    auto setup = ea::setup(params);
    auto sc = scripted(params, 40, "garbage-bb");
    sc.sim.corrupted_bbs = {1};
    auto result = run::run_election(setup, sc);
    for (const auto& v : result.voters) CHECK(v.got_receipt);
    auto transcript = result.majority_transcript(params.f_b);
    REQUIRE(transcript.has_value());
    REQUIRE(transcript->result.has_value());
    auto report = audit::audit(*transcript, {});
    CHECK(report.passed());
}

TEST_CASE("conflicting codes for one ballot: at most one receipt, sets stay consistent") {
    for (std::uint64_t seed : {50, 51, 52, 53}) {
        auto params = small_params(seed, 2);
        auto setup = ea::setup(params);
        run::Scenario sc;
        sc.sim.seed = seed;
        sc.sim.t_end = sim::Tick(params.t_end);
        // two voters race different codes for serial 1
        sc.intents.push_back(run::VoterIntent{1, ea::Part::A, 0, 5});
        sc.intents.push_back(run::VoterIntent{1, ea::Part::B, 1, 5});
        sc.intents.push_back(run::VoterIntent{2, ea::Part::A, 1, 5});
        auto result = run::run_election(setup, sc);
        int receipts_serial1 = 0;
        for (const auto& v : result.voters)
            if (v.serial == 1 && v.got_receipt) receipts_serial1++;
        CHECK(receipts_serial1 <= 1);
        // honest sets still identical, and receipted codes included
        std::optional<codec::Bytes> canon;
        for (const auto& s : result.vc_sets) {
            REQUIRE(s.has_value());
            if (!canon)
                canon = s->canonical();
            else
                CHECK(*canon == s->canonical());
        }
        for (const auto& v : result.voters) {
            if (!v.got_receipt) continue;
            for (const auto& s : result.vc_sets) {
                bool found = false;
                for (const auto& e : s->entries)
                    if (e.serial == v.serial && e.voted && e.vote_code == v.cast_code)
                        found = true;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("t_wait formula values") {
    CHECK(nodes::compute_t_wait(4, 1, 2, 5) == 66);
    CHECK(nodes::compute_t_wait(4, 0, 0, 0) == 0);
    CHECK(nodes::compute_t_wait(7, 1, 1, 1) == 36);
}

TEST_CASE("conformance: too many corrupted nodes is refused unless overridden") {
    auto params = small_params(60, 2);
    auto setup = ea::setup(params);
    run::Scenario sc;
    sc.sim.seed = 60;
    sc.sim.t_end = sim::Tick(params.t_end);
    sc.sim.corrupted_vcs = {0, 1};  // f_v=1 allows only one
    CHECK_THROWS_AS(run::run_election(setup, sc), sim::ConformanceError);
    sc.sim.unsound_override = true;
    sc.sim.max_ticks = 2000;
    CHECK_NOTHROW(run::run_election(setup, sc));
}

TEST_CASE("observed delays and drifts respect the configured bounds") {
    auto params = small_params(61);
    auto setup = ea::setup(params);
    auto sc = scripted(params, 61);
    sc.sim.delta = 5;
    sc.sim.drift = 2;
    auto result = run::run_election(setup, sc);
    CHECK(result.transcript.metrics.max_honest_delay <= 5);
    CHECK(result.transcript.metrics.max_drift_seen <= 2);
    for (const auto& v : result.voters) CHECK(v.got_receipt);
}

TEST_CASE("delay boundary schedules: all-min, all-max, alternating") {
    for (const char* policy : {"all-min", "all-max", "alternating"}) {
        auto params = small_params(62);
        auto setup = ea::setup(params);
        auto sc = scripted(params, 62);
        sc.sim.delay_policy = policy;
        auto result = run::run_election(setup, sc);
        for (const auto& v : result.voters) CHECK(v.got_receipt);
        check_safety(setup, sc, result);
    }
}

TEST_CASE("safety mode: drops plus retransmission still deliver the election") {
    auto params = small_params(63, 4);
    auto setup = ea::setup(params);
    auto sc = scripted(params, 63);
    sc.sim.mode = sim::Mode::kSafety;
    sc.patience = 200;  // drops push latencies past the liveness bound
    auto result = run::run_election(setup, sc);
    CHECK(result.transcript.metrics.retransmissions > 0);
    for (const auto& v : result.voters) CHECK(v.got_receipt);
    check_safety(setup, sc, result);
}
