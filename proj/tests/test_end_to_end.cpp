#include "agora/election_run.hpp"

#include "doctest.h"

using namespace agora;

namespace {

ea::ElectionParams e2e_params(std::uint64_t n, std::uint64_t m, std::uint64_t seed) {
    ea::ElectionParams p;
    p.n = n;
    p.m = m;
    p.n_v = 4;
    p.f_v = 1;
    p.n_b = 3;
    p.f_b = 1;
    p.n_t = 3;
    p.h_t = 2;
    p.t_end = 400;
    p.rng_seed = seed;
    p.group_name = "toy64";
    return p;
}

run::Scenario honest_scenario(const ea::ElectionParams& params,
                              const std::vector<std::pair<ea::Part, std::uint32_t>>& votes,
                              std::uint64_t seed) {
    run::Scenario sc;
    sc.sim.seed = seed;
    sc.sim.delta = 5;
    sc.sim.drift = 2;
    sc.sim.t_comp = 1;
    sc.sim.t_end = sim::Tick(params.t_end);
    for (std::size_t i = 0; i < votes.size(); i++) {
        run::VoterIntent intent;
        intent.serial = i + 1;
        intent.part = votes[i].first;
        intent.option = votes[i].second;
        intent.start_tick = 5 + sim::Tick(i) * 3;
        sc.intents.push_back(intent);
    }
    return sc;
}

}  // namespace

TEST_CASE("honest end-to-end run: receipts, agreement, tally, audit") {
    auto params = e2e_params(8, 3, 42);
    auto setup = ea::setup(params);
    // 3 votes for option 1, 5 for option 3, scripted across parts
    std::vector<std::pair<ea::Part, std::uint32_t>> votes = {
        {ea::Part::A, 0}, {ea::Part::B, 0}, {ea::Part::A, 0}, {ea::Part::B, 2},
        {ea::Part::A, 2}, {ea::Part::B, 2}, {ea::Part::A, 2}, {ea::Part::A, 2},
    };
    auto scenario = honest_scenario(params, votes, 7);
    auto result = run::run_election(setup, scenario);

    // every voter got the printed receipt
    REQUIRE(result.voters.size() == 8);
    for (const auto& v : result.voters) {
        CHECK(v.got_receipt);
        CHECK(v.attempts == 1);
        const auto& printed = setup.ballots[v.serial - 1].part(v.part)[v.option];
        CHECK(v.receipt == printed.receipt);
    }

    // all honest VC nodes agree on the byte-identical vote set
    std::optional<codec::Bytes> canon;
    for (const auto& s : result.vc_sets) {
        REQUIRE(s.has_value());
        if (!canon)
            canon = s->canonical();
        else
            CHECK(*canon == s->canonical());
    }

    // every BB node published the same tally, equal to the scripted intents
    auto expected = run::intent_tally(params, scenario.intents);
    CHECK(expected == std::vector<std::uint64_t>{3, 0, 5});
    for (const auto& t : result.bb_transcripts) {
        REQUIRE(t.has_value());
        REQUIRE(t->result.has_value());
        CHECK(t->result->tally == expected);
    }

    // the full audit passes, including every voter's delegated checks
    auto transcript = result.majority_transcript(params.f_b);
    REQUIRE(transcript.has_value());
    auto delegated = run::delegated_audits(setup, result.voters);
    CHECK(delegated.size() == 8);
    auto report = audit::audit(*transcript, delegated);
    CHECK(report.transcript_complete);
    for (const auto& v : report.violations) {
        CAPTURE(audit::check_name(v.check));
        CAPTURE(v.serial);
        CAPTURE(v.detail);
        CHECK(false);
    }
}

TEST_CASE("determinism: same seed, same transcript digest") {
    auto params = e2e_params(3, 2, 9);
    auto setup = ea::setup(params);
    std::vector<std::pair<ea::Part, std::uint32_t>> votes = {
        {ea::Part::A, 0}, {ea::Part::B, 1}, {ea::Part::A, 1}};
    auto scenario = honest_scenario(params, votes, 11);
    auto r1 = run::run_election(setup, scenario);
    auto r2 = run::run_election(setup, scenario);
    CHECK(r1.transcript.digest == r2.transcript.digest);
    CHECK(r1.transcript.final_tick == r2.transcript.final_tick);

    auto scenario2 = scenario;
    scenario2.sim.seed = 12;
    auto r3 = run::run_election(setup, scenario2);
    CHECK_FALSE(r1.transcript.digest == r3.transcript.digest);
}

TEST_CASE("unvoted ballots surface as not-voted; empty election tallies zero") {
    auto params = e2e_params(3, 2, 10);
    auto setup = ea::setup(params);
    // only serial 2 votes
    run::Scenario sc;
    sc.sim.seed = 5;
    sc.sim.t_end = sim::Tick(params.t_end);
    sc.intents.push_back(run::VoterIntent{2, ea::Part::B, 1, 5});
    auto result = run::run_election(setup, sc);
    REQUIRE(result.voters.size() == 1);
    CHECK(result.voters[0].got_receipt);
    for (const auto& s : result.vc_sets) {
        REQUIRE(s.has_value());
        for (const auto& e : s->entries) {
            if (e.serial == 2)
                CHECK(e.voted);
            else
                CHECK_FALSE(e.voted);
        }
    }
    for (const auto& t : result.bb_transcripts) {
        REQUIRE(t->result.has_value());
        CHECK(t->result->tally == std::vector<std::uint64_t>{0, 1});
    }

    // nobody votes at all
    run::Scenario empty;
    empty.sim.seed = 6;
    empty.sim.t_end = sim::Tick(params.t_end);
    auto r2 = run::run_election(setup, empty);
    for (const auto& t : r2.bb_transcripts) {
        REQUIRE(t.has_value());
        REQUIRE(t->result.has_value());
        CHECK(t->result->tally == std::vector<std::uint64_t>{0, 0});
    }
}
