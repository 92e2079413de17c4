#include "agora/election_run.hpp"

namespace agora::run {

sim::Tick default_patience(const ea::ElectionParams& params, const sim::SimConfig& cfg) {
    return nodes::compute_t_wait(params.n_v, sim::Tick(cfg.t_comp), sim::Tick(cfg.drift),
                                 sim::Tick(cfg.delta));
}

std::optional<proto::ElectionTranscript> RunResult::majority_transcript(std::uint32_t f_b) const {
    std::vector<std::optional<codec::Bytes>> bodies;
    for (const auto& t : bb_transcripts) {
        if (!t) {
            bodies.push_back(std::nullopt);
            continue;
        }
        codec::Writer w;
        proto::encode(w, *t);
        bodies.push_back(w.take());
    }
    auto majority = sim::majority_value(bodies, f_b + 1);
    if (!majority) return std::nullopt;
    codec::Reader r(*majority);
    return proto::decode_transcript(r);
}

RunResult run_election(const ea::SetupOutput& setup, const Scenario& scenario) {
    const ea::ElectionParams& params = setup.public_info.params;
    sim::SimConfig cfg = scenario.sim;
    if (cfg.t_end == 0) cfg.t_end = sim::Tick(params.t_end);

    sim::Simulator simulator(cfg, params.n_v, params.n_b, params.n_t);

    std::vector<std::shared_ptr<nodes::VcNode>> vcs(params.n_v);
    std::vector<std::shared_ptr<nodes::BbNode>> bbs(params.n_b);
    std::vector<std::shared_ptr<nodes::VoterNode>> voters;

    for (std::uint32_t i = 0; i < params.n_v; i++) {
        proto::NodeAddr addr{proto::Role::kVc, i};
        if (cfg.corrupted_vcs.contains(i)) {
            auto faults = adversary::vc_faults_for(cfg.adversary);
            if (!faults) {
                simulator.add_node(addr, std::make_shared<adversary::SilentNode>());
                continue;
            }
            nodes::VcConfig vc{i,       params,         setup.vc_inits[i], setup.public_info,
                               setup.vc_keys[i], cfg.barrier(), 4 * sim::Tick(cfg.delta),
                               *faults};
            vcs[i] = std::make_shared<nodes::VcNode>(vc);
            simulator.add_node(addr, vcs[i]);
            continue;
        }
        nodes::VcConfig vc{i,       params,         setup.vc_inits[i], setup.public_info,
                           setup.vc_keys[i], cfg.barrier(), 4 * sim::Tick(cfg.delta),
                           nodes::VcFaults{}};
        vcs[i] = std::make_shared<nodes::VcNode>(vc);
        simulator.add_node(addr, vcs[i]);
    }

    for (std::uint32_t i = 0; i < params.n_b; i++) {
        proto::NodeAddr addr{proto::Role::kBb, i};
        if (cfg.corrupted_bbs.contains(i)) {
            if (cfg.adversary == "garbage-bb")
                simulator.add_node(addr, std::make_shared<adversary::GarbageBbNode>());
            else
                simulator.add_node(addr, std::make_shared<adversary::SilentNode>());
            continue;
        }
        nodes::BbConfig bb{i, params, setup.bb_init, setup.public_info, setup.bb_keys[i]};
        bbs[i] = std::make_shared<nodes::BbNode>(bb);
        simulator.add_node(addr, bbs[i]);
    }

    for (std::uint32_t i = 0; i < params.n_t; i++) {
        proto::NodeAddr addr{proto::Role::kTrustee, i};
        if (cfg.corrupted_trustees.contains(i)) {
            simulator.add_node(addr, std::make_shared<adversary::SilentNode>());
            continue;
        }
        trustee::TrusteeNodeConfig tc;
        tc.index = i;
        tc.params = params;
        tc.init = setup.trustee_inits[i];
        tc.pub = setup.public_info;
        tc.key = setup.trustee_keys[i];
        tc.start_local = sim::Tick(params.t_end) + cfg.barrier() + 1;
        tc.poll_interval = 4 * sim::Tick(cfg.delta);
        simulator.add_node(addr, std::make_shared<trustee::TrusteeNode>(tc));
    }

    sim::Tick patience =
        scenario.patience >= 0 ? scenario.patience : default_patience(params, cfg);
    std::uint32_t voter_id = 0;
    for (const auto& intent : scenario.intents) {
        proto::NodeAddr addr{proto::Role::kVoter, voter_id};
        if (intent.serial < 1 || intent.serial > params.n)
            throw std::invalid_argument("scenario: intent serial out of range");
        if (cfg.corrupted_voters.contains(voter_id)) {
            simulator.add_node(addr, std::make_shared<adversary::SilentNode>());
            voter_id++;
            continue;
        }
        nodes::VoterConfig vc;
        vc.index = voter_id;
        vc.ballot = setup.ballots[intent.serial - 1];
        vc.part = intent.part;
        vc.option = intent.option;
        vc.start_local = intent.start_tick;
        vc.patience = patience;
        vc.n_v = params.n_v;
        auto node = std::make_shared<nodes::VoterNode>(vc);
        voters.push_back(node);
        simulator.add_node(addr, node);
        voter_id++;
    }

    RunResult result;
    result.transcript = simulator.run();
    for (const auto& v : voters) result.voters.push_back(v->outcome());
    for (std::uint32_t i = 0; i < params.n_v; i++) {
        if (vcs[i] && !cfg.corrupted_vcs.contains(i) && vcs[i]->vote_set_ready())
            result.vc_sets.push_back(vcs[i]->final_vote_set());
        else
            result.vc_sets.push_back(std::nullopt);
        result.vc_conflict_metrics.push_back(vcs[i] ? vcs[i]->conflicting_endorse_requests() : 0);
    }
    for (std::uint32_t i = 0; i < params.n_b; i++) {
        if (bbs[i])
            result.bb_transcripts.push_back(bbs[i]->transcript());
        else
            result.bb_transcripts.push_back(std::nullopt);
    }
    return result;
}

std::vector<std::uint64_t> intent_tally(const ea::ElectionParams& params,
                                        std::span<const VoterIntent> intents) {
    std::vector<std::uint64_t> tally(params.m, 0);
    for (const auto& i : intents)
        if (i.option < params.m) tally[i.option]++;
    return tally;
}

std::vector<audit::DelegatedAudit> delegated_audits(const ea::SetupOutput& setup,
                                                    std::span<const nodes::VoterOutcome> voters) {
    std::vector<audit::DelegatedAudit> out;
    for (const auto& v : voters) {
        if (!v.got_receipt) continue;
        audit::DelegatedAudit d;
        d.serial = v.serial;
        d.unused_part = ea::other(v.part);
        d.unused_lines = setup.ballots[v.serial - 1].part(d.unused_part);
        d.cast_code = v.cast_code;
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace agora::run
