#pragma once

#include "agora/adversary.hpp"
#include "agora/audit.hpp"
#include "agora/bb_node.hpp"
#include "agora/trustee.hpp"
#include "agora/vc_node.hpp"
#include "agora/voter.hpp"

namespace agora::run {

struct VoterIntent {
    std::uint64_t serial = 0;
    ea::Part part = ea::Part::A;
    std::uint32_t option = 0;
    sim::Tick start_tick = 0;
};

struct Scenario {
    std::vector<VoterIntent> intents;
    sim::SimConfig sim;
    sim::Tick patience = -1;  // negative: use the computed T_wait
};

struct RunResult {
    sim::RunTranscript transcript;
    std::vector<nodes::VoterOutcome> voters;
    // per node; nullopt for corrupted or unfinished nodes
    std::vector<std::optional<proto::VoteSet>> vc_sets;
    std::vector<std::optional<proto::ElectionTranscript>> bb_transcripts;
    std::vector<std::uint64_t> vc_conflict_metrics;

    // majority transcript across honest BB nodes, if f_b+1 agree
    std::optional<proto::ElectionTranscript> majority_transcript(std::uint32_t f_b) const;
};

sim::Tick default_patience(const ea::ElectionParams& params, const sim::SimConfig& sim);

RunResult run_election(const ea::SetupOutput& setup, const Scenario& scenario);

// the tally the scripted intents produce when every voter succeeds
std::vector<std::uint64_t> intent_tally(const ea::ElectionParams& params,
                                        std::span<const VoterIntent> intents);

// delegated audit package for every voter that reports an outcome
std::vector<audit::DelegatedAudit> delegated_audits(const ea::SetupOutput& setup,
                                                    std::span<const nodes::VoterOutcome> voters);

}  // namespace agora::run
