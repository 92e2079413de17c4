#pragma once

#include "agora/sim.hpp"
#include "agora/transcript.hpp"

namespace agora::nodes {

// T_wait = (2*N_v + 4)*T_comp + 12*drift + 6*delta
sim::Tick compute_t_wait(std::uint32_t n_v, sim::Tick t_comp, sim::Tick drift, sim::Tick delta);

struct VoterConfig {
    std::uint32_t index = 0;  // voter id (serial - 1)
    ea::Ballot ballot;
    ea::Part part = ea::Part::A;
    std::uint32_t option = 0;  // index into the part's printed lines
    sim::Tick start_local = 0;
    sim::Tick patience = 0;  // [d]-patience
    std::uint32_t n_v = 0;
};

struct VoterOutcome {
    bool got_receipt = false;
    bool exhausted = false;
    std::uint64_t receipt = 0;
    std::uint32_t attempts = 0;
    sim::Tick latency = 0;       // local ticks from first submission to receipt
    std::uint64_t serial = 0;
    codec::Bytes cast_code;
    ea::Part part = ea::Part::A;
    std::uint32_t option = 0;
};

// [d]-patient voting loop: submit the chosen line's vote code to a random
// VC node, wait d local ticks, blacklist on silence and retry at another
// randomly chosen node with the same (serial, code). Accepts only a
// receipt bit-equal to the printed one.
class VoterNode : public sim::Node {
public:
    explicit VoterNode(VoterConfig cfg);

    void on_init(sim::NodeCtx& ctx) override;
    void on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                    const proto::WireMessage& m) override;
    void on_wake(sim::NodeCtx& ctx, sim::Tick local) override;
    codec::Bytes state_digest() const override;

    const VoterOutcome& outcome() const { return outcome_; }

private:
    void attempt(sim::NodeCtx& ctx, sim::Tick local);

    VoterConfig cfg_;
    const ea::BallotLine* line_ = nullptr;
    std::set<std::uint32_t> blacklist_;
    std::optional<std::uint32_t> current_vc_;
    sim::Tick first_attempt_local_ = 0;
    sim::Tick deadline_ = 0;
    VoterOutcome outcome_;
};

}  // namespace agora::nodes
