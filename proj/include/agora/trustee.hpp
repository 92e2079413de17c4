#pragma once

#include "agora/sim.hpp"
#include "agora/transcript.hpp"

namespace agora::trustee {

// codes as published by the BB: [serial][part][pos]
using RevealedCodes = std::map<std::uint64_t, std::array<std::vector<codec::Bytes>, 2>>;

// serial-ordered voter coins: 0 for part A or unvoted, 1 for part B
crypto::CoinString derive_coins(const ea::ElectionParams& params, const proto::VoteSet& vote_set,
                                const RevealedCodes& codes);

struct PostOutput {
    proto::TrusteePost post;  // unsigned; the node signs before sending
    std::vector<std::uint64_t> discarded_serials;
};

// Pure per-trustee tally step: classify each ballot from the published
// vote set and revealed codes, post opening shares for unused lines and
// zk final-move shares for voted lines, discard invalid ballots, and sum
// this trustee's opening shares over the tally set into T_l.
PostOutput compute_posts(const crypto::Group& g, const ea::ElectionParams& params,
                         const ea::TrusteeInit& init, const proto::VoteSet& vote_set,
                         const RevealedCodes& codes);

struct TrusteeNodeConfig {
    std::uint32_t index = 0;  // 0-based
    ea::ElectionParams params;
    ea::TrusteeInit init;
    ea::PublicInfo pub;
    crypto::SigningKey key;
    sim::Tick start_local = 0;     // when to start polling the BB
    sim::Tick poll_interval = 20;  // retry period for majority reads
};

// Trustee node: majority-reads the vote set and revealed codes from the
// BB subsystem, runs compute_posts, and submits the signed post to every
// BB node.
class TrusteeNode : public sim::Node {
public:
    explicit TrusteeNode(TrusteeNodeConfig cfg);

    void on_init(sim::NodeCtx& ctx) override;
    void on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                    const proto::WireMessage& m) override;
    void on_wake(sim::NodeCtx& ctx, sim::Tick local) override;
    codec::Bytes state_digest() const override;

    bool posted() const { return posted_; }

private:
    void poll(sim::NodeCtx& ctx);
    void try_complete(sim::NodeCtx& ctx);

    TrusteeNodeConfig cfg_;
    std::shared_ptr<const crypto::Group> group_;
    std::uint64_t next_request_ = 1;
    // request id -> (phase, per-BB reply)
    std::map<std::uint64_t, std::pair<proto::BbPhase, std::vector<std::optional<codec::Bytes>>>>
        inflight_;
    std::optional<proto::VoteSet> vote_set_;
    std::optional<RevealedCodes> codes_;
    bool posted_ = false;
};

}  // namespace agora::trustee
