#pragma once

#include <map>
#include <optional>
#include <set>

#include "agora/consensus.hpp"
#include "agora/ea.hpp"
#include "agora/messages.hpp"
#include "agora/sim.hpp"

namespace agora::nodes {

// byzantine behaviors a corrupted VC runs, switched on by adversary policy
struct VcFaults {
    bool equivocate_endorsements = false;  // sign conflicting codes freely
    bool withhold_shares = false;          // never disclose receipt shares
    bool divergent_push = false;           // send different vote sets to BB nodes
    bool lie_on_recover = false;           // answer recovery with bogus certificates
};

struct VcConfig {
    std::uint32_t index = 0;  // 0-based
    ea::ElectionParams params;
    ea::VcInit init;
    ea::PublicInfo pub;
    crypto::SigningKey key;
    sim::Tick barrier_d = 0;        // D: ticks past t_end before vote-set consensus
    sim::Tick retry_interval = 16;  // recover-request re-issue period
    VcFaults faults;
};

// Vote Collector node: validates submitted vote codes against the hash
// commitments in its init data, coordinates UCERT formation, discloses
// receipt shares, reconstructs receipts, and after the end-of-election
// barrier drives per-ballot vote-set consensus and pushes the agreed set
// (plus its msk share) to every BB node.
class VcNode : public sim::Node {
public:
    explicit VcNode(VcConfig cfg);

    void on_init(sim::NodeCtx& ctx) override;
    void on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                    const proto::WireMessage& m) override;
    void on_wake(sim::NodeCtx& ctx, sim::Tick local) override;
    codec::Bytes state_digest() const override;

    // post-run introspection
    bool vote_set_ready() const { return pushed_; }
    const proto::VoteSet& final_vote_set() const { return final_set_; }
    std::uint64_t conflicting_endorse_requests() const { return conflict_metric_; }

private:
    enum class Status : std::uint8_t { kNotVoted = 0, kPending, kVoted };

    struct Responder {
        bool active = false;
        codec::Bytes code;
        proto::NodeAddr source;
        std::map<std::uint32_t, crypto::Signature> endorsements;
    };

    struct BallotState {
        const ea::VcBallotEntry* entry = nullptr;
        Status status = Status::kNotVoted;
        codec::Bytes used_code;
        std::optional<proto::Ucert> ucert;
        std::map<std::uint32_t, crypto::Share> shares;  // by dealt share index
        std::optional<std::uint64_t> receipt;
        std::optional<proto::NodeAddr> reply_to;  // voter waiting on us
        std::optional<codec::Bytes> endorsed_code;
        Responder responder;
        bool share_sent = false;
        // vote-set consensus
        std::set<std::uint32_t> announce_senders;
        bool proposed = false;
        bool recover_pending = false;
        std::optional<proto::VoteSetEntry> final_entry;
    };

    struct LineRef {
        ea::Part part;
        std::uint32_t pos;
    };

    bool voting_open(sim::Tick local) const;
    BallotState* ballot(std::uint64_t serial);
    std::optional<LineRef> find_line(const BallotState& b, std::span<const std::uint8_t> code);
    bool check_ucert(const proto::Ucert& u);
    bool check_receipt_share(std::uint64_t serial, const LineRef& ref, const crypto::Share& share);
    void multicast(sim::NodeCtx& ctx, const proto::WireMessage& m);
    void send_consensus(sim::NodeCtx& ctx, std::vector<consensus::Msg> items);
    void become_pending(sim::NodeCtx& ctx, BallotState& b, std::uint64_t serial,
                        const codec::Bytes& code, const proto::Ucert& ucert);
    void add_share(sim::NodeCtx& ctx, BallotState& b, std::uint64_t serial,
                   const crypto::Share& share);
    void maybe_reconstruct(sim::NodeCtx& ctx, BallotState& b, std::uint64_t serial);

    void on_vote(sim::NodeCtx& ctx, proto::NodeAddr from, const proto::Vote& v);
    void on_endorse(sim::NodeCtx& ctx, proto::NodeAddr from, const proto::Endorse& e);
    void on_endorsement(sim::NodeCtx& ctx, const proto::Endorsement& e);
    void on_vote_p(sim::NodeCtx& ctx, proto::NodeAddr from, const proto::VoteP& vp);
    void start_vote_set_consensus(sim::NodeCtx& ctx);
    void on_announce(sim::NodeCtx& ctx, proto::NodeAddr from, const proto::Announce& a);
    void maybe_propose(sim::NodeCtx& ctx, std::uint64_t serial);
    void on_decision(sim::NodeCtx& ctx, std::uint64_t serial, std::uint8_t bit);
    void on_recover_request(sim::NodeCtx& ctx, proto::NodeAddr from,
                            const proto::RecoverRequest& rr);
    void on_recover_response(sim::NodeCtx& ctx, const proto::RecoverResponse& rr);
    void maybe_push(sim::NodeCtx& ctx);

    VcConfig cfg_;
    std::shared_ptr<const crypto::Group> group_;
    consensus::BinaryConsensus engine_;
    std::map<std::uint64_t, BallotState> ballots_;
    std::map<std::pair<std::uint64_t, codec::Bytes>, bool> ucert_cache_;
    std::set<std::tuple<std::uint64_t, std::uint8_t, std::uint32_t, std::uint32_t>> share_ok_;
    bool consensus_started_ = false;
    bool pushed_ = false;
    proto::VoteSet final_set_;
    std::map<std::uint64_t, proto::Ucert> final_ucerts_;
    std::uint64_t conflict_metric_ = 0;
};

}  // namespace agora::nodes
