#pragma once

#include "agora/sim.hpp"
#include "agora/transcript.hpp"

namespace agora::nodes {

struct BbConfig {
    std::uint32_t index = 0;  // 0-based
    ea::ElectionParams params;
    ea::BbInit init;
    ea::PublicInfo pub;
    crypto::SigningKey key;
};

// Bulletin Board node: publishes its initialization data, accepts the
// final vote set once f_v+1 VC nodes submit identical copies, rebuilds
// msk from N_v-f_v dealer-signed shares to reveal the vote codes, and
// combines h_t valid trustee posts into the published tally. BB nodes
// never talk to each other; readers take the majority across nodes.
class BbNode : public sim::Node {
public:
    explicit BbNode(BbConfig cfg);

    void on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                    const proto::WireMessage& m) override;
    codec::Bytes state_digest() const override;

    const proto::ElectionTranscript& transcript() const { return transcript_; }
    bool result_ready() const { return transcript_.result.has_value(); }
    bool flagged_resubmission() const { return flagged_resubmission_; }
    bool corrupted_shares_reported() const { return corrupted_shares_; }

private:
    void on_push(const proto::BbPush& push, std::uint32_t vc_index);
    void maybe_publish_set();
    void maybe_reveal_codes();
    void on_post(const proto::TrusteePost& post, std::uint32_t trustee_index);
    void maybe_result();
    bool combine_posts(const std::vector<const proto::TrusteePost*>& subset);
    const ea::BbBallotEntry* ballot_for(std::uint64_t serial) const;

    BbConfig cfg_;
    std::shared_ptr<const crypto::Group> group_;
    proto::ElectionTranscript transcript_;
    std::map<std::uint32_t, proto::BbPush> pushes_;       // latest per VC
    std::map<std::uint32_t, crypto::Share> msk_shares_;   // dealer-verified
    std::map<std::uint32_t, proto::TrusteePost> posts_;   // sig-verified, by 1-based index
    std::map<std::uint64_t, const ea::BbBallotEntry*> ballots_by_serial_;
    bool flagged_resubmission_ = false;
    bool corrupted_shares_ = false;
};

}  // namespace agora::nodes
