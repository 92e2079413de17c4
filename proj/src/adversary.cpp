#include "agora/adversary.hpp"

namespace agora::adversary {

bool known_policy(const std::string& name) {
    for (const char* p : kPolicyNames)
        if (name == p) return true;
    return false;
}

codec::Bytes SilentNode::state_digest() const {
    codec::Bytes d = {'s', 'i', 'l', 'e', 'n', 't'};
    return d;
}

void GarbageBbNode::on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                               const proto::WireMessage& m) {
    (void)authenticated;
    if (m.kind != proto::MsgKind::kBbRead) return;
    try {
        auto read = proto::unwrap_bb_read(m);
        proto::BbReadReply reply;
        reply.phase = read.phase;
        reply.request_id = read.request_id;
        reply.available = true;
        reply.body = ctx.rng().bytes(64);
        ctx.send(from, proto::wrap(reply));
    } catch (const codec::DecodeError&) {
    }
}

codec::Bytes GarbageBbNode::state_digest() const {
    codec::Bytes d = {'g', 'a', 'r', 'b', 'a', 'g', 'e'};
    return d;
}

std::optional<nodes::VcFaults> vc_faults_for(const std::string& policy) {
    nodes::VcFaults f;
    if (policy == "equivocating-vc") {
        f.equivocate_endorsements = true;
        f.divergent_push = true;
        return f;
    }
    if (policy == "share-withholder") {
        f.withhold_shares = true;
        return f;
    }
    if (policy == "recover-liar") {
        f.lie_on_recover = true;
        return f;
    }
    return std::nullopt;  // silent-vc and everything else: mute the node
}

}  // namespace agora::adversary
