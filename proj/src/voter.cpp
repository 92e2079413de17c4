#include "agora/voter.hpp"

namespace agora::nodes {

sim::Tick compute_t_wait(std::uint32_t n_v, sim::Tick t_comp, sim::Tick drift, sim::Tick delta) {
    return (2 * sim::Tick(n_v) + 4) * t_comp + 12 * drift + 6 * delta;
}

VoterNode::VoterNode(VoterConfig cfg) : cfg_(std::move(cfg)) {
    const auto& lines = cfg_.ballot.part(cfg_.part);
    if (cfg_.option < lines.size()) line_ = &lines[cfg_.option];
    outcome_.serial = cfg_.ballot.serial_no;
    outcome_.part = cfg_.part;
    outcome_.option = cfg_.option;
    if (line_) outcome_.cast_code = line_->vote_code;
}

void VoterNode::on_init(sim::NodeCtx& ctx) {
    if (line_) ctx.wake_at(cfg_.start_local);
}

void VoterNode::attempt(sim::NodeCtx& ctx, sim::Tick local) {
    // ballot and code never change across attempts; only the node does
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t i = 0; i < cfg_.n_v; i++)
        if (!blacklist_.contains(i)) candidates.push_back(i);
    if (candidates.empty()) {
        outcome_.exhausted = true;
        return;
    }
    current_vc_ = candidates[ctx.rng().below(candidates.size())];
    outcome_.attempts++;
    if (outcome_.attempts == 1) first_attempt_local_ = local;
    ctx.send(proto::NodeAddr{proto::Role::kVc, *current_vc_},
             proto::wrap(proto::Vote{cfg_.ballot.serial_no, line_->vote_code}));
    deadline_ = local + cfg_.patience;
    ctx.wake_at(deadline_);
}

void VoterNode::on_wake(sim::NodeCtx& ctx, sim::Tick local) {
    if (outcome_.got_receipt || outcome_.exhausted) return;
    if (outcome_.attempts == 0) {
        attempt(ctx, local);
        return;
    }
    if (local < deadline_) return;  // stale wake
    // patience ran out: blacklist this VC node and resubmit elsewhere
    if (current_vc_) blacklist_.insert(*current_vc_);
    attempt(ctx, local);
}

void VoterNode::on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                           const proto::WireMessage& m) {
    (void)authenticated;  // the reply channel carries no authentication
    (void)from;
    if (outcome_.got_receipt || outcome_.exhausted || !line_) return;
    if (m.kind != proto::MsgKind::kReceipt) return;  // error replies: keep waiting
    try {
        auto r = proto::unwrap_receipt(m);
        if (r.serial != cfg_.ballot.serial_no) return;
        if (r.receipt != line_->receipt) return;  // not the printed receipt: reject
        outcome_.got_receipt = true;
        outcome_.receipt = r.receipt;
        outcome_.latency = ctx.local_now() - first_attempt_local_;
    } catch (const codec::DecodeError&) {
    }
}

codec::Bytes VoterNode::state_digest() const {
    codec::Writer w;
    w.str("voter-state");
    w.u64(cfg_.ballot.serial_no);
    w.u8(outcome_.got_receipt ? 1 : 0);
    w.u8(outcome_.exhausted ? 1 : 0);
    w.u64(outcome_.receipt);
    w.u32(outcome_.attempts);
    auto d = crypto::sha256(w.data());
    return codec::Bytes(d.begin(), d.end());
}

}  // namespace agora::nodes
