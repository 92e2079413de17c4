#include "agora/sim.hpp"

#include <algorithm>

namespace agora::sim {

namespace {

const char* role_name(proto::Role r) {
    switch (r) {
        case proto::Role::kVoter: return "voter";
        case proto::Role::kVc: return "vc";
        case proto::Role::kBb: return "bb";
        case proto::Role::kTrustee: return "trustee";
        case proto::Role::kClient: return "client";
    }
    return "?";
}

std::string addr_str(proto::NodeAddr a) {
    return std::string(role_name(a.role)) + "-" + std::to_string(a.index);
}

}  // namespace

NodeCtx::NodeCtx(Simulator& sim, proto::NodeAddr self, Tick global)
    : sim_(sim), self_(self), global_(global) {}

Tick NodeCtx::local_now() const { return global_ + sim_.drift_of(self_); }

void NodeCtx::send(proto::NodeAddr to, proto::WireMessage m) {
    sim_.submit_send(self_, self_, to, std::move(m), global_);
}

void NodeCtx::send_spoofed(proto::NodeAddr claimed_from, proto::NodeAddr to,
                           proto::WireMessage m) {
    sim_.submit_send(self_, claimed_from, to, std::move(m), global_);
}

void NodeCtx::wake_at(Tick local_tick) {
    Tick global = local_tick - sim_.drift_of(self_);
    sim_.submit_wake(self_, std::max(global, global_ + 1));
}

rng::Prng& NodeCtx::rng() { return sim_.node_rng(self_); }

Simulator::Simulator(SimConfig cfg, std::uint32_t n_vc, std::uint32_t n_bb,
                     std::uint32_t n_trustee)
    : cfg_(cfg), n_vc_(n_vc), n_bb_(n_bb), n_trustee_(n_trustee), rng_(cfg.seed) {
    for (auto i : cfg_.corrupted_vcs)
        if (i >= n_vc_) throw ConformanceError("corrupted vc index out of range");
    for (auto i : cfg_.corrupted_bbs)
        if (i >= n_bb_) throw ConformanceError("corrupted bb index out of range");
    for (auto i : cfg_.corrupted_trustees)
        if (i >= n_trustee_) throw ConformanceError("corrupted trustee index out of range");
    if (cfg_.delta < 1) throw ConformanceError("delta must be at least 1 tick");
}

void Simulator::add_node(proto::NodeAddr addr, std::shared_ptr<Node> node) {
    nodes_[addr] = std::move(node);
    // bounded drift, fixed per node per run; extremes are reachable
    rng::Prng d = rng_.derive("drift", (std::uint64_t(addr.role) << 32) | addr.index);
    Tick span = 2 * Tick(cfg_.drift) + 1;
    drifts_[addr] = Tick(d.below(static_cast<std::uint64_t>(span))) - Tick(cfg_.drift);
    node_rngs_.emplace(addr, rng_.derive("node", (std::uint64_t(addr.role) << 32) | addr.index));
}

Node* Simulator::node(proto::NodeAddr addr) {
    auto it = nodes_.find(addr);
    return it == nodes_.end() ? nullptr : it->second.get();
}

Tick Simulator::drift_of(proto::NodeAddr addr) const {
    auto it = drifts_.find(addr);
    return it == drifts_.end() ? 0 : it->second;
}

bool Simulator::is_corrupted(proto::NodeAddr addr) const {
    switch (addr.role) {
        case proto::Role::kVc: return cfg_.corrupted_vcs.contains(addr.index);
        case proto::Role::kBb: return cfg_.corrupted_bbs.contains(addr.index);
        case proto::Role::kTrustee: return cfg_.corrupted_trustees.contains(addr.index);
        case proto::Role::kVoter: return cfg_.corrupted_voters.contains(addr.index);
        case proto::Role::kClient: return false;
    }
    return false;
}

rng::Prng& Simulator::node_rng(proto::NodeAddr addr) { return node_rngs_.at(addr); }

Tick Simulator::delay_for(proto::NodeAddr from, proto::NodeAddr to) {
    (void)from;
    (void)to;
    if (cfg_.delay_policy == "all-min") return 1;
    if (cfg_.delay_policy == "all-max") return Tick(cfg_.delta);
    if (cfg_.delay_policy == "alternating")
        return (alternating_counter_++ % 2 == 0) ? 1 : Tick(cfg_.delta);
    return Tick(rng_.below(cfg_.delta)) + 1;
}

bool Simulator::drop_transmission(proto::NodeAddr from, proto::NodeAddr to,
                                  std::uint32_t attempt) {
    if (cfg_.mode != Mode::kSafety) return false;
    if (is_corrupted(from) || is_corrupted(to)) return false;  // adversary's own business
    // adversary defers honest traffic, but retransmission wins eventually
    if (attempt >= 6) return false;
    return rng_.below(2) == 0;
}

void Simulator::submit_send(proto::NodeAddr actual_from, proto::NodeAddr claimed_from,
                            proto::NodeAddr to, proto::WireMessage m, Tick global_now) {
    // BB nodes are isolated from each other by design
    if (actual_from.role == proto::Role::kBb && to.role == proto::Role::kBb)
        throw std::logic_error("BB nodes never contact each other");
    std::uint64_t id = next_msg_id_++;
    pending_[id] = PendingSend{actual_from, claimed_from, to, std::move(m), false, 0};
    schedule_delivery(id, global_now + Tick(cfg_.t_comp));
}

void Simulator::schedule_delivery(std::uint64_t msg_id, Tick from_tick) {
    PendingSend& p = pending_.at(msg_id);
    p.attempts++;
    bool dropped = drop_transmission(p.from, p.to, p.attempts);
    Tick delay = delay_for(p.from, p.to);
    if (cfg_.mode == Mode::kSafety && (is_corrupted(p.from) || is_corrupted(p.to)))
        delay = Tick(rng_.below(3 * cfg_.delta)) + 1;  // byzantine edges are unconstrained

    if (!dropped) {
        Event ev;
        ev.at = from_tick + delay;
        ev.seq = seq_++;
        ev.kind = Event::Kind::kDeliver;
        ev.from = p.from;
        ev.claimed_from = p.claimed_from;
        ev.to = p.to;
        ev.msg = p.msg;
        ev.msg_id = msg_id;
        ev.authenticated = (p.claimed_from == p.from) ||
                           (is_corrupted(p.claimed_from) && is_corrupted(p.from));
        heap_.push_back(ev);
        std::push_heap(heap_.begin(), heap_.end());
        if (!is_corrupted(p.from) && !is_corrupted(p.to)) {
            metrics_.max_honest_delay = std::max(metrics_.max_honest_delay, delay);
        }
    }
    // retransmit until the transport ack lands
    Event rt;
    rt.at = from_tick + 2 * Tick(cfg_.delta) + 1;
    rt.seq = seq_++;
    rt.kind = Event::Kind::kRetransmit;
    rt.msg_id = msg_id;
    heap_.push_back(rt);
    std::push_heap(heap_.begin(), heap_.end());
}

void Simulator::submit_wake(proto::NodeAddr who, Tick global_tick) {
    Event ev;
    ev.at = std::max(global_tick, now_);
    ev.seq = seq_++;
    ev.kind = Event::Kind::kWake;
    ev.to = who;
    heap_.push_back(ev);
    std::push_heap(heap_.begin(), heap_.end());
}

void Simulator::log(Tick at, const std::string& line) {
    std::string entry = std::to_string(at) + " " + line;
    digest_stream_.str(entry);
    if (cfg_.log_events) event_log_.push_back(std::move(entry));
}

void Simulator::dispatch(const Event& ev) {
    auto it = nodes_.find(ev.to);
    if (it == nodes_.end()) return;
    NodeCtx ctx(*this, ev.to, ev.at);
    if (ev.kind == Event::Kind::kWake) {
        log(ev.at, "wake " + addr_str(ev.to));
        it->second->on_wake(ctx, ev.at + drift_of(ev.to));
        return;
    }
    log(ev.at, "deliver " + addr_str(ev.claimed_from) + "->" + addr_str(ev.to) + " kind=" +
                   std::to_string(static_cast<int>(ev.msg.kind)));
    metrics_.messages_total++;
    metrics_.messages_by_kind[static_cast<std::uint8_t>(ev.msg.kind)]++;
    if (!ev.authenticated) metrics_.spoofed_rejected++;  // receivers drop these on auth channels
    it->second->on_message(ctx, ev.claimed_from, ev.authenticated, ev.msg);
}

RunTranscript Simulator::run() {
    // sanity vs the stated threat model unless explicitly overridden
    if (!cfg_.unsound_override) {
        if (3 * cfg_.corrupted_vcs.size() + 1 > n_vc_)
            throw ConformanceError("corrupted VC count violates N_v >= 3f_v+1");
        if (2 * cfg_.corrupted_bbs.size() + 1 > n_bb_)
            throw ConformanceError("corrupted BB count violates N_b >= 2f_b+1");
    }
    for (auto& [addr, d] : drifts_)
        metrics_.max_drift_seen = std::max<Tick>(metrics_.max_drift_seen, std::abs(d));

    for (auto& [addr, node] : nodes_) {
        NodeCtx ctx(*this, addr, 0);
        node->on_init(ctx);
    }
    while (!heap_.empty()) {
        std::pop_heap(heap_.begin(), heap_.end());
        Event ev = std::move(heap_.back());
        heap_.pop_back();
        now_ = std::max(now_, ev.at);
        if (ev.at > cfg_.max_ticks) break;
        if (ev.kind == Event::Kind::kRetransmit) {
            auto p = pending_.find(ev.msg_id);
            if (p == pending_.end() || p->second.acked) {
                pending_.erase(ev.msg_id);
                continue;
            }
            metrics_.retransmissions++;
            schedule_delivery(ev.msg_id, ev.at);
            continue;
        }
        if (ev.kind == Event::Kind::kDeliver) {
            auto p = pending_.find(ev.msg_id);
            if (p != pending_.end()) p->second.acked = true;  // transport-level ack
        }
        dispatch(ev);
    }

    RunTranscript t;
    t.final_tick = now_;
    t.metrics = metrics_;
    t.event_log = std::move(event_log_);
    for (auto& [addr, node] : nodes_) {
        auto digest = node->state_digest();
        std::string hex = codec::to_hex(digest);
        t.node_digests_hex[addr_str(addr)] = hex;
        digest_stream_.str(addr_str(addr));
        digest_stream_.raw(digest);
    }
    t.digest = crypto::sha256(digest_stream_.data());
    return t;
}

std::optional<codec::Bytes> majority_value(const std::vector<std::optional<codec::Bytes>>& replies,
                                           std::uint32_t quorum) {
    std::map<codec::Bytes, std::uint32_t> counts;
    for (const auto& r : replies) {
        if (!r) continue;
        if (++counts[*r] >= quorum) return *r;
    }
    return std::nullopt;
}

}  // namespace agora::sim
