#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "agora/hash.hpp"
#include "agora/messages.hpp"
#include "agora/rng.hpp"

namespace agora::sim {

using Tick = std::int64_t;

// liveness mode: every honest-honest message arrives within delta of its
// send; safety mode: transmissions may be dropped, only retransmission
// keeps delivery live (eventual delivery, no bound)
enum class Mode : std::uint8_t { kLiveness = 0, kSafety = 1 };

struct SimConfig {
    std::uint64_t seed = 0;
    std::uint32_t delta = 5;  // max delivery delay, ticks
    std::uint32_t drift = 0;  // max |Clock[X] - Clock|
    std::uint32_t t_comp = 1; // ticks a handler activation costs
    Tick t_end = 0;
    Tick barrier_d = -1;  // D; negative selects the default 2*drift + delta
    Mode mode = Mode::kLiveness;
    // "random" | "all-min" | "all-max" | "alternating"; the delay-maximizer
    // adversary is the sweep of the three boundary schedules plus seeds
    std::string delay_policy = "random";
    std::set<std::uint32_t> corrupted_vcs;
    std::set<std::uint32_t> corrupted_bbs;
    std::set<std::uint32_t> corrupted_trustees;
    std::set<std::uint32_t> corrupted_voters;
    std::string adversary = "none";
    bool unsound_override = false;
    Tick max_ticks = 2'000'000;
    bool log_events = false;  // full event log in the transcript (big)

    Tick barrier() const { return barrier_d >= 0 ? barrier_d : 2 * Tick(drift) + Tick(delta); }
};

class Simulator;

// capabilities available to a node inside one handler activation
class NodeCtx {
public:
    NodeCtx(Simulator& sim, proto::NodeAddr self, Tick global);

    proto::NodeAddr self() const { return self_; }
    Tick local_now() const;
    void send(proto::NodeAddr to, proto::WireMessage m);
    // adversary-only: claim another corrupted identity, or none (public channel)
    void send_spoofed(proto::NodeAddr claimed_from, proto::NodeAddr to, proto::WireMessage m);
    void wake_at(Tick local_tick);
    rng::Prng& rng();

private:
    Simulator& sim_;
    proto::NodeAddr self_;
    Tick global_;
};

class Node {
public:
    virtual ~Node() = default;
    virtual void on_init(NodeCtx& ctx) { (void)ctx; }
    // authenticated: the claimed sender really is the sender (or the
    // adversary coalition legitimately owns that identity)
    virtual void on_message(NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                            const proto::WireMessage& m) = 0;
    virtual void on_wake(NodeCtx& ctx, Tick local) {
        (void)ctx;
        (void)local;
    }
    virtual codec::Bytes state_digest() const = 0;
    virtual bool is_idle() const { return true; }  // no outstanding local work
};

struct Metrics {
    std::map<std::uint8_t, std::uint64_t> messages_by_kind;
    std::uint64_t messages_total = 0;
    std::uint64_t retransmissions = 0;
    std::uint64_t spoofed_rejected = 0;
    Tick max_honest_delay = 0;
    Tick max_drift_seen = 0;
    std::vector<Tick> receipt_latencies;  // filled by voner sessions
};

struct RunTranscript {
    crypto::Digest digest{};
    Tick final_tick = 0;
    Metrics metrics;
    std::vector<std::string> event_log;  // only when log_events
    std::map<std::string, std::string> node_digests_hex;
};

class ConformanceError : public std::runtime_error {
public:
    explicit ConformanceError(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic discrete-event simulator: one ordered queue of (tick, seq)
// events, integer clocks with per-node bounded drift, per-message bounded
// (or, in safety mode, unbounded-but-retransmitted) delays, and adversary
// message injection under corrupted identities. Identical (config, nodes,
// scenario) produce bit-identical transcripts.
class Simulator {
public:
    Simulator(SimConfig cfg, std::uint32_t n_vc, std::uint32_t n_bb, std::uint32_t n_trustee);

    void add_node(proto::NodeAddr addr, std::shared_ptr<Node> node);
    Node* node(proto::NodeAddr addr);

    // schedule initial activations; then run to quiescence or max_ticks
    RunTranscript run();

    Tick drift_of(proto::NodeAddr addr) const;
    bool is_corrupted(proto::NodeAddr addr) const;
    const SimConfig& config() const { return cfg_; }

    // used by NodeCtx
    void submit_send(proto::NodeAddr actual_from, proto::NodeAddr claimed_from,
                     proto::NodeAddr to, proto::WireMessage m, Tick global_now);
    void submit_wake(proto::NodeAddr who, Tick global_tick);
    rng::Prng& node_rng(proto::NodeAddr addr);

private:
    struct Event {
        Tick at = 0;
        std::uint64_t seq = 0;
        enum class Kind : std::uint8_t { kDeliver, kWake, kRetransmit } kind = Kind::kDeliver;
        proto::NodeAddr from, claimed_from, to;
        bool authenticated = false;
        proto::WireMessage msg;
        std::uint64_t msg_id = 0;

        bool operator<(const Event& o) const {
            return at != o.at ? at > o.at : seq > o.seq;  // min-heap order
        }
    };

    struct PendingSend {
        proto::NodeAddr from, claimed_from, to;
        proto::WireMessage msg;
        bool acked = false;
        std::uint32_t attempts = 0;
    };

    Tick delay_for(proto::NodeAddr from, proto::NodeAddr to);
    bool drop_transmission(proto::NodeAddr from, proto::NodeAddr to, std::uint32_t attempt);
    void schedule_delivery(std::uint64_t msg_id, Tick from_tick);
    void dispatch(const Event& ev);
    void log(Tick at, const std::string& line);

    SimConfig cfg_;
    std::uint32_t n_vc_, n_bb_, n_trustee_;
    rng::Prng rng_;
    std::map<proto::NodeAddr, std::shared_ptr<Node>> nodes_;
    std::map<proto::NodeAddr, Tick> drifts_;
    std::map<proto::NodeAddr, rng::Prng> node_rngs_;
    std::vector<Event> heap_;
    std::uint64_t seq_ = 0;
    std::map<std::uint64_t, PendingSend> pending_;
    std::uint64_t next_msg_id_ = 1;
    std::uint64_t alternating_counter_ = 0;
    Metrics metrics_;
    std::vector<std::string> event_log_;
    codec::Writer digest_stream_;
    Tick now_ = 0;
};

// first value reported identically by at least `quorum` replies, if any
std::optional<codec::Bytes> majority_value(const std::vector<std::optional<codec::Bytes>>& replies,
                                           std::uint32_t quorum);

}  // namespace agora::sim
