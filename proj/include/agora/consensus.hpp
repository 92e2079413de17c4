#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <tuple>
#include <optional>
#include <vector>

#include "agora/codec.hpp"

namespace agora::consensus {

using InstanceId = std::uint64_t;
using NodeId = std::uint32_t;

enum class Tag : std::uint8_t { kEcho = 0, kReady = 1, kCoin = 2 };
// kCoin is part of the wire schema for coin-exchange variants; the local-coin
// protocol below never emits it and drops it as malformed.

// One per-instance protocol message. The transport may carry many of these
// in a single signed wire message (batching); semantics are per-item.
struct Msg {
    Tag tag = Tag::kEcho;
    InstanceId instance = 0;
    std::uint32_t round = 0;
    std::uint8_t phase = 0;   // 1..3
    NodeId origin = 0;        // whose broadcast this echo/ready supports
    std::uint8_t value = 0;   // phases 1,2: bit; phase 3: bit | (dmark << 1)

    bool operator==(const Msg&) const = default;
};

void encode(codec::Writer& w, const Msg& m);
Msg decode_msg(codec::Reader& r);

// Asynchronous binary Byzantine consensus for N >= 3f+1, Bracha style:
// every protocol value travels by reliable broadcast (echo/ready with
// 2f+1 / f+1 / 2f+1 thresholds), and accepted values feed a three-phase
// round with majority, absolute-majority marking, and a 2f+1-decide /
// f+1-adopt / coin tail. Messages that a correct sender could not have
// produced given the accepted history are held back until justified.
//
// The engine is a pure state machine: feed it events, collect outbound
// messages. It never touches a clock; liveness comes from the transport
// retransmitting. One engine instance handles many consensus instances.
class BinaryConsensus {
public:
    struct Config {
        NodeId self = 0;
        std::uint32_t n = 0;
        std::uint32_t f = 0;
        // local unpredictable coin, seeded per (node, instance, round)
        std::function<std::uint8_t(InstanceId, std::uint32_t)> coin;
        std::uint32_t max_rounds = 64;
        std::size_t buffer_cap = 1 << 20;  // pre-propose buffered messages
    };

    explicit BinaryConsensus(Config cfg);

    struct Outbound {
        std::vector<Msg> multicast;  // send to every other node
    };

    // duplicate propose for a known instance is a no-op
    Outbound propose(InstanceId id, std::uint8_t value);
    Outbound on_message(NodeId from, const Msg& m);

    std::optional<std::uint8_t> decision(InstanceId id) const;
    bool has_instance(InstanceId id) const { return instances_.contains(id); }
    std::uint32_t round_of(InstanceId id) const;
    std::size_t dropped_malformed() const { return dropped_; }

    // instances every honest node has proposed but this one has not yet
    std::vector<InstanceId> buffered_instances() const;

private:
    struct RbcSlot {
        std::map<NodeId, std::uint8_t> echoes;  // first echo per sender
        std::map<NodeId, std::uint8_t> readies;
        bool echo_sent = false;
        bool ready_sent = false;
        std::uint8_t ready_value = 0;
        bool delivered = false;
        std::uint8_t delivered_value = 0;
    };

    struct Instance {
        bool proposed = false;
        std::uint8_t value = 0;
        std::uint32_t round = 1;
        std::uint8_t step = 1;  // current phase this node is waiting on
        std::optional<std::uint8_t> decided;
        std::uint32_t decided_round = 0;
        bool halted = false;
        bool failed = false;  // round cap hit
        bool revalidating = false;
        bool revalidate_dirty = false;

        // key: (round, phase, origin) -> rbc state
        std::map<std::tuple<std::uint32_t, std::uint8_t, NodeId>, RbcSlot> rbc;
        // validated accepted values: (round, phase) -> origin -> value
        std::map<std::pair<std::uint32_t, std::uint8_t>, std::map<NodeId, std::uint8_t>> accepted;
        // delivered but not yet justified: (round, phase) -> origin -> value
        std::map<std::pair<std::uint32_t, std::uint8_t>, std::map<NodeId, std::uint8_t>> held;
        // phases already emitted, to make transitions idempotent
        std::map<std::pair<std::uint32_t, std::uint8_t>, bool> sent_phase;
    };

    Instance& inst(InstanceId id) { return instances_[id]; }
    void rbc_broadcast(Instance& in, InstanceId id, std::uint32_t round, std::uint8_t phase,
                       std::uint8_t value, std::vector<Msg>& out);
    void rbc_input(Instance& in, InstanceId id, NodeId from, const Msg& m, std::vector<Msg>& out);
    void rbc_deliver(Instance& in, InstanceId id, std::uint32_t round, std::uint8_t phase,
                     NodeId origin, std::uint8_t value, std::vector<Msg>& out);
    bool justified(const Instance& in, std::uint32_t round, std::uint8_t phase, NodeId origin,
                   std::uint8_t value) const;
    void revalidate(Instance& in, InstanceId id, std::vector<Msg>& out);
    void accept(Instance& in, InstanceId id, std::uint32_t round, std::uint8_t phase, NodeId origin,
                std::uint8_t value, std::vector<Msg>& out);
    void try_advance(Instance& in, InstanceId id, std::vector<Msg>& out);
    void emit_phase(Instance& in, InstanceId id, std::uint32_t round, std::uint8_t phase,
                    std::uint8_t value, std::vector<Msg>& out);

    std::uint32_t quorum() const { return cfg_.n - cfg_.f; }

    Config cfg_;
    std::map<InstanceId, Instance> instances_;
    std::map<InstanceId, std::vector<std::pair<NodeId, Msg>>> prebuffer_;
    std::size_t prebuffered_ = 0;
    std::size_t dropped_ = 0;
};

}  // namespace agora::consensus
