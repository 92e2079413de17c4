#include "agora/consensus.hpp"

#include <array>
#include <stdexcept>

namespace agora::consensus {

void encode(codec::Writer& w, const Msg& m) {
    w.u8(static_cast<std::uint8_t>(m.tag));
    w.u64(m.instance);
    w.u32(m.round);
    w.u8(m.phase);
    w.u32(m.origin);
    w.u8(m.value);
}

Msg decode_msg(codec::Reader& r) {
    Msg m;
    m.tag = static_cast<Tag>(r.u8());
    m.instance = r.u64();
    m.round = r.u32();
    m.phase = r.u8();
    m.origin = r.u32();
    m.value = r.u8();
    return m;
}

BinaryConsensus::BinaryConsensus(Config cfg) : cfg_(std::move(cfg)) {
    if (cfg_.n < 3 * cfg_.f + 1) throw std::invalid_argument("consensus: N >= 3f+1 required");
    if (!cfg_.coin) throw std::invalid_argument("consensus: coin function required");
}

std::uint32_t BinaryConsensus::round_of(InstanceId id) const {
    auto it = instances_.find(id);
    return it == instances_.end() ? 0 : it->second.round;
}

std::optional<std::uint8_t> BinaryConsensus::decision(InstanceId id) const {
    auto it = instances_.find(id);
    if (it == instances_.end()) return std::nullopt;
    return it->second.decided;
}

std::vector<InstanceId> BinaryConsensus::buffered_instances() const {
    std::vector<InstanceId> out;
    for (const auto& [id, msgs] : prebuffer_) out.push_back(id);
    return out;
}

BinaryConsensus::Outbound BinaryConsensus::propose(InstanceId id, std::uint8_t value) {
    Outbound out;
    Instance& in = inst(id);
    if (in.proposed) return out;
    in.proposed = true;
    in.value = value & 1;
    emit_phase(in, id, 1, 1, in.value, out.multicast);

    auto buf = prebuffer_.find(id);
    if (buf != prebuffer_.end()) {
        auto pending = std::move(buf->second);
        prebuffered_ -= pending.size();
        prebuffer_.erase(buf);
        for (auto& [from, m] : pending) rbc_input(in, id, from, m, out.multicast);
    }
    return out;
}

BinaryConsensus::Outbound BinaryConsensus::on_message(NodeId from, const Msg& m) {
    Outbound out;
    bool malformed = (m.tag != Tag::kEcho && m.tag != Tag::kReady) || m.phase < 1 || m.phase > 3 ||
                     m.round < 1 || m.round > cfg_.max_rounds + 1 || m.origin >= cfg_.n ||
                     from >= cfg_.n || from == cfg_.self ||
                     (m.phase < 3 && m.value > 1) || (m.phase == 3 && m.value > 3);
    if (malformed) {
        dropped_++;
        return out;
    }
    auto it = instances_.find(m.instance);
    if (it == instances_.end() || !it->second.proposed) {
        // message for an instance this node has not entered yet: hold it
        if (prebuffered_ < cfg_.buffer_cap) {
            prebuffer_[m.instance].emplace_back(from, m);
            prebuffered_++;
        } else {
            dropped_++;
        }
        return out;
    }
    Instance& in = it->second;
    if (in.halted && m.round > in.decided_round + 1) return out;
    rbc_input(in, m.instance, from, m, out.multicast);
    return out;
}

void BinaryConsensus::emit_phase(Instance& in, InstanceId id, std::uint32_t round,
                                 std::uint8_t phase, std::uint8_t value, std::vector<Msg>& out) {
    auto key = std::make_pair(round, phase);
    if (in.sent_phase[key]) return;
    in.sent_phase[key] = true;
    rbc_broadcast(in, id, round, phase, value, out);
}

void BinaryConsensus::rbc_broadcast(Instance& in, InstanceId id, std::uint32_t round,
                                    std::uint8_t phase, std::uint8_t value,
                                    std::vector<Msg>& out) {
    Msg m{Tag::kEcho, id, round, phase, cfg_.self, value};
    out.push_back(m);
    // loop our own echo back through the machine so thresholds count us
    rbc_input(in, id, cfg_.self, m, out);
}

void BinaryConsensus::rbc_input(Instance& in, InstanceId id, NodeId from, const Msg& m,
                                std::vector<Msg>& out) {
    RbcSlot& slot = in.rbc[{m.round, m.phase, m.origin}];
    if (m.tag == Tag::kEcho) {
        slot.echoes.emplace(from, m.value);  // first echo per sender wins
        // the origin's own echo doubles as the initial send: relay it
        if (from == m.origin && !slot.echo_sent) {
            slot.echo_sent = true;
            if (m.origin != cfg_.self) {
                Msg echo{Tag::kEcho, id, m.round, m.phase, m.origin, m.value};
                out.push_back(echo);
                rbc_input(in, id, cfg_.self, echo, out);
                return;
            }
        }
    } else {
        slot.readies.emplace(from, m.value);
    }

    // thresholds over matching values
    auto count_matching = [](const std::map<NodeId, std::uint8_t>& mp, std::uint8_t v) {
        std::size_t c = 0;
        for (auto& [n, val] : mp)
            if (val == v) c++;
        return c;
    };
    std::uint8_t v = m.value;
    if (!slot.ready_sent) {
        bool promote = count_matching(slot.echoes, v) >= 2 * cfg_.f + 1 ||
                       count_matching(slot.readies, v) >= cfg_.f + 1;
        if (promote) {
            slot.ready_sent = true;
            slot.ready_value = v;
            Msg ready{Tag::kReady, id, m.round, m.phase, m.origin, v};
            out.push_back(ready);
            rbc_input(in, id, cfg_.self, ready, out);
            return;
        }
    }
    if (!slot.delivered && count_matching(slot.readies, v) >= 2 * cfg_.f + 1) {
        slot.delivered = true;
        slot.delivered_value = v;
        rbc_deliver(in, id, m.round, m.phase, m.origin, v, out);
    }
}

void BinaryConsensus::rbc_deliver(Instance& in, InstanceId id, std::uint32_t round,
                                  std::uint8_t phase, NodeId origin, std::uint8_t value,
                                  std::vector<Msg>& out) {
    in.held[{round, phase}].emplace(origin, value);
    revalidate(in, id, out);
}

// Justification: could a correct node have sent this value, given some
// (N-f)-subset of the values we have accepted one phase earlier?
bool BinaryConsensus::justified(const Instance& in, std::uint32_t round, std::uint8_t phase,
                                NodeId /*origin*/, std::uint8_t value) const {
    const std::uint32_t q = quorum();
    auto counts = [&](std::uint32_t r, std::uint8_t ph) {
        std::array<std::size_t, 4> c{};
        auto it = in.accepted.find({r, ph});
        if (it != in.accepted.end())
            for (auto& [n, v] : it->second) c[v & 3]++;
        return c;
    };

    if (phase == 1) {
        if (round == 1) return true;
        // justified unless outweighed by d-marks for the other bit:
        // some (N-f)-subset of accepted phase-3 values avoids them
        auto c = counts(round - 1, 3);
        std::size_t d_other = c[2 | (1 - (value & 1))];
        std::size_t total = c[0] + c[1] + c[2] + c[3];
        return total - d_other >= q;
    }
    if (phase == 2) {
        auto c = counts(round, 1);
        std::size_t c_total = c[0] + c[1];
        std::size_t c_w = c[value & 1];
        std::size_t maj = (q + 1) / 2;  // majority (ties keep the sender's value)
        std::size_t take_w = std::min<std::size_t>(c_w, q);
        return c_total >= q && take_w >= maj && q - take_w <= c_total - c_w;
    }
    // phase 3
    auto c = counts(round, 2);
    std::size_t c0 = c[0], c1 = c[1];
    bool dmark = value & 2;
    std::uint8_t bit = value & 1;
    std::size_t abs_maj = cfg_.n / 2 + 1;
    if (dmark) return c[bit] >= abs_maj;
    // undecided: some (N-f)-subset has no absolute majority
    if (c0 + c1 < q) return false;
    std::size_t fl = cfg_.n / 2;
    std::size_t hi = std::min(c0, fl);
    std::size_t need_ones_cap = std::min(c1, fl);
    if (need_ones_cap > q) need_ones_cap = q;
    std::size_t lo = q > need_ones_cap ? q - need_ones_cap : 0;
    return lo <= hi;
}

void BinaryConsensus::revalidate(Instance& in, InstanceId id, std::vector<Msg>& out) {
    // accept() can cascade back here through emitted self-echoes; defer the
    // nested pass instead of mutating held while iterating it
    if (in.revalidating) {
        in.revalidate_dirty = true;
        return;
    }
    in.revalidating = true;
    bool progressed = true;
    while (progressed) {
        in.revalidate_dirty = false;
        std::vector<std::tuple<std::uint32_t, std::uint8_t, NodeId, std::uint8_t>> ready;
        for (auto& [key, origins] : in.held)
            for (auto& [origin, value] : origins)
                if (justified(in, key.first, key.second, origin, value))
                    ready.emplace_back(key.first, key.second, origin, value);
        for (auto& [round, phase, origin, value] : ready) {
            in.held[{round, phase}].erase(origin);
            accept(in, id, round, phase, origin, value, out);
        }
        progressed = !ready.empty() || in.revalidate_dirty;
    }
    in.revalidating = false;
}

void BinaryConsensus::accept(Instance& in, InstanceId id, std::uint32_t round, std::uint8_t phase,
                             NodeId origin, std::uint8_t value, std::vector<Msg>& out) {
    in.accepted[{round, phase}].emplace(origin, value);
    try_advance(in, id, out);
}

void BinaryConsensus::try_advance(Instance& in, InstanceId id, std::vector<Msg>& out) {
    while (!in.halted && !in.failed) {
        auto it = in.accepted.find({in.round, in.step});
        if (it == in.accepted.end() || it->second.size() < quorum()) return;
        std::array<std::size_t, 4> c{};
        for (auto& [n, v] : it->second) c[v & 3]++;

        if (in.step == 1) {
            if (c[1] > c[0])
                in.value = 1;
            else if (c[0] > c[1])
                in.value = 0;  // tie keeps the current value
            in.step = 2;
            emit_phase(in, id, in.round, 2, in.value, out);
        } else if (in.step == 2) {
            std::size_t abs_maj = cfg_.n / 2 + 1;
            std::uint8_t phase3;
            if (c[0] >= abs_maj) {
                in.value = 0;
                phase3 = 0 | 2;
            } else if (c[1] >= abs_maj) {
                in.value = 1;
                phase3 = 1 | 2;
            } else {
                phase3 = in.value;
            }
            in.step = 3;
            emit_phase(in, id, in.round, 3, phase3, out);
        } else {
            // phase 3 resolution: 2f+1 d-marks decide, f+1 adopt, else coin
            std::size_t d0 = c[2], d1 = c[3];
            std::uint8_t lead = d1 > d0 ? 1 : 0;
            std::size_t dlead = std::max(d0, d1);
            if (dlead >= 2 * cfg_.f + 1) {
                if (!in.decided) {
                    in.decided = lead;
                    in.decided_round = in.round;
                }
                in.value = lead;
            } else if (dlead >= cfg_.f + 1) {
                in.value = lead;
            } else if (!in.decided) {
                in.value = cfg_.coin(id, in.round) & 1;
            } else {
                in.value = *in.decided;
            }

            if (in.decided && in.round >= in.decided_round + 1) {
                in.halted = true;
                return;
            }
            if (in.round >= cfg_.max_rounds) {
                in.failed = true;
                return;
            }
            in.round++;
            in.step = 1;
            emit_phase(in, id, in.round, 1, in.value, out);
        }
    }
}

}  // namespace agora::consensus
