#include "agora/vc_node.hpp"

#include <algorithm>

namespace agora::nodes {

namespace {

consensus::BinaryConsensus::Config engine_config(const VcConfig& cfg) {
    consensus::BinaryConsensus::Config ec;
    ec.self = cfg.index;
    ec.n = cfg.params.n_v;
    ec.f = cfg.params.f_v;
    // local coin, unpredictable across (node, instance, round) but fixed per
    // run seed so executions replay exactly
    std::uint64_t coin_seed = cfg.params.rng_seed ^ (0x5851f42d4c957f2dULL * (cfg.index + 1));
    ec.coin = [coin_seed](consensus::InstanceId id, std::uint32_t round) {
        rng::Prng c(coin_seed ^ (id * 0x9e3779b97f4a7c15ULL) ^ (round * 2654435761ULL));
        return static_cast<std::uint8_t>(c.u64() & 1);
    };
    return ec;
}

}  // namespace

VcNode::VcNode(VcConfig cfg)
    : cfg_(std::move(cfg)),
      group_(crypto::make_group(cfg_.params.group_name)),
      engine_(engine_config(cfg_)) {
    for (const auto& entry : cfg_.init.ballots) {
        BallotState st;
        st.entry = &entry;
        ballots_.emplace(entry.serial_no, std::move(st));
    }
}

void VcNode::on_init(sim::NodeCtx& ctx) {
    // wake at the end-of-voting barrier to start vote-set consensus
    ctx.wake_at(sim::Tick(cfg_.params.t_end) + cfg_.barrier_d);
}

bool VcNode::voting_open(sim::Tick local) const {
    return local >= 0 && local < sim::Tick(cfg_.params.t_end);
}

VcNode::BallotState* VcNode::ballot(std::uint64_t serial) {
    auto it = ballots_.find(serial);
    return it == ballots_.end() ? nullptr : &it->second;
}

std::optional<VcNode::LineRef> VcNode::find_line(const BallotState& b,
                                                 std::span<const std::uint8_t> code) {
    for (int p = 0; p < 2; p++) {
        const auto& lines = b.entry->parts[p];
        for (std::uint32_t pos = 0; pos < lines.size(); pos++) {
            if (crypto::hash_commit_matches(lines[pos].code_commitment, code))
                return LineRef{static_cast<ea::Part>(p), pos};
        }
    }
    return std::nullopt;
}

bool VcNode::check_ucert(const proto::Ucert& u) {
    auto key = std::make_pair(u.serial, u.vote_code);
    auto it = ucert_cache_.find(key);
    if (it != ucert_cache_.end()) return it->second;
    bool ok = proto::ucert_valid(*group_, u, cfg_.pub.vc_pubs, cfg_.params.vc_quorum());
    ucert_cache_[key] = ok;
    return ok;
}

bool VcNode::check_receipt_share(std::uint64_t serial, const LineRef& ref,
                                 const crypto::Share& share) {
    auto key = std::make_tuple(serial, static_cast<std::uint8_t>(ref.part), ref.pos, share.index);
    if (share_ok_.contains(key)) return true;
    std::string ctx = ea::receipt_share_context(serial, ref.part, ref.pos);
    if (!crypto::verify_share(*group_, cfg_.pub.ea_pub, ctx, share)) return false;
    share_ok_.insert(key);
    return true;
}

void VcNode::multicast(sim::NodeCtx& ctx, const proto::WireMessage& m) {
    for (std::uint32_t i = 0; i < cfg_.params.n_v; i++) {
        if (i == cfg_.index) continue;
        ctx.send(proto::NodeAddr{proto::Role::kVc, i}, m);
    }
}

void VcNode::send_consensus(sim::NodeCtx& ctx, std::vector<consensus::Msg> items) {
    if (items.empty()) return;
    proto::ConsensusBatch batch;
    batch.items = std::move(items);
    batch.sig = crypto::sign(*group_, cfg_.key, proto::consensus_batch_payload(batch.items));
    multicast(ctx, proto::wrap(batch));
}

void VcNode::on_vote(sim::NodeCtx& ctx, proto::NodeAddr from, const proto::Vote& v) {
    if (!voting_open(ctx.local_now())) return;  // outside election hours: silence
    if (cfg_.faults.withhold_shares) return;    // withholder stonewalls voters too
    BallotState* b = ballot(v.serial);
    if (!b) {
        ctx.send(from, proto::wrap(proto::VoteError{v.serial, proto::VoteErrorReason::kUnknownSerial}));
        return;
    }
    if (b->status == Status::kVoted) {
        if (b->used_code == v.vote_code) {
            // recorded ballot: resend the stored receipt, no new round
            ctx.send(from, proto::wrap(proto::Receipt{v.serial, *b->receipt}));
        } else {
            ctx.send(from, proto::wrap(proto::VoteError{
                               v.serial, proto::VoteErrorReason::kBallotAlreadyUsed}));
        }
        return;
    }
    if (b->status == Status::kPending) {
        if (b->used_code == v.vote_code) {
            b->reply_to = from;  // receipt goes out once reconstruction finishes
        } else {
            ctx.send(from, proto::wrap(proto::VoteError{
                               v.serial, proto::VoteErrorReason::kBallotAlreadyUsed}));
        }
        return;
    }
    auto line = find_line(*b, v.vote_code);
    if (!line) {
        ctx.send(from, proto::wrap(proto::VoteError{v.serial, proto::VoteErrorReason::kUnknownCode}));
        return;
    }
    if (b->responder.active && b->responder.code != v.vote_code) return;  // first responder flow wins

    b->responder.active = true;
    b->responder.code = v.vote_code;
    b->responder.source = from;
    multicast(ctx, proto::wrap(proto::Endorse{v.serial, v.vote_code}));
    // endorse our own request locally
    if (!b->endorsed_code || *b->endorsed_code == v.vote_code) {
        b->endorsed_code = v.vote_code;
        auto sig = crypto::sign(*group_, cfg_.key,
                                proto::endorsement_payload(v.serial, v.vote_code));
        b->responder.endorsements.emplace(cfg_.index, sig);
    }
}

void VcNode::on_endorse(sim::NodeCtx& ctx, proto::NodeAddr from, const proto::Endorse& e) {
    if (!voting_open(ctx.local_now())) return;
    BallotState* b = ballot(e.serial);
    if (!b) return;
    if (!find_line(*b, e.vote_code)) return;
    if (b->endorsed_code && *b->endorsed_code != e.vote_code &&
        !cfg_.faults.equivocate_endorsements) {
        conflict_metric_++;  // conflicting request: stay silent
        return;
    }
    b->endorsed_code = e.vote_code;
    proto::Endorsement reply;
    reply.serial = e.serial;
    reply.vote_code = e.vote_code;
    reply.signer = cfg_.index;
    reply.sig = crypto::sign(*group_, cfg_.key,
                             proto::endorsement_payload(e.serial, e.vote_code));
    ctx.send(from, proto::wrap(reply));
}

void VcNode::on_endorsement(sim::NodeCtx& ctx, const proto::Endorsement& e) {
    if (!voting_open(ctx.local_now())) return;
    BallotState* b = ballot(e.serial);
    if (!b || !b->responder.active || b->responder.code != e.vote_code) return;
    if (b->status != Status::kNotVoted) return;  // UCERT already formed
    if (e.signer >= cfg_.pub.vc_pubs.size()) return;
    if (b->responder.endorsements.contains(e.signer)) return;
    if (!crypto::verify_sig(*group_, cfg_.pub.vc_pubs[e.signer],
                            proto::endorsement_payload(e.serial, e.vote_code), e.sig))
        return;
    b->responder.endorsements.emplace(e.signer, e.sig);
    if (b->responder.endorsements.size() < cfg_.params.vc_quorum()) return;

    proto::Ucert ucert;
    ucert.serial = e.serial;
    ucert.vote_code = e.vote_code;
    for (const auto& [signer, sig] : b->responder.endorsements)
        ucert.signatures.emplace_back(signer, sig);
    ucert_cache_[{e.serial, e.vote_code}] = true;
    become_pending(ctx, *b, e.serial, e.vote_code, ucert);
    b->reply_to = b->responder.source;
}

void VcNode::become_pending(sim::NodeCtx& ctx, BallotState& b, std::uint64_t serial,
                            const codec::Bytes& code, const proto::Ucert& ucert) {
    b.status = Status::kPending;
    b.used_code = code;
    b.ucert = ucert;
    auto line = find_line(b, code);
    if (!line) return;  // cannot happen for codes we validated
    const auto& own =
        b.entry->parts[static_cast<int>(line->part)][line->pos].receipt_share;
    b.shares.emplace(own.index, own);
    if (cfg_.faults.withhold_shares) return;
    if (!b.share_sent) {
        b.share_sent = true;
        proto::VoteP vp;
        vp.serial = serial;
        vp.vote_code = code;
        vp.receipt_share = own;
        vp.ucert = ucert;
        multicast(ctx, proto::wrap(vp));
    }
    maybe_reconstruct(ctx, b, serial);
}

void VcNode::add_share(sim::NodeCtx& ctx, BallotState& b, std::uint64_t serial,
                       const crypto::Share& share) {
    auto line = find_line(b, b.used_code);
    if (!line) return;
    if (!check_receipt_share(serial, *line, share)) return;
    b.shares.emplace(share.index, share);  // one share per dealt index
    maybe_reconstruct(ctx, b, serial);
}

void VcNode::maybe_reconstruct(sim::NodeCtx& ctx, BallotState& b, std::uint64_t serial) {
    if (b.status != Status::kPending) return;
    if (b.shares.size() < cfg_.params.vc_quorum()) return;
    std::vector<crypto::Share> shares;
    for (auto& [idx, s] : b.shares) shares.push_back(s);
    auto bytes = crypto::reconstruct(shares, cfg_.params.vc_quorum());
    if (!bytes || bytes->size() != 8) return;
    std::uint64_t receipt = 0;
    for (auto c : *bytes) receipt = (receipt << 8) | c;
    b.receipt = receipt;
    b.status = Status::kVoted;
    if (b.reply_to) {
        ctx.send(*b.reply_to, proto::wrap(proto::Receipt{serial, receipt}));
        b.reply_to.reset();
    }
}

void VcNode::on_vote_p(sim::NodeCtx& ctx, proto::NodeAddr from, const proto::VoteP& vp) {
    (void)from;
    if (!voting_open(ctx.local_now())) return;
    BallotState* b = ballot(vp.serial);
    if (!b) return;
    if (vp.ucert.serial != vp.serial || vp.ucert.vote_code != vp.vote_code) return;
    if (!check_ucert(vp.ucert)) return;

    if (b->status == Status::kNotVoted) {
        if (!find_line(*b, vp.vote_code)) return;
        become_pending(ctx, *b, vp.serial, vp.vote_code, vp.ucert);
        add_share(ctx, *b, vp.serial, vp.receipt_share);
    } else if (b->used_code == vp.vote_code) {
        add_share(ctx, *b, vp.serial, vp.receipt_share);
    }
    // share for a different code than the endorsed one: dropped
}

void VcNode::on_wake(sim::NodeCtx& ctx, sim::Tick local) {
    sim::Tick barrier = sim::Tick(cfg_.params.t_end) + cfg_.barrier_d;
    if (!consensus_started_ && local >= barrier) start_vote_set_consensus(ctx);
    if (consensus_started_ && !pushed_) {
        // retry unresolved recovers until a valid response lands
        bool any = false;
        for (auto& [serial, b] : ballots_) {
            if (b.recover_pending && !b.final_entry) {
                multicast(ctx, proto::wrap(proto::RecoverRequest{serial}));
                any = true;
            }
        }
        if (any) ctx.wake_at(local + cfg_.retry_interval);
    }
}

void VcNode::start_vote_set_consensus(sim::NodeCtx& ctx) {
    consensus_started_ = true;
    for (auto& [serial, b] : ballots_) {
        proto::Announce a;
        a.serial = serial;
        if (b.ucert && (b.status == Status::kPending || b.status == Status::kVoted)) {
            a.has_code = true;
            a.vote_code = b.used_code;
            a.ucert = *b.ucert;
        }
        multicast(ctx, proto::wrap(a));
        // our own announce counts toward the quorum wait
        b.announce_senders.insert(cfg_.index);
        maybe_propose(ctx, serial);
    }
}

void VcNode::on_announce(sim::NodeCtx& ctx, proto::NodeAddr from, const proto::Announce& a) {
    if (!consensus_started_) {
        // peers with faster clocks may reach the barrier first; hold their
        // announces by re-delivering through a self wake would complicate
        // things, so process them: announce adoption is harmless pre-barrier
    }
    BallotState* b = ballot(a.serial);
    if (!b || from.role != proto::Role::kVc) return;
    if (a.has_code && !b->proposed && b->status != Status::kVoted && b->status != Status::kPending) {
        if (a.ucert.serial == a.serial && a.ucert.vote_code == a.vote_code && check_ucert(a.ucert)) {
            b->used_code = a.vote_code;
            b->ucert = a.ucert;
            b->status = Status::kPending;  // known code, adopted post-hoc
        }
    }
    b->announce_senders.insert(from.index);
    if (consensus_started_) maybe_propose(ctx, a.serial);
}

void VcNode::maybe_propose(sim::NodeCtx& ctx, std::uint64_t serial) {
    BallotState* b = ballot(serial);
    if (!b || b->proposed || !consensus_started_) return;
    if (b->announce_senders.size() < cfg_.params.vc_quorum()) return;
    b->proposed = true;  // input is fixed now; later announces are ignored
    std::uint8_t bit = b->ucert.has_value() ? 1 : 0;
    auto out = engine_.propose(serial, bit);
    send_consensus(ctx, std::move(out.multicast));
    if (auto d = engine_.decision(serial)) on_decision(ctx, serial, *d);
}

void VcNode::on_decision(sim::NodeCtx& ctx, std::uint64_t serial, std::uint8_t bit) {
    BallotState* b = ballot(serial);
    if (!b || b->final_entry) return;
    if (bit == 0) {
        b->final_entry = proto::VoteSetEntry{serial, false, {}};
    } else if (b->ucert) {
        b->final_entry = proto::VoteSetEntry{serial, true, b->used_code};
    } else if (!b->recover_pending) {
        b->recover_pending = true;
        multicast(ctx, proto::wrap(proto::RecoverRequest{serial}));
        ctx.wake_at(ctx.local_now() + cfg_.retry_interval);
    }
    maybe_push(ctx);
}

void VcNode::on_recover_request(sim::NodeCtx& ctx, proto::NodeAddr from,
                                const proto::RecoverRequest& rr) {
    if (cfg_.faults.lie_on_recover) {
        // bogus code under a fabricated certificate: receivers must discard it
        proto::RecoverResponse lie;
        lie.serial = rr.serial;
        lie.vote_code = ctx.rng().bytes(ea::kVoteCodeLen);
        lie.ucert.serial = rr.serial;
        lie.ucert.vote_code = lie.vote_code;
        for (std::uint32_t i = 0; i < cfg_.params.vc_quorum(); i++) {
            auto sig = crypto::sign(*group_, cfg_.key,
                                    proto::endorsement_payload(rr.serial, lie.vote_code));
            lie.ucert.signatures.emplace_back(i, sig);
        }
        ctx.send(from, proto::wrap(lie));
        return;
    }
    BallotState* b = ballot(rr.serial);
    if (!b || !b->ucert) return;  // nothing to offer
    proto::RecoverResponse resp;
    resp.serial = rr.serial;
    resp.vote_code = b->used_code;
    resp.ucert = *b->ucert;
    ctx.send(from, proto::wrap(resp));
}

void VcNode::on_recover_response(sim::NodeCtx& ctx, const proto::RecoverResponse& rr) {
    BallotState* b = ballot(rr.serial);
    if (!b || !b->recover_pending || b->final_entry) return;
    if (rr.ucert.serial != rr.serial || rr.ucert.vote_code != rr.vote_code) return;
    if (!check_ucert(rr.ucert)) return;  // liars are identified and discarded
    b->used_code = rr.vote_code;
    b->ucert = rr.ucert;
    b->final_entry = proto::VoteSetEntry{rr.serial, true, rr.vote_code};
    maybe_push(ctx);
}

void VcNode::maybe_push(sim::NodeCtx& ctx) {
    if (pushed_) return;
    for (auto& [serial, b] : ballots_)
        if (!b.final_entry) return;
    final_set_.entries.clear();
    for (auto& [serial, b] : ballots_) {
        final_set_.entries.push_back(*b.final_entry);
        if (b.final_entry->voted && b.ucert) final_ucerts_.emplace(serial, *b.ucert);
    }
    proto::BbPush push;
    push.vote_set = final_set_;
    push.ucerts = final_ucerts_;
    push.msk_share = cfg_.init.msk_share;
    for (std::uint32_t i = 0; i < cfg_.params.n_b; i++) {
        if (cfg_.faults.divergent_push && i % 2 == 1 && !push.vote_set.entries.empty()) {
            // equivocate: flip an entry for every other BB node
            proto::BbPush twisted = push;
            auto& e = twisted.vote_set.entries[i % twisted.vote_set.entries.size()];
            if (e.voted) {
                e.voted = false;
                e.vote_code.clear();
            } else {
                e.voted = true;
                e.vote_code = ctx.rng().bytes(ea::kVoteCodeLen);
            }
            ctx.send(proto::NodeAddr{proto::Role::kBb, i}, proto::wrap(twisted));
            continue;
        }
        ctx.send(proto::NodeAddr{proto::Role::kBb, i}, proto::wrap(push));
    }
    pushed_ = true;
}

void VcNode::on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                        const proto::WireMessage& m) {
    try {
        switch (m.kind) {
            case proto::MsgKind::kVote:
                // public channel: no authentication required
                on_vote(ctx, from, proto::unwrap_vote(m));
                return;
            case proto::MsgKind::kEndorse:
                if (authenticated && from.role == proto::Role::kVc)
                    on_endorse(ctx, from, proto::unwrap_endorse(m));
                return;
            case proto::MsgKind::kEndorsement:
                if (authenticated && from.role == proto::Role::kVc)
                    on_endorsement(ctx, proto::unwrap_endorsement(m));
                return;
            case proto::MsgKind::kVoteP:
                if (authenticated && from.role == proto::Role::kVc)
                    on_vote_p(ctx, from, proto::unwrap_vote_p(m));
                return;
            case proto::MsgKind::kAnnounce:
                if (authenticated && from.role == proto::Role::kVc)
                    on_announce(ctx, from, proto::unwrap_announce(m));
                return;
            case proto::MsgKind::kConsensusBatch: {
                if (!authenticated || from.role != proto::Role::kVc || from.index == cfg_.index ||
                    from.index >= cfg_.pub.vc_pubs.size())
                    return;
                auto batch = proto::unwrap_consensus_batch(m);
                if (!crypto::verify_sig(*group_, cfg_.pub.vc_pubs[from.index],
                                        proto::consensus_batch_payload(batch.items), batch.sig))
                    return;
                std::vector<consensus::Msg> outbound;
                std::set<std::uint64_t> decided;
                for (const auto& item : batch.items) {
                    auto out = engine_.on_message(from.index, item);
                    outbound.insert(outbound.end(), out.multicast.begin(), out.multicast.end());
                    if (engine_.decision(item.instance)) decided.insert(item.instance);
                }
                send_consensus(ctx, std::move(outbound));
                for (auto serial : decided)
                    if (auto d = engine_.decision(serial)) on_decision(ctx, serial, *d);
                return;
            }
            case proto::MsgKind::kRecoverRequest:
                if (authenticated && from.role == proto::Role::kVc)
                    on_recover_request(ctx, from, proto::unwrap_recover_request(m));
                return;
            case proto::MsgKind::kRecoverResponse:
                if (authenticated && from.role == proto::Role::kVc)
                    on_recover_response(ctx, proto::unwrap_recover_response(m));
                return;
            default:
                return;  // not addressed to a VC node
        }
    } catch (const codec::DecodeError&) {
        // malformed bodies are dropped
    }
}

codec::Bytes VcNode::state_digest() const {
    codec::Writer w;
    w.str("vc-state");
    w.u32(cfg_.index);
    w.u8(pushed_ ? 1 : 0);
    for (const auto& [serial, b] : ballots_) {
        w.u64(serial);
        w.u8(static_cast<std::uint8_t>(b.status));
        w.bytes(b.used_code);
        w.u64(b.receipt.value_or(0));
        if (b.final_entry) {
            w.u8(1);
            w.u8(b.final_entry->voted ? 1 : 0);
            w.bytes(b.final_entry->vote_code);
        } else {
            w.u8(0);
        }
    }
    auto d = crypto::sha256(w.data());
    return codec::Bytes(d.begin(), d.end());
}

}  // namespace agora::nodes
