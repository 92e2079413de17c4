#include "agora/trustee.hpp"

#include <algorithm>

namespace agora::trustee {

namespace {

struct LineLoc {
    ea::Part part;
    std::uint32_t pos;
};

std::optional<LineLoc> locate_code(const RevealedCodes& codes, std::uint64_t serial,
                                   std::span<const std::uint8_t> code) {
    auto it = codes.find(serial);
    if (it == codes.end()) return std::nullopt;
    for (int p = 0; p < 2; p++) {
        const auto& lines = it->second[p];
        for (std::uint32_t pos = 0; pos < lines.size(); pos++) {
            if (std::equal(lines[pos].begin(), lines[pos].end(), code.begin(), code.end()))
                return LineLoc{static_cast<ea::Part>(p), pos};
        }
    }
    return std::nullopt;
}

}  // namespace

crypto::CoinString derive_coins(const ea::ElectionParams& params, const proto::VoteSet& vote_set,
                                const RevealedCodes& codes) {
    std::map<std::uint64_t, const proto::VoteSetEntry*> by_serial;
    for (const auto& e : vote_set.entries) by_serial[e.serial] = &e;
    crypto::CoinString coins;
    coins.reserve(params.n);
    for (std::uint64_t serial = 1; serial <= params.n; serial++) {
        std::uint8_t coin = 0;  // part A and unvoted ballots count as 0
        auto it = by_serial.find(serial);
        if (it != by_serial.end() && it->second->voted) {
            auto loc = locate_code(codes, serial, it->second->vote_code);
            if (loc && loc->part == ea::Part::B) coin = 1;
        }
        coins.push_back(coin);
    }
    return coins;
}

PostOutput compute_posts(const crypto::Group& g, const ea::ElectionParams& params,
                         const ea::TrusteeInit& init, const proto::VoteSet& vote_set,
                         const RevealedCodes& codes) {
    PostOutput out;
    out.post.trustee_index = init.trustee_index;

    std::map<std::uint64_t, const proto::VoteSetEntry*> by_serial;
    for (const auto& e : vote_set.entries) by_serial[e.serial] = &e;

    crypto::CoinString coins = derive_coins(params, vote_set, codes);
    std::vector<crypto::Scalar> tally_share(params.m, g.scalar_from_u64(0));
    bool any_tally = false;

    for (const auto& entry : init.ballots) {
        std::uint64_t serial = entry.serial_no;
        auto it = by_serial.find(serial);

        // classify: which lines does the transcript mark voted?
        std::array<std::vector<std::uint32_t>, 2> voted_lines;
        bool unknown_code = false;
        if (it != by_serial.end() && it->second->voted) {
            auto loc = locate_code(codes, serial, it->second->vote_code);
            if (loc)
                voted_lines[static_cast<int>(loc->part)].push_back(loc->pos);
            else
                unknown_code = true;
        }
        bool both_parts = !voted_lines[0].empty() && !voted_lines[1].empty();
        bool over_limit = voted_lines[0].size() > 1 || voted_lines[1].size() > 1;
        if (unknown_code || both_parts || over_limit) {
            out.discarded_serials.push_back(serial);
            continue;
        }

        std::optional<ea::Part> used;
        if (!voted_lines[0].empty()) used = ea::Part::A;
        if (!voted_lines[1].empty()) used = ea::Part::B;

        for (int p = 0; p < 2; p++) {
            ea::Part part = static_cast<ea::Part>(p);
            const auto& lines = entry.parts[p];
            bool is_used = used && *used == part;
            for (std::uint32_t pos = 0; pos < lines.size(); pos++) {
                proto::TrusteeLineRef ref{serial, part, pos};
                if (is_used && pos == voted_lines[p][0]) {
                    // voted commitment: enters the tally, gets its proof finished
                    auto opening_scalars = ea::decode_scalars(lines[pos].opening_share.value);
                    for (std::size_t c = 0; c < opening_scalars.size() && c < tally_share.size();
                         c++)
                        tally_share[c] = g.scalar_add(tally_share[c], opening_scalars[c]);
                    any_tally = true;

                    std::string zctx = ea::zk_share_context(serial, part, pos);
                    crypto::Scalar challenge = crypto::derive_challenge(
                        g, coins, codec::Bytes(zctx.begin(), zctx.end()));
                    auto zk = ea::decode_scalars(lines[pos].zk_share.value);
                    out.post.zk_response_shares.emplace_back(
                        ref, crypto::response_shares(g, zk, params.m, challenge));
                } else if (!is_used) {
                    // unused line: disclose this trustee's opening share
                    out.post.opening_shares.emplace_back(ref, lines[pos].opening_share);
                } else {
                    // non-voted line of the used part stays hidden entirely
                }
            }
        }
    }
    (void)any_tally;
    out.post.tally_share = std::move(tally_share);
    return out;
}

TrusteeNode::TrusteeNode(TrusteeNodeConfig cfg)
    : cfg_(std::move(cfg)), group_(crypto::make_group(cfg_.params.group_name)) {}

void TrusteeNode::on_init(sim::NodeCtx& ctx) { ctx.wake_at(cfg_.start_local); }

void TrusteeNode::poll(sim::NodeCtx& ctx) {
    for (proto::BbPhase phase : {proto::BbPhase::kVoteSet, proto::BbPhase::kCodes}) {
        if (phase == proto::BbPhase::kVoteSet && vote_set_) continue;
        if (phase == proto::BbPhase::kCodes && codes_) continue;
        std::uint64_t req = next_request_++;
        inflight_[req] = {phase,
                          std::vector<std::optional<codec::Bytes>>(cfg_.params.n_b, std::nullopt)};
        for (std::uint32_t i = 0; i < cfg_.params.n_b; i++)
            ctx.send(proto::NodeAddr{proto::Role::kBb, i},
                     proto::wrap(proto::BbRead{phase, req}));
    }
}

void TrusteeNode::on_wake(sim::NodeCtx& ctx, sim::Tick local) {
    if (posted_) return;
    poll(ctx);
    ctx.wake_at(local + cfg_.poll_interval);
}

void TrusteeNode::on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                             const proto::WireMessage& m) {
    (void)authenticated;  // BB replies travel the public read channel
    if (posted_ || m.kind != proto::MsgKind::kBbReadReply || from.role != proto::Role::kBb) return;
    try {
        auto reply = proto::unwrap_bb_read_reply(m);
        auto it = inflight_.find(reply.request_id);
        if (it == inflight_.end() || from.index >= cfg_.params.n_b) return;
        if (it->second.first != reply.phase || !reply.available) return;
        it->second.second[from.index] = reply.body;

        auto value = sim::majority_value(it->second.second, cfg_.params.f_b + 1);
        if (!value) return;
        codec::Reader r(*value);
        if (reply.phase == proto::BbPhase::kVoteSet) {
            vote_set_ = proto::decode_vote_set(r);
        } else if (reply.phase == proto::BbPhase::kCodes) {
            RevealedCodes codes;
            std::uint32_t n = r.u32();
            if (n > (1u << 24)) throw codec::DecodeError("too many code entries");
            for (std::uint32_t i = 0; i < n; i++) {
                std::uint64_t serial = r.u64();
                std::array<std::vector<codec::Bytes>, 2> parts;
                for (int p = 0; p < 2; p++) {
                    std::uint32_t nl = r.u32();
                    if (nl > (1u << 16)) throw codec::DecodeError("too many lines");
                    for (std::uint32_t j = 0; j < nl; j++) parts[p].push_back(r.bytes());
                }
                codes.emplace(serial, std::move(parts));
            }
            codes_ = std::move(codes);
        }
        inflight_.erase(it);
        try_complete(ctx);
    } catch (const codec::DecodeError&) {
        // garbage reply from a corrupted BB node; majority filtering handles it
    }
}

void TrusteeNode::try_complete(sim::NodeCtx& ctx) {
    if (posted_ || !vote_set_ || !codes_) return;
    auto output = compute_posts(*group_, cfg_.params, cfg_.init, *vote_set_, *codes_);
    output.post.sig = crypto::sign(*group_, cfg_.key, proto::trustee_post_payload(output.post));
    for (std::uint32_t i = 0; i < cfg_.params.n_b; i++)
        ctx.send(proto::NodeAddr{proto::Role::kBb, i}, proto::wrap(output.post));
    posted_ = true;
}

codec::Bytes TrusteeNode::state_digest() const {
    codec::Writer w;
    w.str("trustee-state");
    w.u32(cfg_.index);
    w.u8(posted_ ? 1 : 0);
    w.u8(vote_set_ ? 1 : 0);
    w.u8(codes_ ? 1 : 0);
    auto d = crypto::sha256(w.data());
    return codec::Bytes(d.begin(), d.end());
}

}  // namespace agora::trustee
