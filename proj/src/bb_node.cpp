#include "agora/bb_node.hpp"

#include <algorithm>

#include "agora/trustee.hpp"

namespace agora::nodes {

BbNode::BbNode(BbConfig cfg)
    : cfg_(std::move(cfg)), group_(crypto::make_group(cfg_.params.group_name)) {
    transcript_.params = cfg_.params;
    transcript_.ea_pub = cfg_.pub.ea_pub;
    transcript_.vc_pubs = cfg_.pub.vc_pubs;
    transcript_.trustee_pubs = cfg_.pub.trustee_pubs;
    transcript_.init = cfg_.init;
    for (const auto& b : transcript_.init.ballots) ballots_by_serial_.emplace(b.serial_no, &b);
}

const ea::BbBallotEntry* BbNode::ballot_for(std::uint64_t serial) const {
    auto it = ballots_by_serial_.find(serial);
    return it == ballots_by_serial_.end() ? nullptr : it->second;
}

void BbNode::on_message(sim::NodeCtx& ctx, proto::NodeAddr from, bool authenticated,
                        const proto::WireMessage& m) {
    try {
        switch (m.kind) {
            case proto::MsgKind::kBbRead: {
                // public, anonymous read channel
                auto read = proto::unwrap_bb_read(m);
                proto::BbReadReply reply;
                reply.phase = read.phase;
                reply.request_id = read.request_id;
                auto body = proto::phase_snapshot(transcript_, read.phase);
                reply.available = body.has_value();
                if (body) reply.body = std::move(*body);
                ctx.send(from, proto::wrap(reply));
                return;
            }
            case proto::MsgKind::kBbPush:
                // writes must come over the authenticated VC channel
                if (authenticated && from.role == proto::Role::kVc &&
                    from.index < cfg_.params.n_v)
                    on_push(proto::unwrap_bb_push(m), from.index);
                return;
            case proto::MsgKind::kTrusteePost:
                if (authenticated && from.role == proto::Role::kTrustee &&
                    from.index < cfg_.params.n_t)
                    on_post(proto::unwrap_trustee_post(m), from.index);
                return;
            default:
                return;
        }
    } catch (const codec::DecodeError&) {
        // malformed writes never mutate state
    }
}

void BbNode::on_push(const proto::BbPush& push, std::uint32_t vc_index) {
    auto it = pushes_.find(vc_index);
    if (it != pushes_.end()) {
        if (it->second.vote_set.canonical() != push.vote_set.canonical())
            flagged_resubmission_ = true;  // equivocating sender; keep latest
        it->second = push;
    } else {
        pushes_.emplace(vc_index, push);
    }
    // msk shares ride along with pushes; dealer signature gates each one
    const crypto::Share& share = push.msk_share;
    if (!msk_shares_.contains(vc_index) &&
        crypto::verify_share(*group_, cfg_.pub.ea_pub, ea::msk_share_context(), share)) {
        msk_shares_.emplace(vc_index, share);
    }
    maybe_publish_set();
    maybe_reveal_codes();
    maybe_result();
}

void BbNode::maybe_publish_set() {
    if (transcript_.vote_set) return;
    std::map<codec::Bytes, std::vector<std::uint32_t>> by_value;
    for (const auto& [vc, push] : pushes_) by_value[push.vote_set.canonical()].push_back(vc);
    for (const auto& [canon, senders] : by_value) {
        if (senders.size() < cfg_.params.f_v + 1) continue;
        transcript_.vote_set = pushes_.at(senders.front()).vote_set;
        // keep one valid UCERT per voted serial, from any agreeing sender
        for (const auto& entry : transcript_.vote_set->entries) {
            if (!entry.voted) continue;
            for (std::uint32_t vc : senders) {
                auto u = pushes_.at(vc).ucerts.find(entry.serial);
                if (u == pushes_.at(vc).ucerts.end()) continue;
                if (u->second.serial != entry.serial || u->second.vote_code != entry.vote_code)
                    continue;
                if (proto::ucert_valid(*group_, u->second, cfg_.pub.vc_pubs,
                                       cfg_.params.vc_quorum())) {
                    transcript_.ucerts.emplace(entry.serial, u->second);
                    break;
                }
            }
        }
        return;
    }
}

void BbNode::maybe_reveal_codes() {
    if (!transcript_.codes.empty() || corrupted_shares_) return;
    if (msk_shares_.size() < cfg_.params.vc_quorum()) return;
    std::vector<crypto::Share> shares;
    for (const auto& [vc, s] : msk_shares_) shares.push_back(s);
    auto msk = crypto::reconstruct(shares, cfg_.params.vc_quorum());
    if (!msk) return;
    if (!crypto::hash_commit_matches(transcript_.init.msk_commitment, *msk)) {
        // reconstruction does not match H_msk: report and abort publication
        corrupted_shares_ = true;
        return;
    }
    std::map<std::uint64_t, std::array<std::vector<codec::Bytes>, 2>> codes;
    for (const auto& ballot : transcript_.init.ballots) {
        auto& parts = codes[ballot.serial_no];
        for (int p = 0; p < 2; p++) {
            for (const auto& line : ballot.parts[p]) {
                auto code = crypto::dec_vote_code(line.enc_vote_code, *msk);
                if (!code) {
                    corrupted_shares_ = true;
                    return;
                }
                parts[p].push_back(std::move(*code));
            }
        }
    }
    transcript_.codes = std::move(codes);
}

void BbNode::on_post(const proto::TrusteePost& post, std::uint32_t trustee_index) {
    if (post.trustee_index != trustee_index + 1) return;  // must match the channel identity
    if (post.trustee_index < 1 || post.trustee_index > cfg_.params.n_t) return;
    if (!crypto::verify_sig(*group_, cfg_.pub.trustee_pubs[trustee_index],
                            proto::trustee_post_payload(post), post.sig))
        return;
    // opening shares must carry the dealer's signature for their exact slot
    for (const auto& [ref, share] : post.opening_shares) {
        if (!crypto::verify_share(*group_, cfg_.pub.ea_pub,
                                  ea::opening_share_context(ref.serial, ref.part, ref.pos), share))
            return;
        if (share.index != post.trustee_index) return;
    }
    posts_.insert_or_assign(post.trustee_index, post);
    maybe_result();
}

void BbNode::maybe_result() {
    if (transcript_.result || !transcript_.vote_set || transcript_.codes.empty()) return;
    if (posts_.size() < cfg_.params.h_t) return;
    // prefer the first h_t posts; fall back to other subsets if a byzantine
    // trustee slipped inconsistent computed values past the signatures
    std::vector<const proto::TrusteePost*> all;
    for (const auto& [idx, p] : posts_) all.push_back(&p);
    // iterate h_t-subsets in a stable order
    std::vector<std::vector<const proto::TrusteePost*>> subsets;
    std::vector<bool> mask(all.size(), false);
    std::fill(mask.end() - static_cast<long>(cfg_.params.h_t), mask.end(), true);
    do {
        std::vector<const proto::TrusteePost*> subset;
        for (std::size_t i = 0; i < all.size(); i++)
            if (mask[i]) subset.push_back(all[i]);
        subsets.push_back(std::move(subset));
    } while (std::next_permutation(mask.begin(), mask.end()));
    for (const auto& subset : subsets)
        if (combine_posts(subset)) return;
}

bool BbNode::combine_posts(const std::vector<const proto::TrusteePost*>& subset) {
    const crypto::Group& g = *group_;
    const std::size_t m = cfg_.params.m;
    const std::uint32_t h = cfg_.params.h_t;

    std::vector<std::uint32_t> xs;
    for (const auto* p : subset) xs.push_back(p->trustee_index);
    auto lag = crypto::lagrange_at_zero(g, xs);

    auto reconstruct_vec = [&](const std::vector<std::vector<crypto::Scalar>>& shares,
                               std::size_t width) {
        std::vector<crypto::Scalar> out(width, g.scalar_from_u64(0));
        for (std::size_t c = 0; c < width; c++)
            for (std::size_t t = 0; t < shares.size(); t++)
                out[c] = g.scalar_add(out[c], g.scalar_mul(lag[t], shares[t][c]));
        return out;
    };

    proto::TallyResult result;
    result.coins = trustee::derive_coins(cfg_.params, *transcript_.vote_set, transcript_.codes);

    // voted line per serial, from the published set and revealed codes
    std::map<std::uint64_t, proto::TrusteeLineRef> voted_line;
    for (const auto& entry : transcript_.vote_set->entries) {
        if (!entry.voted) continue;
        auto cit = transcript_.codes.find(entry.serial);
        bool found = false;
        if (cit != transcript_.codes.end()) {
            for (int p = 0; p < 2 && !found; p++) {
                for (std::uint32_t pos = 0; pos < cit->second[p].size(); pos++) {
                    if (cit->second[p][pos] == entry.vote_code) {
                        voted_line.emplace(entry.serial, proto::TrusteeLineRef{
                                                             entry.serial,
                                                             static_cast<ea::Part>(p), pos});
                        found = true;
                        break;
                    }
                }
            }
        }
        if (!found) result.discarded_serials.push_back(entry.serial);
    }

    // openings for unused lines: reconstruct, then check against the payload
    std::map<proto::TrusteeLineRef, std::vector<std::vector<crypto::Scalar>>> opening_shares;
    for (const auto* p : subset) {
        for (const auto& [ref, share] : p->opening_shares) {
            auto scalars = ea::decode_scalars(share.value);
            if (scalars.size() != m) return false;
            opening_shares[ref].push_back(std::move(scalars));
        }
    }
    for (auto& [ref, shares] : opening_shares) {
        if (shares.size() != subset.size()) return false;  // someone omitted this line
        const ea::BbBallotEntry* ballot = ballot_for(ref.serial);
        if (!ballot || ref.pos >= ballot->part(ref.part).size()) return false;
        crypto::Opening opening;
        opening.randomizers = reconstruct_vec(shares, m);
        auto res = crypto::open_and_decode(g, ballot->part(ref.part)[ref.pos].commitment, opening,
                                           cfg_.params.n);
        if (!res.ok()) return false;
        opening.message = res.encoding.vec;
        result.openings.emplace(ref, std::move(opening));
    }

    // completed proofs for voted lines
    std::map<proto::TrusteeLineRef, std::vector<std::vector<crypto::Scalar>>> zk_shares;
    for (const auto* p : subset) {
        for (const auto& [ref, scalars] : p->zk_response_shares) {
            if (scalars.size() != 3 * m + 1) return false;
            zk_shares[ref].push_back(scalars);
        }
    }
    crypto::VectorCommitment e_sum;
    bool have_sum = false;
    for (const auto& [serial, ref] : voted_line) {
        const ea::BbBallotEntry* ballot = ballot_for(serial);
        if (!ballot || ref.pos >= ballot->part(ref.part).size()) return false;
        const auto& line = ballot->part(ref.part)[ref.pos];

        auto zit = zk_shares.find(ref);
        if (zit == zk_shares.end() || zit->second.size() != subset.size()) return false;
        auto responses = reconstruct_vec(zit->second, 3 * m + 1);
        std::string zctx = ea::zk_share_context(serial, ref.part, ref.pos);
        crypto::Scalar challenge =
            crypto::derive_challenge(g, result.coins, codec::Bytes(zctx.begin(), zctx.end()));
        auto proof = crypto::assemble_proof(line.proof_first, challenge, responses, m);
        if (!crypto::verify_proof(g, line.commitment, proof)) return false;
        result.proofs.emplace(ref, std::move(proof));

        e_sum = have_sum ? crypto::combine(g, e_sum, line.commitment) : line.commitment;
        have_sum = true;
    }

    // T_l shares open the homomorphic total
    std::vector<std::vector<crypto::Scalar>> t_shares;
    for (const auto* p : subset) {
        if (p->tally_share.size() != m) return false;
        t_shares.push_back(p->tally_share);
    }
    crypto::Opening sum_opening;
    sum_opening.randomizers = reconstruct_vec(t_shares, m);
    if (!have_sum) {
        // zero votes cast: the sum is the empty product, all-zero tally
        crypto::OptionEncoding zero{std::vector<std::uint64_t>(m, 0)};
        std::vector<crypto::Scalar> zr(m, g.scalar_from_u64(0));
        e_sum = crypto::commit(g, zero, zr);
    }
    auto tally = crypto::open_and_decode(g, e_sum, sum_opening, cfg_.params.n);
    if (!tally.ok()) return false;
    (void)h;

    result.tally = tally.encoding.vec;
    result.e_sum = std::move(e_sum);
    sum_opening.message = result.tally;
    result.e_sum_opening = std::move(sum_opening);
    transcript_.result = std::move(result);
    return true;
}

codec::Bytes BbNode::state_digest() const {
    codec::Writer w;
    w.str("bb-state");
    w.u32(cfg_.index);
    encode(w, transcript_);
    auto d = crypto::sha256(w.data());
    return codec::Bytes(d.begin(), d.end());
}

}  // namespace agora::nodes
