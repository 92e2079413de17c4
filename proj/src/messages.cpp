#include "agora/messages.hpp"

#include <algorithm>

namespace agora::proto {

namespace {

void put_scalar(codec::Writer& w, const crypto::Scalar& s) { w.raw(s.b); }

crypto::Scalar get_scalar(codec::Reader& r) {
    crypto::Scalar s;
    auto raw = r.raw(32);
    std::copy(raw.begin(), raw.end(), s.b.begin());
    return s;
}

void put_sig(codec::Writer& w, const crypto::Signature& s) { w.raw(crypto::sig_encode(s)); }

WireMessage make(MsgKind kind, codec::Writer&& w) { return WireMessage{kind, w.take()}; }

codec::Reader open(const WireMessage& m, MsgKind expect) {
    if (m.kind != expect) throw codec::DecodeError("wrong message kind");
    return codec::Reader(m.body);
}

}  // namespace

codec::Bytes endorsement_payload(std::uint64_t serial, std::span<const std::uint8_t> code) {
    codec::Writer w;
    w.str("agora-endorse");
    w.u64(serial);
    w.bytes(code);
    return w.take();
}

bool ucert_valid(const crypto::Group& g, const Ucert& u,
                 std::span<const crypto::Element> vc_pubs, std::uint32_t quorum) {
    if (u.vote_code.empty()) return false;
    std::vector<bool> seen(vc_pubs.size(), false);
    std::uint32_t good = 0;
    codec::Bytes payload = endorsement_payload(u.serial, u.vote_code);
    for (const auto& [signer, sig] : u.signatures) {
        if (signer >= vc_pubs.size() || seen[signer]) continue;
        if (!crypto::verify_sig(g, vc_pubs[signer], payload, sig)) continue;
        seen[signer] = true;
        good++;
    }
    return good >= quorum;
}

void encode(codec::Writer& w, const Ucert& u) {
    w.u64(u.serial);
    w.bytes(u.vote_code);
    w.u32(static_cast<std::uint32_t>(u.signatures.size()));
    for (const auto& [signer, sig] : u.signatures) {
        w.u32(signer);
        put_sig(w, sig);
    }
}

Ucert decode_ucert(codec::Reader& r) {
    Ucert u;
    u.serial = r.u64();
    u.vote_code = r.bytes();
    std::uint32_t n = r.u32();
    if (n > 4096) throw codec::DecodeError("ucert too large");
    for (std::uint32_t i = 0; i < n; i++) {
        std::uint32_t signer = r.u32();
        u.signatures.emplace_back(signer, crypto::sig_decode(r));
    }
    return u;
}

codec::Bytes VoteSet::canonical() const {
    codec::Writer w;
    encode(w, *this);
    return w.take();
}

void encode(codec::Writer& w, const VoteSet& v) {
    auto sorted = v.entries;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.serial < b.serial; });
    w.u32(static_cast<std::uint32_t>(sorted.size()));
    for (const auto& e : sorted) {
        w.u64(e.serial);
        w.u8(e.voted ? 1 : 0);
        w.bytes(e.voted ? e.vote_code : codec::Bytes{});
    }
}

VoteSet decode_vote_set(codec::Reader& r) {
    VoteSet v;
    std::uint32_t n = r.u32();
    if (n > (1u << 24)) throw codec::DecodeError("vote set too large");
    for (std::uint32_t i = 0; i < n; i++) {
        VoteSetEntry e;
        e.serial = r.u64();
        e.voted = r.u8() != 0;
        e.vote_code = r.bytes();
        v.entries.push_back(std::move(e));
    }
    return v;
}

codec::Bytes consensus_batch_payload(std::span<const consensus::Msg> items) {
    codec::Writer w;
    w.str("agora-consensus");
    w.u32(static_cast<std::uint32_t>(items.size()));
    for (const auto& m : items) consensus::encode(w, m);
    return w.take();
}

codec::Bytes trustee_post_payload(const TrusteePost& p) {
    codec::Writer w;
    w.str("agora-trustee-post");
    w.u32(p.trustee_index);
    w.u32(static_cast<std::uint32_t>(p.opening_shares.size()));
    for (const auto& [ref, share] : p.opening_shares) {
        w.u64(ref.serial);
        w.u8(static_cast<std::uint8_t>(ref.part));
        w.u32(ref.pos);
        crypto::encode(w, share);
    }
    w.u32(static_cast<std::uint32_t>(p.zk_response_shares.size()));
    for (const auto& [ref, scalars] : p.zk_response_shares) {
        w.u64(ref.serial);
        w.u8(static_cast<std::uint8_t>(ref.part));
        w.u32(ref.pos);
        w.u32(static_cast<std::uint32_t>(scalars.size()));
        for (const auto& s : scalars) put_scalar(w, s);
    }
    w.u32(static_cast<std::uint32_t>(p.tally_share.size()));
    for (const auto& s : p.tally_share) put_scalar(w, s);
    return w.take();
}

// --- wraps -----------------------------------------------------------------

WireMessage wrap(const Vote& v) {
    codec::Writer w;
    w.u64(v.serial);
    w.bytes(v.vote_code);
    return make(MsgKind::kVote, std::move(w));
}

WireMessage wrap(const Receipt& v) {
    codec::Writer w;
    w.u64(v.serial);
    w.u64(v.receipt);
    return make(MsgKind::kReceipt, std::move(w));
}

WireMessage wrap(const VoteError& v) {
    codec::Writer w;
    w.u64(v.serial);
    w.u8(static_cast<std::uint8_t>(v.reason));
    return make(MsgKind::kVoteError, std::move(w));
}

WireMessage wrap(const Endorse& v) {
    codec::Writer w;
    w.u64(v.serial);
    w.bytes(v.vote_code);
    return make(MsgKind::kEndorse, std::move(w));
}

WireMessage wrap(const Endorsement& v) {
    codec::Writer w;
    w.u64(v.serial);
    w.bytes(v.vote_code);
    w.u32(v.signer);
    put_sig(w, v.sig);
    return make(MsgKind::kEndorsement, std::move(w));
}

WireMessage wrap(const VoteP& v) {
    codec::Writer w;
    w.u64(v.serial);
    w.bytes(v.vote_code);
    crypto::encode(w, v.receipt_share);
    encode(w, v.ucert);
    return make(MsgKind::kVoteP, std::move(w));
}

WireMessage wrap(const Announce& v) {
    codec::Writer w;
    w.u64(v.serial);
    w.u8(v.has_code ? 1 : 0);
    if (v.has_code) {
        w.bytes(v.vote_code);
        encode(w, v.ucert);
    }
    return make(MsgKind::kAnnounce, std::move(w));
}

WireMessage wrap(const RecoverRequest& v) {
    codec::Writer w;
    w.u64(v.serial);
    return make(MsgKind::kRecoverRequest, std::move(w));
}

WireMessage wrap(const RecoverResponse& v) {
    codec::Writer w;
    w.u64(v.serial);
    w.bytes(v.vote_code);
    encode(w, v.ucert);
    return make(MsgKind::kRecoverResponse, std::move(w));
}

WireMessage wrap(const ConsensusBatch& v) {
    codec::Writer w;
    w.u32(static_cast<std::uint32_t>(v.items.size()));
    for (const auto& m : v.items) consensus::encode(w, m);
    put_sig(w, v.sig);
    return make(MsgKind::kConsensusBatch, std::move(w));
}

WireMessage wrap(const BbPush& v) {
    codec::Writer w;
    encode(w, v.vote_set);
    w.u32(static_cast<std::uint32_t>(v.ucerts.size()));
    for (const auto& [serial, ucert] : v.ucerts) {
        w.u64(serial);
        encode(w, ucert);
    }
    crypto::encode(w, v.msk_share);
    return make(MsgKind::kBbPush, std::move(w));
}

WireMessage wrap(const BbRead& v) {
    codec::Writer w;
    w.u8(static_cast<std::uint8_t>(v.phase));
    w.u64(v.request_id);
    return make(MsgKind::kBbRead, std::move(w));
}

WireMessage wrap(const BbReadReply& v) {
    codec::Writer w;
    w.u8(static_cast<std::uint8_t>(v.phase));
    w.u64(v.request_id);
    w.u8(v.available ? 1 : 0);
    w.bytes(v.body);
    return make(MsgKind::kBbReadReply, std::move(w));
}

WireMessage wrap(const TrusteePost& v) {
    codec::Writer w;
    w.bytes(trustee_post_payload(v));
    put_sig(w, v.sig);
    return make(MsgKind::kTrusteePost, std::move(w));
}

// --- unwraps ---------------------------------------------------------------

Vote unwrap_vote(const WireMessage& m) {
    auto r = open(m, MsgKind::kVote);
    Vote v;
    v.serial = r.u64();
    v.vote_code = r.bytes();
    r.expect_done();
    return v;
}

Receipt unwrap_receipt(const WireMessage& m) {
    auto r = open(m, MsgKind::kReceipt);
    Receipt v;
    v.serial = r.u64();
    v.receipt = r.u64();
    r.expect_done();
    return v;
}

VoteError unwrap_vote_error(const WireMessage& m) {
    auto r = open(m, MsgKind::kVoteError);
    VoteError v;
    v.serial = r.u64();
    v.reason = static_cast<VoteErrorReason>(r.u8());
    r.expect_done();
    return v;
}

Endorse unwrap_endorse(const WireMessage& m) {
    auto r = open(m, MsgKind::kEndorse);
    Endorse v;
    v.serial = r.u64();
    v.vote_code = r.bytes();
    r.expect_done();
    return v;
}

Endorsement unwrap_endorsement(const WireMessage& m) {
    auto r = open(m, MsgKind::kEndorsement);
    Endorsement v;
    v.serial = r.u64();
    v.vote_code = r.bytes();
    v.signer = r.u32();
    v.sig = crypto::sig_decode(r);
    r.expect_done();
    return v;
}

VoteP unwrap_vote_p(const WireMessage& m) {
    auto r = open(m, MsgKind::kVoteP);
    VoteP v;
    v.serial = r.u64();
    v.vote_code = r.bytes();
    v.receipt_share = crypto::decode_share(r);
    v.ucert = decode_ucert(r);
    r.expect_done();
    return v;
}

Announce unwrap_announce(const WireMessage& m) {
    auto r = open(m, MsgKind::kAnnounce);
    Announce v;
    v.serial = r.u64();
    v.has_code = r.u8() != 0;
    if (v.has_code) {
        v.vote_code = r.bytes();
        v.ucert = decode_ucert(r);
    }
    r.expect_done();
    return v;
}

RecoverRequest unwrap_recover_request(const WireMessage& m) {
    auto r = open(m, MsgKind::kRecoverRequest);
    RecoverRequest v;
    v.serial = r.u64();
    r.expect_done();
    return v;
}

RecoverResponse unwrap_recover_response(const WireMessage& m) {
    auto r = open(m, MsgKind::kRecoverResponse);
    RecoverResponse v;
    v.serial = r.u64();
    v.vote_code = r.bytes();
    v.ucert = decode_ucert(r);
    r.expect_done();
    return v;
}

ConsensusBatch unwrap_consensus_batch(const WireMessage& m) {
    auto r = open(m, MsgKind::kConsensusBatch);
    ConsensusBatch v;
    std::uint32_t n = r.u32();
    if (n > (1u << 24)) throw codec::DecodeError("batch too large");
    for (std::uint32_t i = 0; i < n; i++) v.items.push_back(consensus::decode_msg(r));
    v.sig = crypto::sig_decode(r);
    r.expect_done();
    return v;
}

BbPush unwrap_bb_push(const WireMessage& m) {
    auto r = open(m, MsgKind::kBbPush);
    BbPush v;
    v.vote_set = decode_vote_set(r);
    std::uint32_t n = r.u32();
    if (n > (1u << 24)) throw codec::DecodeError("too many ucerts");
    for (std::uint32_t i = 0; i < n; i++) {
        std::uint64_t serial = r.u64();
        v.ucerts.emplace(serial, decode_ucert(r));
    }
    v.msk_share = crypto::decode_share(r);
    r.expect_done();
    return v;
}

BbRead unwrap_bb_read(const WireMessage& m) {
    auto r = open(m, MsgKind::kBbRead);
    BbRead v;
    v.phase = static_cast<BbPhase>(r.u8());
    v.request_id = r.u64();
    r.expect_done();
    return v;
}

BbReadReply unwrap_bb_read_reply(const WireMessage& m) {
    auto r = open(m, MsgKind::kBbReadReply);
    BbReadReply v;
    v.phase = static_cast<BbPhase>(r.u8());
    v.request_id = r.u64();
    v.available = r.u8() != 0;
    v.body = r.bytes();
    r.expect_done();
    return v;
}

TrusteePost unwrap_trustee_post(const WireMessage& m) {
    auto r = open(m, MsgKind::kTrusteePost);
    codec::Bytes payload = r.bytes();
    crypto::Signature sig = crypto::sig_decode(r);
    r.expect_done();

    codec::Reader pr(payload);
    TrusteePost v;
    std::string tag = pr.str();
    if (tag != "agora-trustee-post") throw codec::DecodeError("bad trustee post tag");
    v.trustee_index = pr.u32();
    std::uint32_t n_open = pr.u32();
    if (n_open > (1u << 24)) throw codec::DecodeError("too many opening shares");
    for (std::uint32_t i = 0; i < n_open; i++) {
        TrusteeLineRef ref;
        ref.serial = pr.u64();
        ref.part = static_cast<ea::Part>(pr.u8());
        ref.pos = pr.u32();
        v.opening_shares.emplace_back(ref, crypto::decode_share(pr));
    }
    std::uint32_t n_zk = pr.u32();
    if (n_zk > (1u << 24)) throw codec::DecodeError("too many zk shares");
    for (std::uint32_t i = 0; i < n_zk; i++) {
        TrusteeLineRef ref;
        ref.serial = pr.u64();
        ref.part = static_cast<ea::Part>(pr.u8());
        ref.pos = pr.u32();
        std::uint32_t ns = pr.u32();
        std::vector<crypto::Scalar> scalars(ns);
        for (auto& s : scalars) s = get_scalar(pr);
        v.zk_response_shares.emplace_back(ref, std::move(scalars));
    }
    std::uint32_t nt = pr.u32();
    std::vector<crypto::Scalar> tally(nt);
    for (auto& s : tally) s = get_scalar(pr);
    v.tally_share = std::move(tally);
    pr.expect_done();
    v.sig = sig;
    return v;
}

}  // namespace agora::proto
