#include "agora/transcript.hpp"

#include <algorithm>

namespace agora::proto {

namespace {

void put_elem(codec::Writer& w, const crypto::Element& e) { w.bytes(e.b); }
crypto::Element get_elem(codec::Reader& r) { return crypto::Element{r.bytes()}; }

void put_hash_commitment(codec::Writer& w, const crypto::HashCommitment& h) {
    w.raw(h.digest);
    w.u64(h.salt);
}

crypto::HashCommitment get_hash_commitment(codec::Reader& r) {
    crypto::HashCommitment h;
    auto d = r.raw(32);
    std::copy(d.begin(), d.end(), h.digest.begin());
    h.salt = r.u64();
    return h;
}

void put_ref(codec::Writer& w, const TrusteeLineRef& ref) {
    w.u64(ref.serial);
    w.u8(static_cast<std::uint8_t>(ref.part));
    w.u32(ref.pos);
}

TrusteeLineRef get_ref(codec::Reader& r) {
    TrusteeLineRef ref;
    ref.serial = r.u64();
    ref.part = static_cast<ea::Part>(r.u8());
    ref.pos = r.u32();
    return ref;
}

}  // namespace

void encode(codec::Writer& w, const ea::ElectionParams& p) {
    w.u64(p.n);
    w.u64(p.m);
    w.u32(static_cast<std::uint32_t>(p.option_labels.size()));
    for (const auto& s : p.option_labels) w.str(s);
    w.u32(p.n_v);
    w.u32(p.f_v);
    w.u32(p.n_b);
    w.u32(p.f_b);
    w.u32(p.n_t);
    w.u32(p.h_t);
    w.u64(p.t_end);
    w.u64(p.rng_seed);
    w.str(p.group_name);
}

ea::ElectionParams decode_params(codec::Reader& r) {
    ea::ElectionParams p;
    p.n = r.u64();
    p.m = r.u64();
    std::uint32_t nl = r.u32();
    if (nl > (1u << 20)) throw codec::DecodeError("too many labels");
    for (std::uint32_t i = 0; i < nl; i++) p.option_labels.push_back(r.str());
    p.n_v = r.u32();
    p.f_v = r.u32();
    p.n_b = r.u32();
    p.f_b = r.u32();
    p.n_t = r.u32();
    p.h_t = r.u32();
    p.t_end = r.u64();
    p.rng_seed = r.u64();
    p.group_name = r.str();
    return p;
}

void encode(codec::Writer& w, const ea::BbInit& init) {
    put_hash_commitment(w, init.msk_commitment);
    w.u32(static_cast<std::uint32_t>(init.ballots.size()));
    for (const auto& b : init.ballots) {
        w.u64(b.serial_no);
        for (int p = 0; p < 2; p++) {
            w.u32(static_cast<std::uint32_t>(b.parts[p].size()));
            for (const auto& line : b.parts[p]) {
                w.bytes(line.enc_vote_code);
                crypto::encode(w, line.commitment);
                crypto::encode(w, line.proof_first);
            }
        }
    }
}

ea::BbInit decode_bb_init(codec::Reader& r) {
    ea::BbInit init;
    init.msk_commitment = get_hash_commitment(r);
    std::uint32_t nb = r.u32();
    if (nb > (1u << 24)) throw codec::DecodeError("too many ballots");
    init.ballots.resize(nb);
    for (auto& b : init.ballots) {
        b.serial_no = r.u64();
        for (int p = 0; p < 2; p++) {
            std::uint32_t nl = r.u32();
            if (nl > (1u << 16)) throw codec::DecodeError("too many lines");
            b.parts[p].resize(nl);
            for (auto& line : b.parts[p]) {
                line.enc_vote_code = r.bytes();
                line.commitment = crypto::decode_commitment(r);
                line.proof_first = crypto::decode_proof(r);
            }
        }
    }
    return init;
}

void encode(codec::Writer& w, const TallyResult& t) {
    w.u32(static_cast<std::uint32_t>(t.tally.size()));
    for (auto v : t.tally) w.u64(v);
    crypto::encode(w, t.e_sum);
    crypto::encode(w, t.e_sum_opening);
    w.u32(static_cast<std::uint32_t>(t.coins.size()));
    for (auto c : t.coins) w.u8(c);
    w.u32(static_cast<std::uint32_t>(t.openings.size()));
    for (const auto& [ref, o] : t.openings) {
        put_ref(w, ref);
        crypto::encode(w, o);
    }
    w.u32(static_cast<std::uint32_t>(t.proofs.size()));
    for (const auto& [ref, p] : t.proofs) {
        put_ref(w, ref);
        crypto::encode(w, p);
    }
    w.u32(static_cast<std::uint32_t>(t.discarded_serials.size()));
    for (auto s : t.discarded_serials) w.u64(s);
}

TallyResult decode_tally_result(codec::Reader& r) {
    TallyResult t;
    std::uint32_t nt = r.u32();
    if (nt > (1u << 20)) throw codec::DecodeError("tally too wide");
    for (std::uint32_t i = 0; i < nt; i++) t.tally.push_back(r.u64());
    t.e_sum = crypto::decode_commitment(r);
    t.e_sum_opening = crypto::decode_opening(r);
    std::uint32_t nc = r.u32();
    if (nc > (1u << 24)) throw codec::DecodeError("too many coins");
    for (std::uint32_t i = 0; i < nc; i++) t.coins.push_back(r.u8());
    std::uint32_t no = r.u32();
    if (no > (1u << 24)) throw codec::DecodeError("too many openings");
    for (std::uint32_t i = 0; i < no; i++) {
        TrusteeLineRef ref = get_ref(r);
        t.openings.emplace(ref, crypto::decode_opening(r));
    }
    std::uint32_t np = r.u32();
    if (np > (1u << 24)) throw codec::DecodeError("too many proofs");
    for (std::uint32_t i = 0; i < np; i++) {
        TrusteeLineRef ref = get_ref(r);
        t.proofs.emplace(ref, crypto::decode_proof(r));
    }
    std::uint32_t nd = r.u32();
    if (nd > (1u << 24)) throw codec::DecodeError("too many discards");
    for (std::uint32_t i = 0; i < nd; i++) t.discarded_serials.push_back(r.u64());
    return t;
}

void encode(codec::Writer& w, const ElectionTranscript& t) {
    encode(w, t.params);
    put_elem(w, t.ea_pub);
    w.u32(static_cast<std::uint32_t>(t.vc_pubs.size()));
    for (const auto& e : t.vc_pubs) put_elem(w, e);
    w.u32(static_cast<std::uint32_t>(t.trustee_pubs.size()));
    for (const auto& e : t.trustee_pubs) put_elem(w, e);
    encode(w, t.init);
    w.u8(t.vote_set ? 1 : 0);
    if (t.vote_set) encode(w, *t.vote_set);
    w.u32(static_cast<std::uint32_t>(t.ucerts.size()));
    for (const auto& [serial, u] : t.ucerts) {
        w.u64(serial);
        encode(w, u);
    }
    w.u32(static_cast<std::uint32_t>(t.codes.size()));
    for (const auto& [serial, parts] : t.codes) {
        w.u64(serial);
        for (int p = 0; p < 2; p++) {
            w.u32(static_cast<std::uint32_t>(parts[p].size()));
            for (const auto& c : parts[p]) w.bytes(c);
        }
    }
    w.u8(t.result ? 1 : 0);
    if (t.result) encode(w, *t.result);
}

ElectionTranscript decode_transcript(codec::Reader& r) {
    ElectionTranscript t;
    t.params = decode_params(r);
    t.ea_pub = get_elem(r);
    std::uint32_t nv = r.u32();
    if (nv > (1u << 16)) throw codec::DecodeError("too many vc pubs");
    for (std::uint32_t i = 0; i < nv; i++) t.vc_pubs.push_back(get_elem(r));
    std::uint32_t ntr = r.u32();
    if (ntr > (1u << 16)) throw codec::DecodeError("too many trustee pubs");
    for (std::uint32_t i = 0; i < ntr; i++) t.trustee_pubs.push_back(get_elem(r));
    t.init = decode_bb_init(r);
    if (r.u8()) t.vote_set = decode_vote_set(r);
    std::uint32_t nu = r.u32();
    if (nu > (1u << 24)) throw codec::DecodeError("too many ucerts");
    for (std::uint32_t i = 0; i < nu; i++) {
        std::uint64_t serial = r.u64();
        t.ucerts.emplace(serial, decode_ucert(r));
    }
    std::uint32_t ncodes = r.u32();
    if (ncodes > (1u << 24)) throw codec::DecodeError("too many code entries");
    for (std::uint32_t i = 0; i < ncodes; i++) {
        std::uint64_t serial = r.u64();
        std::array<std::vector<codec::Bytes>, 2> parts;
        for (int p = 0; p < 2; p++) {
            std::uint32_t nl = r.u32();
            if (nl > (1u << 16)) throw codec::DecodeError("too many lines");
            for (std::uint32_t j = 0; j < nl; j++) parts[p].push_back(r.bytes());
        }
        t.codes.emplace(serial, std::move(parts));
    }
    if (r.u8()) t.result = decode_tally_result(r);
    return t;
}

std::optional<codec::Bytes> phase_snapshot(const ElectionTranscript& t, BbPhase phase) {
    codec::Writer w;
    switch (phase) {
        case BbPhase::kInit:
            encode(w, t.init);
            return w.take();
        case BbPhase::kVoteSet:
            if (!t.vote_set) return std::nullopt;
            encode(w, *t.vote_set);
            return w.take();
        case BbPhase::kCodes: {
            if (t.codes.empty()) return std::nullopt;
            w.u32(static_cast<std::uint32_t>(t.codes.size()));
            for (const auto& [serial, parts] : t.codes) {
                w.u64(serial);
                for (int p = 0; p < 2; p++) {
                    w.u32(static_cast<std::uint32_t>(parts[p].size()));
                    for (const auto& c : parts[p]) w.bytes(c);
                }
            }
            return w.take();
        }
        case BbPhase::kResult:
            if (!t.result) return std::nullopt;
            encode(w, *t.result);
            return w.take();
        case BbPhase::kTranscript:
            if (!t.result) return std::nullopt;  // full transcript is final-phase
            encode(w, t);
            return w.take();
    }
    return std::nullopt;
}

}  // namespace agora::proto
