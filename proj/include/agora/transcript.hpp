#pragma once

#include <map>
#include <optional>

#include "agora/messages.hpp"

namespace agora::proto {

// everything a BB node publishes once the trustees are done
struct TallyResult {
    std::vector<std::uint64_t> tally;  // one count per option
    crypto::VectorCommitment e_sum;
    crypto::Opening e_sum_opening;  // randomizers reconstructed from T_l shares
    crypto::CoinString coins;
    std::map<TrusteeLineRef, crypto::Opening> openings;        // unused lines
    std::map<TrusteeLineRef, crypto::UnitVectorProof> proofs;  // used lines, completed
    std::vector<std::uint64_t> discarded_serials;

    bool operator==(const TallyResult&) const = default;
};

// snapshot of one BB node's published state; fields fill in as the
// election advances through its phases
struct ElectionTranscript {
    ea::ElectionParams params;
    crypto::Element ea_pub;
    std::vector<crypto::Element> vc_pubs;
    std::vector<crypto::Element> trustee_pubs;
    ea::BbInit init;
    std::optional<VoteSet> vote_set;
    std::map<std::uint64_t, Ucert> ucerts;
    // revealed vote codes, [serial][part][pos], present once msk reconstructed
    std::map<std::uint64_t, std::array<std::vector<codec::Bytes>, 2>> codes;
    std::optional<TallyResult> result;

    bool operator==(const ElectionTranscript&) const = default;

    BbPhase phase() const {
        if (result) return BbPhase::kResult;
        if (!codes.empty()) return BbPhase::kCodes;
        if (vote_set) return BbPhase::kVoteSet;
        return BbPhase::kInit;
    }
};

void encode(codec::Writer& w, const ea::ElectionParams& p);
ea::ElectionParams decode_params(codec::Reader& r);
void encode(codec::Writer& w, const ea::BbInit& init);
ea::BbInit decode_bb_init(codec::Reader& r);
void encode(codec::Writer& w, const TallyResult& t);
TallyResult decode_tally_result(codec::Reader& r);
void encode(codec::Writer& w, const ElectionTranscript& t);
ElectionTranscript decode_transcript(codec::Reader& r);

// canonical body for a given read phase; nullopt when not yet available
std::optional<codec::Bytes> phase_snapshot(const ElectionTranscript& t, BbPhase phase);

}  // namespace agora::proto
