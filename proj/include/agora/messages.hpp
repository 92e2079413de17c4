#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "agora/consensus.hpp"
#include "agora/ea.hpp"

namespace agora::proto {

// node addressing inside a run: role + index
enum class Role : std::uint8_t { kVoter = 0, kVc = 1, kBb = 2, kTrustee = 3, kClient = 4 };

struct NodeAddr {
    Role role = Role::kVoter;
    std::uint32_t index = 0;  // 0-based within role

    auto operator<=>(const NodeAddr&) const = default;
};

enum class MsgKind : std::uint8_t {
    kVote = 0,
    kReceipt,
    kVoteError,
    kEndorse,
    kEndorsement,
    kVoteP,
    kAnnounce,
    kRecoverRequest,
    kRecoverResponse,
    kConsensusBatch,
    kBbPush,
    kBbRead,
    kBbReadReply,
    kTrusteePost,
};

struct Vote {
    std::uint64_t serial = 0;
    codec::Bytes vote_code;
};

struct Receipt {
    std::uint64_t serial = 0;
    std::uint64_t receipt = 0;
};

enum class VoteErrorReason : std::uint8_t {
    kUnknownSerial = 0,
    kUnknownCode,
    kBallotAlreadyUsed,
};

struct VoteError {
    std::uint64_t serial = 0;
    VoteErrorReason reason = VoteErrorReason::kUnknownSerial;
};

struct Endorse {
    std::uint64_t serial = 0;
    codec::Bytes vote_code;
};

struct Endorsement {
    std::uint64_t serial = 0;
    codec::Bytes vote_code;
    std::uint32_t signer = 0;  // VC index, 0-based
    crypto::Signature sig;
};

// what an endorsement signature covers
codec::Bytes endorsement_payload(std::uint64_t serial, std::span<const std::uint8_t> code);

// uniqueness certificate: >= N_v - f_v distinct-signer endorsements
struct Ucert {
    std::uint64_t serial = 0;
    codec::Bytes vote_code;
    std::vector<std::pair<std::uint32_t, crypto::Signature>> signatures;

    bool operator==(const Ucert&) const = default;
};

bool ucert_valid(const crypto::Group& g, const Ucert& u,
                 std::span<const crypto::Element> vc_pubs, std::uint32_t quorum);

struct VoteP {
    std::uint64_t serial = 0;
    codec::Bytes vote_code;
    crypto::Share receipt_share;
    Ucert ucert;
};

struct Announce {
    std::uint64_t serial = 0;
    bool has_code = false;
    codec::Bytes vote_code;
    Ucert ucert;  // meaningful only when has_code
};

struct RecoverRequest {
    std::uint64_t serial = 0;
};

struct RecoverResponse {
    std::uint64_t serial = 0;
    codec::Bytes vote_code;
    Ucert ucert;
};

// consensus messages travel in signed batches of per-instance items
struct ConsensusBatch {
    std::vector<consensus::Msg> items;
    crypto::Signature sig;  // by the sending VC, over the item list
};

codec::Bytes consensus_batch_payload(std::span<const consensus::Msg> items);

// the agreed set of voted (serial, code) tuples; entries sorted by serial
struct VoteSetEntry {
    std::uint64_t serial = 0;
    bool voted = false;
    codec::Bytes vote_code;

    bool operator==(const VoteSetEntry&) const = default;
};

struct VoteSet {
    std::vector<VoteSetEntry> entries;

    codec::Bytes canonical() const;  // byte-comparable form
    bool operator==(const VoteSet&) const = default;
};

struct BbPush {
    VoteSet vote_set;
    std::map<std::uint64_t, Ucert> ucerts;  // auxiliary, not part of set identity
    crypto::Share msk_share;
};

enum class BbPhase : std::uint8_t {
    kInit = 0,
    kVoteSet,
    kCodes,
    kResult,
    kTranscript,
};

struct BbRead {
    BbPhase phase = BbPhase::kInit;
    std::uint64_t request_id = 0;
};

struct BbReadReply {
    BbPhase phase = BbPhase::kInit;
    std::uint64_t request_id = 0;
    bool available = false;
    codec::Bytes body;  // canonical snapshot for the phase
};

// trustee post: opening shares for unused lines, zk response shares for
// used lines, and the summed tally opening share T_l
struct TrusteeLineRef {
    std::uint64_t serial = 0;
    ea::Part part = ea::Part::A;
    std::uint32_t pos = 0;

    auto operator<=>(const TrusteeLineRef&) const = default;
};

struct TrusteePost {
    std::uint32_t trustee_index = 0;  // 1-based share index
    std::vector<std::pair<TrusteeLineRef, crypto::Share>> opening_shares;
    std::vector<std::pair<TrusteeLineRef, std::vector<crypto::Scalar>>> zk_response_shares;
    std::vector<crypto::Scalar> tally_share;  // T_l, one scalar per option
    crypto::Signature sig;
};

codec::Bytes trustee_post_payload(const TrusteePost& p);

// generic envelope the simulator transports
struct WireMessage {
    MsgKind kind = MsgKind::kVote;
    codec::Bytes body;

    bool operator==(const WireMessage&) const = default;
};

WireMessage wrap(const Vote& v);
WireMessage wrap(const Receipt& v);
WireMessage wrap(const VoteError& v);
WireMessage wrap(const Endorse& v);
WireMessage wrap(const Endorsement& v);
WireMessage wrap(const VoteP& v);
WireMessage wrap(const Announce& v);
WireMessage wrap(const RecoverRequest& v);
WireMessage wrap(const RecoverResponse& v);
WireMessage wrap(const ConsensusBatch& v);
WireMessage wrap(const BbPush& v);
WireMessage wrap(const BbRead& v);
WireMessage wrap(const BbReadReply& v);
WireMessage wrap(const TrusteePost& v);

// each unwrap throws codec::DecodeError on malformed bodies
Vote unwrap_vote(const WireMessage& m);
Receipt unwrap_receipt(const WireMessage& m);
VoteError unwrap_vote_error(const WireMessage& m);
Endorse unwrap_endorse(const WireMessage& m);
Endorsement unwrap_endorsement(const WireMessage& m);
VoteP unwrap_vote_p(const WireMessage& m);
Announce unwrap_announce(const WireMessage& m);
RecoverRequest unwrap_recover_request(const WireMessage& m);
RecoverResponse unwrap_recover_response(const WireMessage& m);
ConsensusBatch unwrap_consensus_batch(const WireMessage& m);
BbPush unwrap_bb_push(const WireMessage& m);
BbRead unwrap_bb_read(const WireMessage& m);
BbReadReply unwrap_bb_read_reply(const WireMessage& m);
TrusteePost unwrap_trustee_post(const WireMessage& m);

void encode(codec::Writer& w, const Ucert& u);
Ucert decode_ucert(codec::Reader& r);
void encode(codec::Writer& w, const VoteSet& v);
VoteSet decode_vote_set(codec::Reader& r);

}  // namespace agora::proto
