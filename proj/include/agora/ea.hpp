#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "agora/commitment.hpp"
#include "agora/proofs.hpp"
#include "agora/schnorr.hpp"
#include "agora/shamir.hpp"
#include "agora/symmetric.hpp"

namespace agora::ea {

constexpr std::size_t kVoteCodeLen = 20;  // 160-bit
constexpr std::size_t kMskLen = 16;       // 128-bit

enum class Part : std::uint8_t { A = 0, B = 1 };
inline Part other(Part p) { return p == Part::A ? Part::B : Part::A; }
inline const char* part_name(Part p) { return p == Part::A ? "A" : "B"; }

struct ElectionParams {
    std::uint64_t n = 0;  // voters
    std::uint64_t m = 0;  // options
    std::vector<std::string> option_labels;
    std::uint32_t n_v = 0, f_v = 0;  // vote collectors
    std::uint32_t n_b = 0, f_b = 0;  // bulletin boards
    std::uint32_t n_t = 0, h_t = 0;  // trustees
    std::uint64_t t_end = 0;
    std::uint64_t rng_seed = 0;
    std::string group_name = "p256";

    std::uint32_t vc_quorum() const { return n_v - f_v; }
    // throws std::invalid_argument naming the violated constraint
    void validate() const;

    bool operator==(const ElectionParams&) const = default;
};

struct BallotLine {
    codec::Bytes vote_code;  // 160-bit, unique within the ballot
    std::string option_label;
    std::uint64_t receipt = 0;  // 64-bit

    bool operator==(const BallotLine&) const = default;
};

// the printed artifact: parts list all m options in label order
struct Ballot {
    std::uint64_t serial_no = 0;
    std::array<std::vector<BallotLine>, 2> parts;

    const std::vector<BallotLine>& part(Part p) const { return parts[static_cast<int>(p)]; }
    bool operator==(const Ballot&) const = default;
};

// one shuffled line of a VC node's view of a ballot part
struct VcLine {
    crypto::HashCommitment code_commitment;  // H_{l,j} with its salt
    crypto::Share receipt_share;

    bool operator==(const VcLine&) const = default;
};

struct VcBallotEntry {
    std::uint64_t serial_no = 0;
    std::array<std::vector<VcLine>, 2> parts;

    const std::vector<VcLine>& part(Part p) const { return parts[static_cast<int>(p)]; }

    bool operator==(const VcBallotEntry&) const = default;
};

struct VcInit {
    std::uint32_t vc_index = 0;  // 1-based share index
    crypto::Share msk_share;
    std::vector<VcBallotEntry> ballots;

    bool operator==(const VcInit&) const = default;
};

struct BbLine {
    codec::Bytes enc_vote_code;  // AES-128-CBC under msk
    crypto::VectorCommitment commitment;
    crypto::UnitVectorProof proof_first;  // first move only

    bool operator==(const BbLine&) const = default;
};

struct BbBallotEntry {
    std::uint64_t serial_no = 0;
    std::array<std::vector<BbLine>, 2> parts;

    const std::vector<BbLine>& part(Part p) const { return parts[static_cast<int>(p)]; }

    bool operator==(const BbBallotEntry&) const = default;
};

struct BbInit {
    crypto::HashCommitment msk_commitment;  // (H_msk, salt_msk)
    std::vector<BbBallotEntry> ballots;

    bool operator==(const BbInit&) const = default;
};

struct TrusteeLine {
    crypto::VectorCommitment commitment;  // same commitment the BB publishes
    // value: m randomizer-scalar shares, canonical order
    crypto::Share opening_share;
    // value: the prover's affine final-move coefficients, shared
    crypto::Share zk_share;

    bool operator==(const TrusteeLine&) const = default;
};

struct TrusteeBallotEntry {
    std::uint64_t serial_no = 0;
    std::array<std::vector<TrusteeLine>, 2> parts;

    const std::vector<TrusteeLine>& part(Part p) const { return parts[static_cast<int>(p)]; }

    bool operator==(const TrusteeBallotEntry&) const = default;
};

struct TrusteeInit {
    std::uint32_t trustee_index = 0;  // 1-based share index
    std::vector<TrusteeBallotEntry> ballots;

    bool operator==(const TrusteeInit&) const = default;
};

struct PublicInfo {
    ElectionParams params;
    crypto::Element ea_pub;  // dealer key for every share signature
    std::vector<crypto::Element> vc_pubs;
    std::vector<crypto::Element> bb_pubs;
    std::vector<crypto::Element> trustee_pubs;

    bool operator==(const PublicInfo&) const = default;
};

// Everything setup hands out, grouped per recipient. The EA state (msk,
// openings, prover secrets) lives only inside setup() and is gone when it
// returns; nothing here holds more than its recipient is entitled to.
struct SetupOutput {
    std::vector<Ballot> ballots;
    std::vector<VcInit> vc_inits;
    BbInit bb_init;
    std::vector<TrusteeInit> trustee_inits;
    PublicInfo public_info;
    std::vector<crypto::SigningKey> vc_keys;
    std::vector<crypto::SigningKey> bb_keys;
    std::vector<crypto::SigningKey> trustee_keys;
};

// A malicious EA "modification attack": within one ballot part, the
// committed option behind each printed code is permuted (first two options
// swapped), while the printed ballot keeps the original associations. The
// dealt data stays internally consistent, so only auditing the modified
// part against the printed copy can expose it.
struct ModifiedPart {
    std::uint64_t serial = 0;
    Part part = Part::A;
};

struct SetupAttack {
    std::vector<ModifiedPart> modified;
};

SetupOutput setup(const ElectionParams& params);
SetupOutput setup(const ElectionParams& params, const SetupAttack& attack);

// dealer-signature context tags, shared by producers and verifiers
std::string msk_share_context();
std::string receipt_share_context(std::uint64_t serial, Part part, std::size_t line);
std::string opening_share_context(std::uint64_t serial, Part part, std::size_t line);
std::string zk_share_context(std::uint64_t serial, Part part, std::size_t line);

// scalar-vector payloads carried inside trustee shares
codec::Bytes encode_scalars(std::span<const crypto::Scalar> scalars);
std::vector<crypto::Scalar> decode_scalars(std::span<const std::uint8_t> raw);

// --- setup audit ----------------------------------------------------------

// a BB line with its vote code revealed and its commitment opened
struct OpenedBbLine {
    codec::Bytes vote_code;
    crypto::VectorCommitment commitment;
    crypto::Opening opening;  // empty randomizers mean "opening missing"
};

struct AuditSetupReport {
    bool complete = false;  // false: openings missing, verdict unavailable
    std::vector<std::string> violations;

    bool passed() const { return complete && violations.empty(); }
};

// Checks that a printed ballot part matches the opened commitments of the
// corresponding (shuffled) BB entries: same code set, and each code's
// commitment opens to the unit vector of the printed option.
AuditSetupReport audit_setup(const crypto::Group& g, const ElectionParams& params,
                             const std::vector<BallotLine>& printed_part,
                             const std::vector<OpenedBbLine>& opened_part);

// serial numbers must be unique across ballots ("clash" detection)
std::vector<std::string> audit_serial_uniqueness(std::span<const std::uint64_t> serials);

}  // namespace agora::ea
