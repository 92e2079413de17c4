#pragma once

#include "agora/transcript.hpp"

namespace agora::audit {

// audit information a voter hands to a delegated auditor: the unused
// ballot part (printed copy) and the cast vote code
struct DelegatedAudit {
    std::uint64_t serial = 0;
    ea::Part unused_part = ea::Part::B;
    std::vector<ea::BallotLine> unused_lines;
    codec::Bytes cast_code;
};

enum class Check : std::uint8_t {
    kDuplicateCodes = 0,   // (a) duplicate codes within an opened ballot
    kTwoCodesPerPart,      // (b) two submitted codes for one ballot part
    kTwoPartsUsed,         // (c) more than one used part per ballot
    kOpenings,             // (d) commitment openings valid (and unit vectors)
    kProofs,               // (e) completed zk proofs valid for used parts
    kSubmittedConsistent,  // (f) submitted codes match voters' reports
    kUnusedConsistent,     // (g) unused-part openings match voters' ballots
};

const char* check_name(Check c);

struct Violation {
    Check check;
    std::uint64_t serial = 0;
    std::string detail;
};

struct AuditReport {
    bool transcript_complete = false;  // false: checks could not run
    std::vector<Violation> violations;

    bool passed() const { return transcript_complete && violations.empty(); }
};

AuditReport audit(const proto::ElectionTranscript& transcript,
                  std::span<const DelegatedAudit> delegated);

}  // namespace agora::audit
