#include "agora/audit.hpp"

#include <algorithm>
#include <set>

#include "agora/trustee.hpp"

namespace agora::audit {

const char* check_name(Check c) {
    switch (c) {
        case Check::kDuplicateCodes: return "a:duplicate-codes";
        case Check::kTwoCodesPerPart: return "b:two-codes-per-part";
        case Check::kTwoPartsUsed: return "c:two-parts-used";
        case Check::kOpenings: return "d:openings";
        case Check::kProofs: return "e:proofs";
        case Check::kSubmittedConsistent: return "f:submitted-consistency";
        case Check::kUnusedConsistent: return "g:unused-consistency";
    }
    return "?";
}

namespace {

struct VotedLoc {
    ea::Part part;
    std::uint32_t pos;
};

std::optional<VotedLoc> locate(const proto::ElectionTranscript& t, std::uint64_t serial,
                               const codec::Bytes& code) {
    auto it = t.codes.find(serial);
    if (it == t.codes.end()) return std::nullopt;
    for (int p = 0; p < 2; p++)
        for (std::uint32_t pos = 0; pos < it->second[p].size(); pos++)
            if (it->second[p][pos] == code) return VotedLoc{static_cast<ea::Part>(p), pos};
    return std::nullopt;
}

}  // namespace

AuditReport audit(const proto::ElectionTranscript& t, std::span<const DelegatedAudit> delegated) {
    AuditReport report;
    if (!t.vote_set || t.codes.empty() || !t.result) return report;  // incomplete transcript
    report.transcript_complete = true;
    auto g = crypto::make_group(t.params.group_name);
    const auto& result = *t.result;
    std::set<std::uint64_t> discarded(result.discarded_serials.begin(),
                                      result.discarded_serials.end());

    auto flag = [&](Check c, std::uint64_t serial, std::string detail) {
        report.violations.push_back(Violation{c, serial, std::move(detail)});
    };

    // (a) within each opened ballot, no two vote codes are the same
    for (const auto& [serial, parts] : t.codes) {
        std::set<codec::Bytes> seen;
        for (int p = 0; p < 2; p++)
            for (const auto& code : parts[p])
                if (!seen.insert(code).second)
                    flag(Check::kDuplicateCodes, serial, "vote code appears twice");
    }

    // (b)/(c): submitted codes per ballot and per part
    std::map<std::uint64_t, std::vector<VotedLoc>> used;
    for (const auto& e : t.vote_set->entries) {
        if (!e.voted || discarded.contains(e.serial)) continue;
        auto loc = locate(t, e.serial, e.vote_code);
        if (!loc) {
            flag(Check::kSubmittedConsistent, e.serial,
                 "submitted code not present among revealed codes");
            continue;
        }
        used[e.serial].push_back(*loc);
    }
    for (const auto& [serial, locs] : used) {
        std::array<int, 2> per_part{0, 0};
        for (const auto& l : locs) per_part[static_cast<int>(l.part)]++;
        if (per_part[0] > 1 || per_part[1] > 1)
            flag(Check::kTwoCodesPerPart, serial, "multiple submitted codes in one part");
        if (per_part[0] > 0 && per_part[1] > 0)
            flag(Check::kTwoPartsUsed, serial, "both parts marked used");
    }

    // (d) openings: every line outside a used part must be opened, validly
    for (const auto& ballot : t.init.ballots) {
        if (discarded.contains(ballot.serial_no)) continue;
        auto uit = used.find(ballot.serial_no);
        std::optional<VotedLoc> voted;
        if (uit != used.end() && uit->second.size() == 1) voted = uit->second[0];
        for (int p = 0; p < 2; p++) {
            ea::Part part = static_cast<ea::Part>(p);
            bool is_used_part = voted && voted->part == part;
            for (std::uint32_t pos = 0; pos < ballot.parts[p].size(); pos++) {
                if (is_used_part) continue;  // stays committed; covered by (e)
                proto::TrusteeLineRef ref{ballot.serial_no, part, pos};
                auto oit = result.openings.find(ref);
                if (oit == result.openings.end()) {
                    flag(Check::kOpenings, ballot.serial_no,
                         "missing opening for an unused line");
                    continue;
                }
                auto res = crypto::open_and_decode(*g, ballot.parts[p][pos].commitment,
                                                   oit->second, t.params.n);
                if (!res.ok())
                    flag(Check::kOpenings, ballot.serial_no, "opening fails to verify");
                else if (!res.encoding.is_unit_vector())
                    flag(Check::kOpenings, ballot.serial_no, "opened value is not a unit vector");
            }
        }
    }

    // (e) completed proofs for used parts, under the coin-derived challenge
    crypto::CoinString coins = trustee::derive_coins(t.params, *t.vote_set, t.codes);
    if (coins != result.coins)
        flag(Check::kProofs, 0, "published coin string does not match the vote set");
    for (const auto& [serial, locs] : used) {
        if (locs.size() != 1) continue;
        proto::TrusteeLineRef ref{serial, locs[0].part, locs[0].pos};
        auto pit = result.proofs.find(ref);
        if (pit == result.proofs.end()) {
            flag(Check::kProofs, serial, "missing completed proof for the voted line");
            continue;
        }
        const auto* ballot = [&]() -> const ea::BbBallotEntry* {
            for (const auto& b : t.init.ballots)
                if (b.serial_no == serial) return &b;
            return nullptr;
        }();
        if (!ballot || ref.pos >= ballot->part(ref.part).size()) {
            flag(Check::kProofs, serial, "voted line missing from init data");
            continue;
        }
        std::string zctx = ea::zk_share_context(serial, ref.part, ref.pos);
        crypto::Scalar expect =
            crypto::derive_challenge(*g, coins, codec::Bytes(zctx.begin(), zctx.end()));
        if (!(pit->second.challenge == expect)) {
            flag(Check::kProofs, serial, "proof challenge does not match the voters' coins");
            continue;
        }
        try {
            if (!crypto::verify_proof(*g, ballot->part(ref.part)[ref.pos].commitment, pit->second))
                flag(Check::kProofs, serial, "completed proof fails to verify");
        } catch (const crypto::IncompleteProof&) {
            flag(Check::kProofs, serial, "published proof lacks its final move");
        }
    }

    // (f)/(g) delegated audits
    for (const auto& d : delegated) {
        bool found = false;
        for (const auto& e : t.vote_set->entries)
            if (e.serial == d.serial && e.voted && e.vote_code == d.cast_code) found = true;
        if (!found)
            flag(Check::kSubmittedConsistent, d.serial,
                 "voter's cast code is not in the published vote set");

        // compare the printed unused part against the opened BB lines
        const auto* ballot = [&]() -> const ea::BbBallotEntry* {
            for (const auto& b : t.init.ballots)
                if (b.serial_no == d.serial) return &b;
            return nullptr;
        }();
        auto cit = t.codes.find(d.serial);
        if (!ballot || cit == t.codes.end()) {
            flag(Check::kUnusedConsistent, d.serial, "ballot missing from transcript");
            continue;
        }
        int p = static_cast<int>(d.unused_part);
        std::vector<ea::OpenedBbLine> opened;
        for (std::uint32_t pos = 0; pos < ballot->parts[p].size(); pos++) {
            ea::OpenedBbLine line;
            if (pos < cit->second[p].size()) line.vote_code = cit->second[p][pos];
            line.commitment = ballot->parts[p][pos].commitment;
            proto::TrusteeLineRef ref{d.serial, d.unused_part, pos};
            auto oit = result.openings.find(ref);
            if (oit != result.openings.end()) line.opening = oit->second;
            opened.push_back(std::move(line));
        }
        auto setup_report = ea::audit_setup(*g, t.params, d.unused_lines, opened);
        if (!setup_report.complete) {
            flag(Check::kUnusedConsistent, d.serial, "unused part not fully opened");
        } else {
            for (const auto& v : setup_report.violations)
                flag(Check::kUnusedConsistent, d.serial, v);
        }
    }

    return report;
}

}  // namespace agora::audit
