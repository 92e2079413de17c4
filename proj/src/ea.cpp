#include "agora/ea.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "agora/batch.hpp"

namespace agora::ea {

void ElectionParams::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("params: " + what); };
    if (n < 1) fail("n >= 1 required");
    if (m < 2) fail("m >= 2 required");
    if (!option_labels.empty() && option_labels.size() != m)
        fail("option-labels must have m entries");
    if (n_v < 3 * f_v + 1) fail("N_v >= 3*f_v+1 required");
    if (n_b < 2 * f_b + 1) fail("N_b >= 2*f_b+1 required");
    if (h_t < 1 || h_t > n_t) fail("1 <= h_t <= N_t required");
    if (n_v == 0 || n_b == 0 || n_t == 0) fail("node counts must be positive");
    if (n_v > 255 || n_t > 255) fail("share indices are limited to 255");
    crypto::make_group(group_name);  // throws on unknown name
}

std::string msk_share_context() { return "msk"; }

static std::string line_context(const char* kind, std::uint64_t serial, Part part,
                                std::size_t line) {
    return std::string(kind) + ":" + std::to_string(serial) + ":" + part_name(part) + ":" +
           std::to_string(line);
}

std::string receipt_share_context(std::uint64_t serial, Part part, std::size_t line) {
    return line_context("receipt", serial, part, line);
}
std::string opening_share_context(std::uint64_t serial, Part part, std::size_t line) {
    return line_context("opening", serial, part, line);
}
std::string zk_share_context(std::uint64_t serial, Part part, std::size_t line) {
    return line_context("zk", serial, part, line);
}

codec::Bytes encode_scalars(std::span<const crypto::Scalar> scalars) {
    codec::Writer w;
    w.u32(static_cast<std::uint32_t>(scalars.size()));
    for (const auto& s : scalars) w.raw(s.b);
    return w.take();
}

std::vector<crypto::Scalar> decode_scalars(std::span<const std::uint8_t> raw) {
    codec::Reader r(raw);
    std::uint32_t n = r.u32();
    std::vector<crypto::Scalar> out(n);
    for (auto& s : out) {
        auto b = r.raw(32);
        std::copy(b.begin(), b.end(), s.b.begin());
    }
    r.expect_done();
    return out;
}

namespace {

std::vector<std::size_t> fisher_yates(std::size_t m, rng::Prng& rng) {
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; i++) perm[i] = i;
    for (std::size_t i = m; i > 1; i--) {
        std::size_t j = rng.below(i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

codec::Bytes receipt_bytes(std::uint64_t r) {
    codec::Bytes b(8);
    for (int i = 0; i < 8; i++) b[7 - i] = static_cast<std::uint8_t>(r >> (8 * i));
    return b;
}

}  // namespace

SetupOutput setup(const ElectionParams& params) { return setup(params, SetupAttack{}); }

SetupOutput setup(const ElectionParams& params_in, const SetupAttack& attack) {
    params_in.validate();
    ElectionParams params = params_in;
    if (params.option_labels.empty()) {
        for (std::uint64_t i = 1; i <= params.m; i++)
            params.option_labels.push_back("option-" + std::to_string(i));
    }
    auto group_ptr = crypto::make_group(params.group_name);
    const crypto::Group& g = *group_ptr;
    const std::size_t m = params.m;
    const std::size_t n = params.n;

    rng::Prng master(params.rng_seed);
    SetupOutput out;

    // node keypairs; the EA is the only PKI
    rng::Prng key_rng = master.derive("keys");
    crypto::SigningKey ea_key = crypto::keygen(g, key_rng);
    for (std::uint32_t i = 0; i < params.n_v; i++) out.vc_keys.push_back(crypto::keygen(g, key_rng));
    for (std::uint32_t i = 0; i < params.n_b; i++) out.bb_keys.push_back(crypto::keygen(g, key_rng));
    for (std::uint32_t i = 0; i < params.n_t; i++)
        out.trustee_keys.push_back(crypto::keygen(g, key_rng));

    out.public_info.params = params;
    out.public_info.ea_pub = ea_key.pub;
    for (auto& k : out.vc_keys) out.public_info.vc_pubs.push_back(k.pub);
    for (auto& k : out.bb_keys) out.public_info.bb_pubs.push_back(k.pub);
    for (auto& k : out.trustee_keys) out.public_info.trustee_pubs.push_back(k.pub);

    // master symmetric key hiding the vote codes on the BB
    rng::Prng msk_rng = master.derive("msk");
    codec::Bytes msk = msk_rng.bytes(kMskLen);
    auto msk_shares = crypto::share_secret(msk, params.vc_quorum(), params.n_v, g, ea_key,
                                           msk_share_context(), msk_rng);
    crypto::HashCommitment msk_commitment = crypto::hash_commit(msk, msk_rng.u64());

    // ballots: serials 1..n, vote codes unique within each ballot
    struct LineSecrets {
        std::uint64_t salt;
        std::vector<crypto::Share> receipt_shares;
    };
    // [ballot][part][option]
    std::vector<std::array<std::vector<LineSecrets>, 2>> secrets(n);
    out.ballots.resize(n);

    for (std::size_t b = 0; b < n; b++) {
        std::uint64_t serial = b + 1;
        rng::Prng brng = master.derive("ballot", serial);
        out.ballots[b].serial_no = serial;
        std::set<codec::Bytes> seen_codes;
        for (int p = 0; p < 2; p++) {
            auto& lines = out.ballots[b].parts[p];
            auto& secs = secrets[b][p];
            lines.resize(m);
            secs.resize(m);
            for (std::size_t j = 0; j < m; j++) {
                codec::Bytes code;
                do {
                    code = brng.bytes(kVoteCodeLen);
                } while (!seen_codes.insert(code).second);
                lines[j].vote_code = std::move(code);
                lines[j].option_label = params.option_labels[j];
                lines[j].receipt = brng.u64();
                secs[j].salt = brng.u64();
                secs[j].receipt_shares.resize(params.n_v);
            }
        }
    }

    // option-encoding commitments and proof first moves for every line,
    // computed in one flat batch: index ((b*2 + part)*m + option)
    std::vector<crypto::OptionEncoding> encodings;
    std::vector<crypto::Opening> openings;
    encodings.reserve(n * 2 * m);
    openings.reserve(n * 2 * m);
    rng::Prng commit_rng = master.derive("commit");
    for (std::size_t b = 0; b < n; b++) {
        for (int p = 0; p < 2; p++) {
            for (std::size_t j = 0; j < m; j++) {
                encodings.push_back(crypto::unit_vector(m, j));
                crypto::Opening o;
                o.message = encodings.back().vec;
                for (std::size_t c = 0; c < m; c++) o.randomizers.push_back(g.random_scalar(commit_rng));
                openings.push_back(std::move(o));
            }
        }
    }
    auto commitments = crypto::batch_commit(g, encodings, openings);
    auto first_moves = crypto::batch_prove_first(g, commitments, openings, master.derive("prove"));

    // per-line share dealing, in shuffled order so contexts match positions
    out.vc_inits.resize(params.n_v);
    for (std::uint32_t i = 0; i < params.n_v; i++) {
        out.vc_inits[i].vc_index = i + 1;
        out.vc_inits[i].msk_share = msk_shares[i];
        out.vc_inits[i].ballots.resize(n);
    }
    out.trustee_inits.resize(params.n_t);
    for (std::uint32_t t = 0; t < params.n_t; t++) {
        out.trustee_inits[t].trustee_index = t + 1;
        out.trustee_inits[t].ballots.resize(n);
    }
    out.bb_init.msk_commitment = msk_commitment;
    out.bb_init.ballots.resize(n);

    rng::Prng share_rng = master.derive("shares");
    rng::Prng perm_rng = master.derive("perms");
    rng::Prng enc_rng = master.derive("code-enc");

    for (std::size_t b = 0; b < n; b++) {
        std::uint64_t serial = b + 1;
        out.bb_init.ballots[b].serial_no = serial;
        for (auto& vi : out.vc_inits) vi.ballots[b].serial_no = serial;
        for (auto& ti : out.trustee_inits) ti.ballots[b].serial_no = serial;

        for (int p = 0; p < 2; p++) {
            Part part = static_cast<Part>(p);
            auto perm = fisher_yates(m, perm_rng);
            auto& printed = out.ballots[b].parts[p];

            for (auto& vi : out.vc_inits) vi.ballots[b].parts[p].resize(m);
            for (auto& ti : out.trustee_inits) ti.ballots[b].parts[p].resize(m);
            auto& bb_part = out.bb_init.ballots[b].parts[p];
            bb_part.resize(m);

            bool attacked = false;
            for (const auto& mod : attack.modified)
                if (mod.serial == serial && mod.part == part) attacked = true;

            for (std::size_t pos = 0; pos < m; pos++) {
                std::size_t j = perm[pos];  // original option index
                // a modification attack points the code at another option's
                // commitment; everything dealt stays consistent with it
                std::size_t cj = j;
                if (attacked && j == 0) cj = 1;
                else if (attacked && j == 1) cj = 0;
                std::size_t flat = (b * 2 + static_cast<std::size_t>(p)) * m + cj;
                const auto& line = printed[j];

                // VC view: hash commitment of the code + receipt shares
                auto hc = crypto::hash_commit(line.vote_code, secrets[b][p][j].salt);
                auto rshares =
                    crypto::share_bytes(receipt_bytes(line.receipt), params.vc_quorum(),
                                        params.n_v, share_rng);
                std::string rctx = receipt_share_context(serial, part, pos);
                for (std::uint32_t i = 0; i < params.n_v; i++) {
                    out.vc_inits[i].ballots[b].parts[p][pos] = VcLine{
                        hc, crypto::make_signed_share(g, ea_key, rctx, i + 1,
                                                      std::move(rshares[i]))};
                }

                // BB view: encrypted code + payload
                bb_part[pos] = BbLine{crypto::enc_vote_code(line.vote_code, msk, enc_rng),
                                      commitments[flat], first_moves[flat].proof};

                // trustee view: opening and prover-state shares
                std::vector<std::vector<crypto::Scalar>> open_shares(params.n_t);
                for (const auto& r : openings[flat].randomizers) {
                    auto sh = crypto::share_scalar(g, r, params.h_t, params.n_t, share_rng);
                    for (std::uint32_t t = 0; t < params.n_t; t++)
                        open_shares[t].push_back(sh[t]);
                }
                std::vector<std::vector<crypto::Scalar>> zk_shares(params.n_t);
                for (const auto& coeff : first_moves[flat].coeffs.flatten()) {
                    auto sh = crypto::share_scalar(g, coeff, params.h_t, params.n_t, share_rng);
                    for (std::uint32_t t = 0; t < params.n_t; t++) zk_shares[t].push_back(sh[t]);
                }
                std::string octx = opening_share_context(serial, part, pos);
                std::string zctx = zk_share_context(serial, part, pos);
                for (std::uint32_t t = 0; t < params.n_t; t++) {
                    out.trustee_inits[t].ballots[b].parts[p][pos] = TrusteeLine{
                        commitments[flat],
                        crypto::make_signed_share(g, ea_key, octx, t + 1,
                                                  encode_scalars(open_shares[t])),
                        crypto::make_signed_share(g, ea_key, zctx, t + 1,
                                                  encode_scalars(zk_shares[t]))};
                }
            }
        }
    }
    // the EA's working secrets (msk, openings, prover coefficients) go out
    // of scope here; recipients keep only their own slices
    return out;
}

AuditSetupReport audit_setup(const crypto::Group& g, const ElectionParams& params,
                             const std::vector<BallotLine>& printed_part,
                             const std::vector<OpenedBbLine>& opened_part) {
    AuditSetupReport report;
    report.complete = true;
    if (printed_part.size() != opened_part.size()) {
        report.violations.push_back("line count mismatch between printed part and BB part");
        return report;
    }
    for (const auto& line : opened_part) {
        if (line.opening.randomizers.empty()) {
            report.complete = false;  // cannot audit without the opening
            return report;
        }
    }

    std::map<codec::Bytes, std::string> printed_by_code;
    for (const auto& line : printed_part) {
        if (!printed_by_code.emplace(line.vote_code, line.option_label).second)
            report.violations.push_back("duplicate vote code in printed part");
    }

    std::set<codec::Bytes> seen;
    for (std::size_t pos = 0; pos < opened_part.size(); pos++) {
        const auto& line = opened_part[pos];
        auto res = crypto::open_and_decode(g, line.commitment, line.opening, params.n);
        if (!res.ok()) {
            report.violations.push_back("line " + std::to_string(pos) +
                                        ": commitment opening rejected");
            continue;
        }
        if (!res.encoding.is_unit_vector()) {
            report.violations.push_back("line " + std::to_string(pos) +
                                        ": commitment is not a unit vector");
            continue;
        }
        auto it = printed_by_code.find(line.vote_code);
        if (it == printed_by_code.end()) {
            report.violations.push_back("line " + std::to_string(pos) +
                                        ": vote code not present on printed part");
            continue;
        }
        if (!seen.insert(line.vote_code).second) {
            report.violations.push_back("line " + std::to_string(pos) +
                                        ": vote code appears twice on the BB part");
            continue;
        }
        std::size_t opt = 0;
        while (res.encoding.vec[opt] == 0) opt++;
        if (opt >= params.option_labels.size() || params.option_labels[opt] != it->second) {
            report.violations.push_back("line " + std::to_string(pos) +
                                        ": opened option does not match printed association");
        }
    }
    if (seen.size() != printed_part.size() && report.violations.empty())
        report.violations.push_back("printed codes not covered by BB part");
    return report;
}

std::vector<std::string> audit_serial_uniqueness(std::span<const std::uint64_t> serials) {
    std::vector<std::string> violations;
    std::set<std::uint64_t> seen;
    for (auto s : serials) {
        if (!seen.insert(s).second)
            violations.push_back("clash: duplicate serial-no " + std::to_string(s));
    }
    return violations;
}

}  // namespace agora::ea
