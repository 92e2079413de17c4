#include "agora/batch.hpp"

#include <stdexcept>

namespace agora::crypto {

namespace {

void check_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("batch: input spans differ in length");
}

}  // namespace

std::vector<VectorCommitment> batch_commit_serial(const Group& g,
                                                  std::span<const OptionEncoding> encodings,
                                                  std::span<const Opening> openings) {
    check_same_size(encodings.size(), openings.size());
    std::vector<VectorCommitment> out(encodings.size());
    for (std::size_t i = 0; i < encodings.size(); i++)
        out[i] = commit(g, encodings[i], openings[i].randomizers);
    return out;
}

std::vector<VectorCommitment> batch_commit(const Group& g,
                                           std::span<const OptionEncoding> encodings,
                                           std::span<const Opening> openings) {
    check_same_size(encodings.size(), openings.size());
    std::vector<VectorCommitment> out(encodings.size());
    std::int64_t n = static_cast<std::int64_t>(encodings.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; i++) out[i] = commit(g, encodings[i], openings[i].randomizers);
    return out;
}

std::vector<FirstMoveOutput> batch_prove_first_serial(const Group& g,
                                                      std::span<const VectorCommitment> cs,
                                                      std::span<const Opening> os,
                                                      const rng::Prng& base_rng) {
    check_same_size(cs.size(), os.size());
    std::vector<FirstMoveOutput> out(cs.size());
    for (std::size_t i = 0; i < cs.size(); i++) {
        rng::Prng item_rng = base_rng.derive("prove", i);
        out[i] = prove_first_move(g, cs[i], os[i], item_rng);
    }
    return out;
}

std::vector<FirstMoveOutput> batch_prove_first(const Group& g,
                                               std::span<const VectorCommitment> cs,
                                               std::span<const Opening> os,
                                               const rng::Prng& base_rng) {
    check_same_size(cs.size(), os.size());
    std::vector<FirstMoveOutput> out(cs.size());
    std::int64_t n = static_cast<std::int64_t>(cs.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; i++) {
        rng::Prng item_rng = base_rng.derive("prove", static_cast<std::uint64_t>(i));
        out[i] = prove_first_move(g, cs[i], os[i], item_rng);
    }
    return out;
}

std::vector<std::uint8_t> batch_verify_serial(const Group& g,
                                              std::span<const VectorCommitment> cs,
                                              std::span<const UnitVectorProof> proofs) {
    check_same_size(cs.size(), proofs.size());
    std::vector<std::uint8_t> out(cs.size());
    for (std::size_t i = 0; i < cs.size(); i++) out[i] = verify_proof(g, cs[i], proofs[i]) ? 1 : 0;
    return out;
}

std::vector<std::uint8_t> batch_verify(const Group& g, std::span<const VectorCommitment> cs,
                                       std::span<const UnitVectorProof> proofs) {
    check_same_size(cs.size(), proofs.size());
    std::vector<std::uint8_t> out(cs.size());
    std::int64_t n = static_cast<std::int64_t>(cs.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; i++) out[i] = verify_proof(g, cs[i], proofs[i]) ? 1 : 0;
    return out;
}

}  // namespace agora::crypto
