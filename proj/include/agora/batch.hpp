#pragma once

#include <vector>

#include "agora/proofs.hpp"

namespace agora::crypto {

// Batch kernels over independent ballot lines. These dominate setup and
// audit time, and every item is independent, so the hot variants run the
// loop under OpenMP. The _serial twins are the reference implementations;
// both orders must produce bit-identical results (randomness is derived
// per item up front, not drawn inside the loop).

std::vector<VectorCommitment> batch_commit_serial(const Group& g,
                                                  std::span<const OptionEncoding> encodings,
                                                  std::span<const Opening> openings);
std::vector<VectorCommitment> batch_commit(const Group& g,
                                           std::span<const OptionEncoding> encodings,
                                           std::span<const Opening> openings);

std::vector<FirstMoveOutput> batch_prove_first_serial(const Group& g,
                                                      std::span<const VectorCommitment> cs,
                                                      std::span<const Opening> os,
                                                      const rng::Prng& base_rng);
std::vector<FirstMoveOutput> batch_prove_first(const Group& g,
                                               std::span<const VectorCommitment> cs,
                                               std::span<const Opening> os,
                                               const rng::Prng& base_rng);

std::vector<std::uint8_t> batch_verify_serial(const Group& g,
                                              std::span<const VectorCommitment> cs,
                                              std::span<const UnitVectorProof> proofs);
std::vector<std::uint8_t> batch_verify(const Group& g, std::span<const VectorCommitment> cs,
                                       std::span<const UnitVectorProof> proofs);

}  // namespace agora::crypto
