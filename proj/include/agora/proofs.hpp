#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "agora/commitment.hpp"
#include "agora/group.hpp"

namespace agora::crypto {

// Three-move proof that a vector commitment encodes a unit vector: a
// Chaum-Pedersen Sigma-OR per component ("this lifted ElGamal pair
// encrypts 0 or 1") plus one equality proof over the componentwise
// product ("the entries sum to 1"). The challenge comes from the voters'
// coins, so the proof is produced in two stages: the dealer publishes the
// first move at setup, and the final move is computed once the coins are
// known.

struct ComponentAnnouncement {
    // announcements for the two OR branches, (g^w, h^w)-shaped
    Element a0_g, a0_h;
    Element a1_g, a1_h;

    bool operator==(const ComponentAnnouncement&) const = default;
};

struct ComponentResponse {
    Scalar e0;  // branch-0 challenge share; e1 = e - e0
    Scalar z0, z1;

    bool operator==(const ComponentResponse&) const = default;
};

enum class ProofPhase : std::uint8_t { kFirstMoveOnly, kComplete };

struct UnitVectorProof {
    ProofPhase phase = ProofPhase::kFirstMoveOnly;
    std::vector<ComponentAnnouncement> announcements;
    Element sum_a_g, sum_a_h;  // announcement for the sum-equals-1 proof

    // present when phase == kComplete
    Scalar challenge;
    std::vector<ComponentResponse> responses;
    Scalar sum_z;

    bool operator==(const UnitVectorProof&) const = default;
};

// The prover's pending final move, kept affine in the challenge e: each
// response scalar is coeff_const + coeff_e * e. This is the exact state
// the dealer secret-shares to trustees, since affine forms survive linear
// secret sharing and the public challenge multiplies in afterwards.
struct ProverCoeffs {
    struct Component {
        Scalar e0_const, e0_e;
        Scalar z0_const, z0_e;
        Scalar z1_const, z1_e;
    };
    std::vector<Component> components;
    Scalar sum_const, sum_e;

    static constexpr std::size_t kScalarsPerComponent = 6;
    std::vector<Scalar> flatten() const;
    static ProverCoeffs unflatten(std::span<const Scalar> flat, std::size_t m);
};

struct FirstMoveOutput {
    UnitVectorProof proof;  // phase kFirstMoveOnly
    ProverCoeffs coeffs;
};

class IncompleteProof : public std::logic_error {
public:
    IncompleteProof() : std::logic_error("proof has no final move yet") {}
};

// Runs the prover algorithm on whatever witness it is given; a witness
// that is not a unit vector yields a transcript the verifier rejects.
FirstMoveOutput prove_first_move(const Group& g, const VectorCommitment& c, const Opening& o,
                                 rng::Prng& rng);

UnitVectorProof finish_proof(const Group& g, const UnitVectorProof& first_move,
                             const ProverCoeffs& coeffs, const Scalar& challenge);

// Same computation as finish_proof but over one party's shares of the
// coefficients: the outputs are that party's shares of the responses.
std::vector<Scalar> response_shares(const Group& g, std::span<const Scalar> coeff_shares,
                                    std::size_t m, const Scalar& challenge);

UnitVectorProof assemble_proof(const UnitVectorProof& first_move, const Scalar& challenge,
                               std::span<const Scalar> responses_flat, std::size_t m);

// throws IncompleteProof when the final move is missing
bool verify_proof(const Group& g, const VectorCommitment& c, const UnitVectorProof& proof);

// Voters' coins, one 0/1 entry per ballot in ascending serial order
// (0 = part A or unvoted, 1 = part B).
using CoinString = std::vector<std::uint8_t>;

Scalar derive_challenge(const Group& g, const CoinString& coins,
                        std::span<const std::uint8_t> proof_context);

// per-component and sum sub-challenges, all derived from the base
Scalar component_challenge(const Group& g, const Scalar& base, std::size_t index);
Scalar sum_challenge(const Group& g, const Scalar& base);

void encode(codec::Writer& w, const UnitVectorProof& p);
UnitVectorProof decode_proof(codec::Reader& r);

}  // namespace agora::crypto
