#pragma once

#include <cstdint>
#include <vector>

#include "agora/group.hpp"

namespace agora::crypto {

// m-length integer vector; a fresh ballot line commits to a unit vector,
// folded tallies commit to per-option counts
struct OptionEncoding {
    std::vector<std::uint64_t> vec;

    bool is_unit_vector() const;
    bool operator==(const OptionEncoding&) const = default;
};

OptionEncoding unit_vector(std::size_t m, std::size_t index);

// vector of lifted ElGamal pairs: component i is (g^r_i, h^r_i * g^v_i)
struct VectorCommitment {
    std::vector<std::pair<Element, Element>> components;

    std::size_t arity() const { return components.size(); }
    bool operator==(const VectorCommitment&) const = default;
};

// message is empty when unknown; open_and_decode then recovers it by
// bounded discrete log
struct Opening {
    std::vector<std::uint64_t> message;
    std::vector<Scalar> randomizers;

    bool operator==(const Opening&) const = default;
};

VectorCommitment commit(const Group& g, const OptionEncoding& encoding,
                        std::span<const Scalar> randomizers);

// componentwise product; openings add. Exact homomorphism:
// combine(commit(a,r), commit(b,s)) == commit(a+b, r+s).
VectorCommitment combine(const Group& g, const VectorCommitment& c1, const VectorCommitment& c2);
Opening combine_openings(const Group& g, const Opening& o1, const Opening& o2);

enum class OpenStatus : std::uint8_t {
    kOk,
    kInconsistent,  // opening does not match the commitment
    kOverflow,      // an exponent exceeds max_tally
};

struct OpenResult {
    OpenStatus status = OpenStatus::kInconsistent;
    OptionEncoding encoding;

    bool ok() const { return status == OpenStatus::kOk; }
};

OpenResult open_and_decode(const Group& g, const VectorCommitment& c, const Opening& o,
                           std::uint64_t max_tally);

void encode(codec::Writer& w, const VectorCommitment& c);
VectorCommitment decode_commitment(codec::Reader& r);
void encode(codec::Writer& w, const Opening& o);
Opening decode_opening(codec::Reader& r);

}  // namespace agora::crypto
