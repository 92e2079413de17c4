#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "agora/group.hpp"
#include "agora/schnorr.hpp"

namespace agora::crypto {

// Shamir sharing at threshold k of N, share i evaluated at x = i (i in
// [1, N], so N <= 255 for the byte-wise flavor). Two flavors:
//   - byte strings over GF(256), one polynomial per byte (msk, receipts);
//   - scalars over the group order, which is linear: adding share i of a
//     and share i of b gives share i of a+b (commitment openings).

std::vector<codec::Bytes> share_bytes(std::span<const std::uint8_t> secret, std::size_t k,
                                      std::size_t N, rng::Prng& rng);
// pairs are (index, value); requires >= k entries with distinct indices,
// all values the same length
std::optional<codec::Bytes> reconstruct_bytes(
    std::span<const std::pair<std::uint32_t, codec::Bytes>> shares, std::size_t k);

std::vector<Scalar> share_scalar(const Group& g, const Scalar& secret, std::size_t k,
                                 std::size_t N, rng::Prng& rng);
std::optional<Scalar> reconstruct_scalar(
    const Group& g, std::span<const std::pair<std::uint32_t, Scalar>> shares, std::size_t k);

// Lagrange coefficients at x=0 for the given distinct evaluation points.
std::vector<Scalar> lagrange_at_zero(const Group& g, std::span<const std::uint32_t> xs);

// Dealer-signed share as it travels between nodes. The dealer signature
// covers (context-tag, index, value), binding a share to the exact slot it
// was dealt for; shares failing verification are dropped before use.
struct Share {
    std::uint32_t index = 0;  // in [1, N]
    codec::Bytes value;
    Signature dealer_sig;

    bool operator==(const Share&) const = default;
};

codec::Bytes share_payload(std::string_view context_tag, std::uint32_t index,
                           std::span<const std::uint8_t> value);

Share make_signed_share(const Group& g, const SigningKey& dealer, std::string_view context_tag,
                        std::uint32_t index, codec::Bytes value);
bool verify_share(const Group& g, const Element& dealer_pub, std::string_view context_tag,
                  const Share& share);

// share_secret/reconstruct over byte strings with dealer signatures, the
// (N_v - f_v, N_v) scheme the protocol uses for msk and receipts
void encode(codec::Writer& w, const Share& s);
Share decode_share(codec::Reader& r);

std::vector<Share> share_secret(std::span<const std::uint8_t> secret, std::size_t k, std::size_t N,
                                const Group& g, const SigningKey& dealer,
                                std::string_view context_tag, rng::Prng& rng);
std::optional<codec::Bytes> reconstruct(std::span<const Share> shares, std::size_t k);

}  // namespace agora::crypto
