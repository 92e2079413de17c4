#pragma once

#include <cstdint>

#include "agora/group.hpp"

namespace agora::crypto {

struct SigningKey {
    Scalar secret;
    Element pub;

    bool operator==(const SigningKey&) const = default;
};

struct Signature {
    Scalar c;
    Scalar z;

    bool operator==(const Signature&) const = default;
};

// Schnorr over the election group. Nonces are derived deterministically
// from (secret, message) so signing never consumes ambient randomness and
// identical inputs produce identical bytes.
SigningKey keygen(const Group& g, rng::Prng& rng);
Signature sign(const Group& g, const SigningKey& key, std::span<const std::uint8_t> msg);
bool verify_sig(const Group& g, const Element& pub, std::span<const std::uint8_t> msg,
                const Signature& sig);

codec::Bytes sig_encode(const Signature& s);
Signature sig_decode(codec::Reader& r);

}  // namespace agora::crypto
