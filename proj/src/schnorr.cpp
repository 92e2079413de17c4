#include "agora/schnorr.hpp"

#include "agora/hash.hpp"

namespace agora::crypto {

namespace {

Scalar challenge_of(const Group& g, const Element& pub, const Element& commit_point,
                    std::span<const std::uint8_t> msg) {
    codec::Writer w;
    w.str("agora-sig");
    w.bytes(pub.b);
    w.bytes(commit_point.b);
    w.bytes(msg);
    Digest d = sha256(w.data());
    return g.scalar_from_bytes(d);
}

}  // namespace

SigningKey keygen(const Group& g, rng::Prng& rng) {
    SigningKey k;
    do {
        k.secret = g.random_scalar(rng);
    } while (g.scalar_is_zero(k.secret));
    k.pub = g.exp_g(k.secret);
    return k;
}

Signature sign(const Group& g, const SigningKey& key, std::span<const std::uint8_t> msg) {
    codec::Writer nw;
    nw.str("agora-sig-nonce");
    nw.raw(key.secret.b);
    nw.bytes(msg);
    Scalar k = g.scalar_from_bytes(sha256(nw.data()));
    if (g.scalar_is_zero(k)) k = g.scalar_from_u64(1);

    Element r = g.exp_g(k);
    Scalar c = challenge_of(g, key.pub, r, msg);
    Scalar z = g.scalar_add(k, g.scalar_mul(c, key.secret));
    return Signature{c, z};
}

bool verify_sig(const Group& g, const Element& pub, std::span<const std::uint8_t> msg,
                const Signature& sig) {
    if (!g.is_valid(pub)) return false;
    // R = g^z * pub^{-c}
    Element r = g.mul_exp(g.exp_g(sig.z), pub, g.scalar_neg(sig.c));
    return challenge_of(g, pub, r, msg) == sig.c;
}

codec::Bytes sig_encode(const Signature& s) {
    codec::Writer w;
    w.raw(s.c.b);
    w.raw(s.z.b);
    return w.take();
}

Signature sig_decode(codec::Reader& r) {
    Signature s;
    auto c = r.raw(32);
    auto z = r.raw(32);
    std::copy(c.begin(), c.end(), s.c.b.begin());
    std::copy(z.begin(), z.end(), s.z.b.begin());
    return s;
}

}  // namespace agora::crypto
