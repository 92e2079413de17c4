#include "agora/proofs.hpp"

#include "agora/hash.hpp"

namespace agora::crypto {

namespace {

// statement element for branch j: V_j = B / g^j
Element branch_statement(const Group& g, const Element& b, int j) {
    return j == 0 ? b : g.mul(b, g.inv(g.g()));
}

bool cp_check(const Group& g, const Element& ann_g, const Element& ann_h, const Element& u,
              const Element& v, const Scalar& e, const Scalar& z) {
    if (g.exp_g(z) != g.mul_exp(ann_g, u, e)) return false;
    return g.exp_h(z) == g.mul_exp(ann_h, v, e);
}

}  // namespace

std::vector<Scalar> ProverCoeffs::flatten() const {
    std::vector<Scalar> out;
    out.reserve(components.size() * kScalarsPerComponent + 2);
    for (const auto& c : components) {
        out.push_back(c.e0_const);
        out.push_back(c.e0_e);
        out.push_back(c.z0_const);
        out.push_back(c.z0_e);
        out.push_back(c.z1_const);
        out.push_back(c.z1_e);
    }
    out.push_back(sum_const);
    out.push_back(sum_e);
    return out;
}

ProverCoeffs ProverCoeffs::unflatten(std::span<const Scalar> flat, std::size_t m) {
    if (flat.size() != m * kScalarsPerComponent + 2)
        throw std::invalid_argument("prover coeffs: bad length");
    ProverCoeffs pc;
    pc.components.resize(m);
    for (std::size_t i = 0; i < m; i++) {
        auto* f = flat.data() + i * kScalarsPerComponent;
        pc.components[i] = {f[0], f[1], f[2], f[3], f[4], f[5]};
    }
    pc.sum_const = flat[m * kScalarsPerComponent];
    pc.sum_e = flat[m * kScalarsPerComponent + 1];
    return pc;
}

FirstMoveOutput prove_first_move(const Group& g, const VectorCommitment& c, const Opening& o,
                                 rng::Prng& rng) {
    std::size_t m = c.arity();
    if (o.randomizers.size() != m || o.message.size() != m)
        throw std::invalid_argument("prove_first_move: opening must carry message and match arity");

    FirstMoveOutput out;
    out.proof.phase = ProofPhase::kFirstMoveOnly;
    out.proof.announcements.resize(m);
    out.coeffs.components.resize(m);

    Scalar r_total = g.scalar_from_u64(0);
    for (std::size_t i = 0; i < m; i++) {
        const Scalar& r = o.randomizers[i];
        r_total = g.scalar_add(r_total, r);
        int real = o.message[i] == 0 ? 0 : 1;

        Scalar w = g.random_scalar(rng);
        Scalar e_fake = g.random_scalar(rng);
        Scalar z_fake = g.random_scalar(rng);

        const Element& u = c.components[i].first;
        Element v_fake = branch_statement(g, c.components[i].second, 1 - real);

        Element real_g = g.exp_g(w), real_h = g.exp_h(w);
        Scalar neg_e = g.scalar_neg(e_fake);
        Element fake_g = g.mul_exp(g.exp_g(z_fake), u, neg_e);
        Element fake_h = g.mul_exp(g.exp_h(z_fake), v_fake, neg_e);

        auto& ann = out.proof.announcements[i];
        if (real == 0) {
            ann = {real_g, real_h, fake_g, fake_h};
        } else {
            ann = {fake_g, fake_h, real_g, real_h};
        }

        // real-branch response z = w + (e - e_fake) * r, affine in e
        Scalar z_const = g.scalar_sub(w, g.scalar_mul(e_fake, r));
        auto& cc = out.coeffs.components[i];
        if (real == 0) {
            cc.e0_const = g.scalar_neg(e_fake);
            cc.e0_e = g.scalar_from_u64(1);
            cc.z0_const = z_const;
            cc.z0_e = r;
            cc.z1_const = z_fake;
            cc.z1_e = g.scalar_from_u64(0);
        } else {
            cc.e0_const = e_fake;
            cc.e0_e = g.scalar_from_u64(0);
            cc.z0_const = z_fake;
            cc.z0_e = g.scalar_from_u64(0);
            cc.z1_const = z_const;
            cc.z1_e = r;
        }
    }

    Scalar w_sum = g.random_scalar(rng);
    out.proof.sum_a_g = g.exp_g(w_sum);
    out.proof.sum_a_h = g.exp_h(w_sum);
    out.coeffs.sum_const = w_sum;
    out.coeffs.sum_e = r_total;
    return out;
}

std::vector<Scalar> response_shares(const Group& g, std::span<const Scalar> coeff_shares,
                                    std::size_t m, const Scalar& challenge) {
    if (coeff_shares.size() != m * ProverCoeffs::kScalarsPerComponent + 2)
        throw std::invalid_argument("response_shares: bad coefficient count");
    std::vector<Scalar> out;
    out.reserve(3 * m + 1);
    for (std::size_t i = 0; i < m; i++) {
        Scalar e_i = component_challenge(g, challenge, i);
        auto* f = coeff_shares.data() + i * ProverCoeffs::kScalarsPerComponent;
        out.push_back(g.scalar_add(f[0], g.scalar_mul(f[1], e_i)));  // e0
        out.push_back(g.scalar_add(f[2], g.scalar_mul(f[3], e_i)));  // z0
        out.push_back(g.scalar_add(f[4], g.scalar_mul(f[5], e_i)));  // z1
    }
    Scalar e_s = sum_challenge(g, challenge);
    const Scalar& sc = coeff_shares[m * ProverCoeffs::kScalarsPerComponent];
    const Scalar& se = coeff_shares[m * ProverCoeffs::kScalarsPerComponent + 1];
    out.push_back(g.scalar_add(sc, g.scalar_mul(se, e_s)));
    return out;
}

UnitVectorProof assemble_proof(const UnitVectorProof& first_move, const Scalar& challenge,
                               std::span<const Scalar> responses_flat, std::size_t m) {
    if (responses_flat.size() != 3 * m + 1)
        throw std::invalid_argument("assemble_proof: bad response count");
    UnitVectorProof p = first_move;
    p.phase = ProofPhase::kComplete;
    p.challenge = challenge;
    p.responses.resize(m);
    for (std::size_t i = 0; i < m; i++) {
        p.responses[i].e0 = responses_flat[3 * i];
        p.responses[i].z0 = responses_flat[3 * i + 1];
        p.responses[i].z1 = responses_flat[3 * i + 2];
    }
    p.sum_z = responses_flat[3 * m];
    return p;
}

UnitVectorProof finish_proof(const Group& g, const UnitVectorProof& first_move,
                             const ProverCoeffs& coeffs, const Scalar& challenge) {
    auto flat = coeffs.flatten();
    auto resp = response_shares(g, flat, coeffs.components.size(), challenge);
    return assemble_proof(first_move, challenge, resp, coeffs.components.size());
}

bool verify_proof(const Group& g, const VectorCommitment& c, const UnitVectorProof& proof) {
    if (proof.phase != ProofPhase::kComplete) throw IncompleteProof();
    std::size_t m = c.arity();
    if (proof.announcements.size() != m || proof.responses.size() != m) return false;
    for (const auto& [a, b] : c.components)
        if (!g.is_valid(a) || !g.is_valid(b)) return false;
    for (const auto& ann : proof.announcements)
        if (!g.is_valid(ann.a0_g) || !g.is_valid(ann.a0_h) || !g.is_valid(ann.a1_g) ||
            !g.is_valid(ann.a1_h))
            return false;
    if (!g.is_valid(proof.sum_a_g) || !g.is_valid(proof.sum_a_h)) return false;

    Element prod_a = g.identity(), prod_b = g.identity();
    for (std::size_t i = 0; i < m; i++) {
        const Element& u = c.components[i].first;
        const Element& b = c.components[i].second;
        prod_a = g.mul(prod_a, u);
        prod_b = g.mul(prod_b, b);

        Scalar e_i = component_challenge(g, proof.challenge, i);
        const auto& resp = proof.responses[i];
        Scalar e1 = g.scalar_sub(e_i, resp.e0);
        const auto& ann = proof.announcements[i];
        if (!cp_check(g, ann.a0_g, ann.a0_h, u, branch_statement(g, b, 0), resp.e0, resp.z0))
            return false;
        if (!cp_check(g, ann.a1_g, ann.a1_h, u, branch_statement(g, b, 1), e1, resp.z1))
            return false;
    }

    Element sum_v = g.mul(prod_b, g.inv(g.g()));  // product must encrypt exactly 1
    return cp_check(g, proof.sum_a_g, proof.sum_a_h, prod_a, sum_v, sum_challenge(g, proof.challenge),
                    proof.sum_z);
}

Scalar derive_challenge(const Group& g, const CoinString& coins,
                        std::span<const std::uint8_t> proof_context) {
    codec::Writer w;
    w.str("agora-challenge");
    w.u32(static_cast<std::uint32_t>(coins.size()));
    // pack one coin per bit, serial order
    std::uint8_t acc = 0;
    int nbits = 0;
    for (std::uint8_t coin : coins) {
        acc = static_cast<std::uint8_t>((acc << 1) | (coin & 1));
        if (++nbits == 8) {
            w.u8(acc);
            acc = 0;
            nbits = 0;
        }
    }
    if (nbits > 0) w.u8(static_cast<std::uint8_t>(acc << (8 - nbits)));
    w.bytes(proof_context);
    return g.scalar_from_bytes(sha256(w.data()));
}

Scalar component_challenge(const Group& g, const Scalar& base, std::size_t index) {
    codec::Writer w;
    w.str("agora-uvp-comp");
    w.raw(base.b);
    w.u64(index);
    return g.scalar_from_bytes(sha256(w.data()));
}

Scalar sum_challenge(const Group& g, const Scalar& base) {
    codec::Writer w;
    w.str("agora-uvp-sum");
    w.raw(base.b);
    return g.scalar_from_bytes(sha256(w.data()));
}

static void put_elem(codec::Writer& w, const Element& e) { w.bytes(e.b); }
static Element get_elem(codec::Reader& r) { return Element{r.bytes()}; }
static void put_scalar(codec::Writer& w, const Scalar& s) { w.raw(s.b); }
static Scalar get_scalar(codec::Reader& r) {
    Scalar s;
    auto raw = r.raw(32);
    std::copy(raw.begin(), raw.end(), s.b.begin());
    return s;
}

void encode(codec::Writer& w, const UnitVectorProof& p) {
    w.u8(static_cast<std::uint8_t>(p.phase));
    w.u32(static_cast<std::uint32_t>(p.announcements.size()));
    for (const auto& a : p.announcements) {
        put_elem(w, a.a0_g);
        put_elem(w, a.a0_h);
        put_elem(w, a.a1_g);
        put_elem(w, a.a1_h);
    }
    put_elem(w, p.sum_a_g);
    put_elem(w, p.sum_a_h);
    if (p.phase == ProofPhase::kComplete) {
        put_scalar(w, p.challenge);
        w.u32(static_cast<std::uint32_t>(p.responses.size()));
        for (const auto& resp : p.responses) {
            put_scalar(w, resp.e0);
            put_scalar(w, resp.z0);
            put_scalar(w, resp.z1);
        }
        put_scalar(w, p.sum_z);
    }
}

UnitVectorProof decode_proof(codec::Reader& r) {
    UnitVectorProof p;
    std::uint8_t phase = r.u8();
    if (phase > 1) throw codec::DecodeError("bad proof phase");
    p.phase = static_cast<ProofPhase>(phase);
    std::uint32_t m = r.u32();
    p.announcements.resize(m);
    for (auto& a : p.announcements) {
        a.a0_g = get_elem(r);
        a.a0_h = get_elem(r);
        a.a1_g = get_elem(r);
        a.a1_h = get_elem(r);
    }
    p.sum_a_g = get_elem(r);
    p.sum_a_h = get_elem(r);
    if (p.phase == ProofPhase::kComplete) {
        p.challenge = get_scalar(r);
        std::uint32_t n = r.u32();
        p.responses.resize(n);
        for (auto& resp : p.responses) {
            resp.e0 = get_scalar(r);
            resp.z0 = get_scalar(r);
            resp.z1 = get_scalar(r);
        }
        p.sum_z = get_scalar(r);
    }
    return p;
}

}  // namespace agora::crypto
