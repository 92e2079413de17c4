#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <cstring>
#include <stdexcept>

#include "agora/group.hpp"
#include "agora/hash.hpp"

namespace agora::crypto {
namespace {

struct BnCtxFree {
    void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};
struct BnFree {
    void operator()(BIGNUM* b) const { BN_free(b); }
};
struct PointFree {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct GroupFree {
    void operator()(EC_GROUP* g) const { EC_GROUP_free(g); }
};

using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxFree>;
using BnPtr = std::unique_ptr<BIGNUM, BnFree>;
using PointPtr = std::unique_ptr<EC_POINT, PointFree>;
using GroupPtr = std::unique_ptr<EC_GROUP, GroupFree>;

BN_CTX* tls_ctx() {
    thread_local BnCtxPtr ctx(BN_CTX_new());
    return ctx.get();
}

[[noreturn]] void fail(const char* what) { throw std::runtime_error(std::string("p256: ") + what); }

BnPtr scalar_to_bn(const Scalar& s) {
    BnPtr b(BN_bin2bn(s.b.data(), static_cast<int>(s.b.size()), nullptr));
    if (!b) fail("scalar decode");
    return b;
}

Scalar bn_to_scalar(const BIGNUM* b) {
    Scalar s;
    if (BN_bn2binpad(b, s.b.data(), static_cast<int>(s.b.size())) < 0) fail("scalar encode");
    return s;
}

class P256Group final : public Group {
public:
    P256Group() {
        grp_.reset(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1));
        if (!grp_) fail("curve init");
        order_.reset(BN_new());
        if (EC_GROUP_get_order(grp_.get(), order_.get(), tls_ctx()) != 1) fail("order");
        derive_h();
        // second group instance whose "generator" is h, so fixed-base
        // precomputation speeds up both exp_g and exp_h
        grp_h_.reset(EC_GROUP_dup(grp_.get()));
        if (EC_GROUP_set_generator(grp_h_.get(), h_pt_.get(), order_.get(), BN_value_one()) != 1)
            fail("set h generator");
        g_enc_ = encode(EC_GROUP_get0_generator(grp_.get()));
        h_enc_ = encode(h_pt_.get());
    }

    std::string name() const override { return "p256"; }

    Scalar scalar_from_u64(std::uint64_t v) const override {
        Scalar s;
        for (int i = 0; i < 8; i++) s.b[31 - i] = static_cast<std::uint8_t>(v >> (8 * i));
        return s;  // always < order
    }

    Scalar scalar_from_bytes(std::span<const std::uint8_t> wide) const override {
        BnPtr tmp(BN_bin2bn(wide.data(), static_cast<int>(wide.size()), nullptr));
        BnPtr r(BN_new());
        if (!tmp || !r || BN_mod(r.get(), tmp.get(), order_.get(), tls_ctx()) != 1)
            fail("scalar reduce");
        return bn_to_scalar(r.get());
    }

    Scalar scalar_add(const Scalar& a, const Scalar& b) const override {
        return scalar_op(a, b, [this](BIGNUM* r, const BIGNUM* x, const BIGNUM* y, BN_CTX* c) {
            return BN_mod_add(r, x, y, order_.get(), c);
        });
    }
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const override {
        return scalar_op(a, b, [this](BIGNUM* r, const BIGNUM* x, const BIGNUM* y, BN_CTX* c) {
            return BN_mod_sub(r, x, y, order_.get(), c);
        });
    }
    Scalar scalar_mul(const Scalar& a, const Scalar& b) const override {
        return scalar_op(a, b, [this](BIGNUM* r, const BIGNUM* x, const BIGNUM* y, BN_CTX* c) {
            return BN_mod_mul(r, x, y, order_.get(), c);
        });
    }
    Scalar scalar_neg(const Scalar& a) const override {
        return scalar_sub(scalar_from_u64(0), a);
    }
    Scalar scalar_inv(const Scalar& a) const override {
        BnPtr x = scalar_to_bn(a);
        if (BN_is_zero(x.get())) throw std::invalid_argument("p256: inverse of zero");
        BnPtr r(BN_mod_inverse(nullptr, x.get(), order_.get(), tls_ctx()));
        if (!r) fail("inverse");
        return bn_to_scalar(r.get());
    }

    Element identity() const override {
        return Element{codec::Bytes{0x00}};
    }
    Element g() const override { return g_enc_; }
    Element h() const override { return h_enc_; }

    Element mul(const Element& a, const Element& b) const override {
        PointPtr pa = decode(a), pb = decode(b), r = new_point();
        if (EC_POINT_add(grp_.get(), r.get(), pa.get(), pb.get(), tls_ctx()) != 1) fail("add");
        return encode(r.get());
    }

    Element inv(const Element& a) const override {
        PointPtr p = decode(a);
        if (EC_POINT_invert(grp_.get(), p.get(), tls_ctx()) != 1) fail("invert");
        return encode(p.get());
    }

    Element exp(const Element& base, const Scalar& s) const override {
        PointPtr p = decode(base), r = new_point();
        BnPtr k = scalar_to_bn(s);
        if (EC_POINT_mul(grp_.get(), r.get(), nullptr, p.get(), k.get(), tls_ctx()) != 1)
            fail("mul");
        return encode(r.get());
    }

    Element exp_g(const Scalar& s) const override { return fixed_mul(grp_.get(), s); }
    Element exp_h(const Scalar& s) const override { return fixed_mul(grp_h_.get(), s); }

    Element mul_exp(const Element& a, const Element& b, const Scalar& s) const override {
        PointPtr pa = decode(a), pb = decode(b), r = new_point();
        BnPtr k = scalar_to_bn(s);
        if (EC_POINT_mul(grp_.get(), r.get(), nullptr, pb.get(), k.get(), tls_ctx()) != 1)
            fail("mul");
        if (EC_POINT_add(grp_.get(), r.get(), r.get(), pa.get(), tls_ctx()) != 1) fail("add");
        return encode(r.get());
    }

    bool is_valid(const Element& a) const override {
        if (a.b.size() == 1 && a.b[0] == 0x00) return true;
        if (a.b.size() != 65 || a.b[0] != 0x04) return false;
        PointPtr p = new_point();
        return EC_POINT_oct2point(grp_.get(), p.get(), a.b.data(), a.b.size(), tls_ctx()) == 1;
    }

private:
    template <typename Op>
    Scalar scalar_op(const Scalar& a, const Scalar& b, Op op) const {
        BnPtr x = scalar_to_bn(a), y = scalar_to_bn(b), r(BN_new());
        if (!r || op(r.get(), x.get(), y.get(), tls_ctx()) != 1) fail("scalar op");
        return bn_to_scalar(r.get());
    }

    PointPtr new_point() const {
        PointPtr p(EC_POINT_new(grp_.get()));
        if (!p) fail("point alloc");
        return p;
    }

    PointPtr decode(const Element& e) const {
        PointPtr p = new_point();
        if (e.b.size() == 1 && e.b[0] == 0x00) {
            if (EC_POINT_set_to_infinity(grp_.get(), p.get()) != 1) fail("infinity");
            return p;
        }
        if (EC_POINT_oct2point(grp_.get(), p.get(), e.b.data(), e.b.size(), tls_ctx()) != 1)
            fail("bad element encoding");
        return p;
    }

    Element encode(const EC_POINT* p) const {
        if (EC_POINT_is_at_infinity(grp_.get(), p)) return identity();
        Element e;
        e.b.resize(65);
        if (EC_POINT_point2oct(grp_.get(), p, POINT_CONVERSION_UNCOMPRESSED, e.b.data(), 65,
                               tls_ctx()) != 65)
            fail("point encode");
        return e;
    }

    Element fixed_mul(const EC_GROUP* grp, const Scalar& s) const {
        PointPtr r(EC_POINT_new(grp));
        BnPtr k = scalar_to_bn(s);
        if (!r || EC_POINT_mul(grp, r.get(), k.get(), nullptr, nullptr, tls_ctx()) != 1)
            fail("fixed mul");
        // encodings are curve-level, identical for both group instances
        if (EC_POINT_is_at_infinity(grp, r.get())) return identity();
        Element e;
        e.b.resize(65);
        if (EC_POINT_point2oct(grp, r.get(), POINT_CONVERSION_UNCOMPRESSED, e.b.data(), 65,
                               tls_ctx()) != 65)
            fail("point encode");
        return e;
    }

    // try-and-increment over SHA256 outputs; deterministic, no secret trapdoor
    void derive_h() {
        BnPtr x(BN_new());
        h_pt_.reset(EC_POINT_new(grp_.get()));
        if (!x || !h_pt_) fail("h alloc");
        for (std::uint64_t ctr = 0;; ctr++) {
            codec::Writer w;
            w.str("agora-p256-h");
            w.u64(ctr);
            Digest d = sha256(w.data());
            if (!BN_bin2bn(d.data(), static_cast<int>(d.size()), x.get())) fail("h derive");
            if (EC_POINT_set_compressed_coordinates(grp_.get(), h_pt_.get(), x.get(), 0,
                                                    tls_ctx()) == 1)
                return;
        }
    }

    GroupPtr grp_;
    GroupPtr grp_h_;
    BnPtr order_;
    PointPtr h_pt_;
    Element g_enc_;
    Element h_enc_;
};

}  // namespace

std::shared_ptr<const Group> make_toy64_group();

std::shared_ptr<const Group> make_group(std::string_view name) {
    if (name == "p256") {
        static std::shared_ptr<const Group> g = std::make_shared<P256Group>();
        return g;
    }
    if (name == "toy64") {
        static std::shared_ptr<const Group> g = make_toy64_group();
        return g;
    }
    throw std::invalid_argument("unknown group: " + std::string(name));
}

}  // namespace agora::crypto
