#include "agora/commitment.hpp"

#include <stdexcept>

namespace agora::crypto {

bool OptionEncoding::is_unit_vector() const {
    std::size_t ones = 0;
    for (auto v : vec) {
        if (v == 1)
            ones++;
        else if (v != 0)
            return false;
    }
    return ones == 1;
}

OptionEncoding unit_vector(std::size_t m, std::size_t index) {
    if (index >= m) throw std::invalid_argument("unit_vector: index out of range");
    OptionEncoding e;
    e.vec.assign(m, 0);
    e.vec[index] = 1;
    return e;
}

VectorCommitment commit(const Group& g, const OptionEncoding& encoding,
                        std::span<const Scalar> randomizers) {
    if (encoding.vec.size() != randomizers.size())
        throw std::invalid_argument("commit: arity mismatch");
    VectorCommitment c;
    c.components.reserve(encoding.vec.size());
    for (std::size_t i = 0; i < encoding.vec.size(); i++) {
        Element a = g.exp_g(randomizers[i]);
        Element b = g.exp_h(randomizers[i]);
        if (encoding.vec[i] != 0)
            b = g.mul(b, g.exp_g(g.scalar_from_u64(encoding.vec[i])));
        c.components.emplace_back(std::move(a), std::move(b));
    }
    return c;
}

VectorCommitment combine(const Group& g, const VectorCommitment& c1, const VectorCommitment& c2) {
    if (c1.arity() != c2.arity()) throw std::invalid_argument("combine: arity mismatch");
    VectorCommitment out;
    out.components.reserve(c1.arity());
    for (std::size_t i = 0; i < c1.arity(); i++) {
        out.components.emplace_back(g.mul(c1.components[i].first, c2.components[i].first),
                                    g.mul(c1.components[i].second, c2.components[i].second));
    }
    return out;
}

Opening combine_openings(const Group& g, const Opening& o1, const Opening& o2) {
    if (o1.randomizers.size() != o2.randomizers.size())
        throw std::invalid_argument("combine_openings: arity mismatch");
    Opening out;
    if (o1.message.size() == o1.randomizers.size() && o2.message.size() == o2.randomizers.size()) {
        out.message.resize(o1.message.size());
        for (std::size_t i = 0; i < o1.message.size(); i++)
            out.message[i] = o1.message[i] + o2.message[i];
    }
    out.randomizers.resize(o1.randomizers.size());
    for (std::size_t i = 0; i < o1.randomizers.size(); i++)
        out.randomizers[i] = g.scalar_add(o1.randomizers[i], o2.randomizers[i]);
    return out;
}

OpenResult open_and_decode(const Group& g, const VectorCommitment& c, const Opening& o,
                           std::uint64_t max_tally) {
    OpenResult res;
    if (o.randomizers.size() != c.arity()) return res;  // inconsistent
    bool has_message = o.message.size() == c.arity();
    if (!has_message && !o.message.empty()) return res;

    res.encoding.vec.resize(c.arity());
    for (std::size_t i = 0; i < c.arity(); i++) {
        if (c.components[i].first != g.exp_g(o.randomizers[i])) return res;
        // lift the message term: B / h^r = g^v
        Element lifted = g.mul(c.components[i].second, g.inv(g.exp_h(o.randomizers[i])));
        if (has_message) {
            Element expect = o.message[i] == 0 ? g.identity()
                                               : g.exp_g(g.scalar_from_u64(o.message[i]));
            if (lifted != expect) return res;
            res.encoding.vec[i] = o.message[i];
        } else {
            auto v = g.dlog_g(lifted, max_tally);
            if (!v) {
                res.status = OpenStatus::kOverflow;
                return res;
            }
            res.encoding.vec[i] = *v;
        }
    }
    res.status = OpenStatus::kOk;
    return res;
}

void encode(codec::Writer& w, const VectorCommitment& c) {
    w.u32(static_cast<std::uint32_t>(c.arity()));
    for (const auto& [a, b] : c.components) {
        w.bytes(a.b);
        w.bytes(b.b);
    }
}

VectorCommitment decode_commitment(codec::Reader& r) {
    VectorCommitment c;
    std::uint32_t n = r.u32();
    c.components.reserve(n);
    for (std::uint32_t i = 0; i < n; i++) {
        Element a{r.bytes()}, b{r.bytes()};
        c.components.emplace_back(std::move(a), std::move(b));
    }
    return c;
}

void encode(codec::Writer& w, const Opening& o) {
    w.u32(static_cast<std::uint32_t>(o.message.size()));
    for (auto v : o.message) w.u64(v);
    w.u32(static_cast<std::uint32_t>(o.randomizers.size()));
    for (const auto& s : o.randomizers) w.raw(s.b);
}

Opening decode_opening(codec::Reader& r) {
    Opening o;
    std::uint32_t nm = r.u32();
    o.message.reserve(nm);
    for (std::uint32_t i = 0; i < nm; i++) o.message.push_back(r.u64());
    std::uint32_t nr = r.u32();
    o.randomizers.resize(nr);
    for (std::uint32_t i = 0; i < nr; i++) {
        auto raw = r.raw(32);
        std::copy(raw.begin(), raw.end(), o.randomizers[i].b.begin());
    }
    return o;
}

}  // namespace agora::crypto
