#include "agora/symmetric.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace agora::crypto {

HashCommitment hash_commit(std::span<const std::uint8_t> value, std::uint64_t salt) {
    codec::Writer w;
    w.bytes(value);
    w.u64(salt);
    return HashCommitment{sha256(w.data()), salt};
}

bool hash_commit_matches(const HashCommitment& c, std::span<const std::uint8_t> value) {
    return hash_commit(value, c.salt).digest == c.digest;
}

namespace {
struct CipherCtxFree {
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;
constexpr std::size_t kIvLen = 16;
constexpr std::size_t kKeyLen = 16;
}  // namespace

codec::Bytes enc_vote_code(std::span<const std::uint8_t> code, std::span<const std::uint8_t> key,
                           rng::Prng& rng) {
    if (key.size() != kKeyLen) throw std::invalid_argument("enc_vote_code: key must be 128-bit");
    codec::Bytes out(kIvLen);
    rng.fill(out);

    CtxPtr ctx(EVP_CIPHER_CTX_new());
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_cbc(), nullptr, key.data(),
                                   out.data()) != 1)
        throw std::runtime_error("aes init failed");
    codec::Bytes ct(code.size() + kIvLen);
    int n1 = 0, n2 = 0;
    if (EVP_EncryptUpdate(ctx.get(), ct.data(), &n1, code.data(),
                          static_cast<int>(code.size())) != 1 ||
        EVP_EncryptFinal_ex(ctx.get(), ct.data() + n1, &n2) != 1)
        throw std::runtime_error("aes encrypt failed");
    ct.resize(static_cast<std::size_t>(n1 + n2));
    out.insert(out.end(), ct.begin(), ct.end());
    return out;
}

std::optional<codec::Bytes> dec_vote_code(std::span<const std::uint8_t> ct,
                                          std::span<const std::uint8_t> key) {
    if (key.size() != kKeyLen) throw std::invalid_argument("dec_vote_code: key must be 128-bit");
    if (ct.size() < kIvLen + kIvLen) return std::nullopt;  // IV plus one block minimum

    CtxPtr ctx(EVP_CIPHER_CTX_new());
    if (!ctx || EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_cbc(), nullptr, key.data(),
                                   ct.data()) != 1)
        throw std::runtime_error("aes init failed");
    codec::Bytes pt(ct.size());
    int n1 = 0, n2 = 0;
    if (EVP_DecryptUpdate(ctx.get(), pt.data(), &n1, ct.data() + kIvLen,
                          static_cast<int>(ct.size() - kIvLen)) != 1)
        return std::nullopt;
    if (EVP_DecryptFinal_ex(ctx.get(), pt.data() + n1, &n2) != 1) return std::nullopt;
    pt.resize(static_cast<std::size_t>(n1 + n2));
    return pt;
}

}  // namespace agora::crypto
