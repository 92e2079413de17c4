#include "agora/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace agora::crypto {

Digest sha256(std::span<const std::uint8_t> data) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("sha256 failed");
    }
    return out;
}

Digest sha256(const codec::Writer& w) { return sha256(w.data()); }

Digest tagged_hash(std::string_view tag, std::span<const std::uint8_t> data) {
    codec::Writer w;
    w.str(tag);
    w.bytes(data);
    return sha256(w.data());
}

}  // namespace agora::crypto
