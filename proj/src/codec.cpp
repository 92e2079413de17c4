#include "agora/codec.hpp"

namespace agora::codec {

void Writer::u16(std::uint16_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v >> 8));
    buf_.push_back(static_cast<std::uint8_t>(v));
}

void Writer::u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
}

void Writer::u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
}

void Writer::bytes(std::span<const std::uint8_t> b) {
    u32(static_cast<std::uint32_t>(b.size()));
    raw(b);
}

void Writer::str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
}

void Reader::need(std::size_t n) const {
    if (buf_.size() - pos_ < n) throw DecodeError("truncated input");
}

std::uint8_t Reader::u8() {
    need(1);
    return buf_[pos_++];
}

std::uint16_t Reader::u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>((buf_[pos_] << 8) | buf_[pos_ + 1]);
    pos_ += 2;
    return v;
}

std::uint32_t Reader::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; i++) v = (v << 8) | buf_[pos_ + i];
    pos_ += 4;
    return v;
}

std::uint64_t Reader::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; i++) v = (v << 8) | buf_[pos_ + i];
    pos_ += 8;
    return v;
}

Bytes Reader::raw(std::size_t n) {
    need(n);
    Bytes out(buf_.begin() + pos_, buf_.begin() + pos_ + n);
    pos_ += n;
    return out;
}

Bytes Reader::bytes() {
    std::uint32_t n = u32();
    return raw(n);
}

std::string Reader::str() {
    std::uint32_t n = u32();
    need(n);
    std::string out(buf_.begin() + pos_, buf_.begin() + pos_ + n);
    pos_ += n;
    return out;
}

void Reader::expect_done() const {
    if (!done()) throw DecodeError("trailing bytes");
}

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(std::span<const std::uint8_t> b) {
    std::string out;
    out.reserve(b.size() * 2);
    for (std::uint8_t c : b) {
        out.push_back(kHexDigits[c >> 4]);
        out.push_back(kHexDigits[c & 0xf]);
    }
    return out;
}

static int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::optional<Bytes> from_hex(std::string_view s) {
    if (s.size() % 2 != 0) return std::nullopt;
    Bytes out;
    out.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); i += 2) {
        int hi = hex_val(s[i]), lo = hex_val(s[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

Bytes from_hex_strict(std::string_view s) {
    auto b = from_hex(s);
    if (!b) throw DecodeError("bad hex string");
    return std::move(*b);
}

}  // namespace agora::codec
