#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agora::codec {

using Bytes = std::vector<std::uint8_t>;

// Canonical byte layout used for everything that is signed, hashed or
// written to disk: big-endian integers, u32 length prefixes, fixed field
// order. No floating point.
class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void raw(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
    // length-prefixed byte string
    void bytes(std::span<const std::uint8_t> b);
    void str(std::string_view s);

    const Bytes& data() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

class DecodeError : public std::runtime_error {
public:
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> b) : buf_(b) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    Bytes raw(std::size_t n);
    Bytes bytes();
    std::string str();

    bool done() const { return pos_ == buf_.size(); }
    std::size_t remaining() const { return buf_.size() - pos_; }
    void expect_done() const;

private:
    void need(std::size_t n) const;
    std::span<const std::uint8_t> buf_;
    std::size_t pos_ = 0;
};

std::string to_hex(std::span<const std::uint8_t> b);
std::optional<Bytes> from_hex(std::string_view s);

// from_hex that throws DecodeError, for parsing trusted-format artifacts
Bytes from_hex_strict(std::string_view s);

}  // namespace agora::codec
