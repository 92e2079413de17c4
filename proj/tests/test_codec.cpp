#include "agora/codec.hpp"

#include "doctest.h"

using namespace agora::codec;

TEST_CASE("writer emits big-endian") {
    Writer w;
    w.u16(0x0102);
    w.u32(0x03040506);
    w.u64(0x0708090a0b0c0d0eULL);
    Bytes expect = {1, 2, 3, 4, 5, 6, 7, 8, 9, 0xa, 0xb, 0xc, 0xd, 0xe};
    CHECK(w.data() == expect);
}

TEST_CASE("round trip") {
    Writer w;
    w.u8(7);
    w.u64(123456789);
    w.str("hello");
    w.bytes(Bytes{9, 8, 7});
    Reader r(w.data());
    CHECK(r.u8() == 7);
    CHECK(r.u64() == 123456789);
    CHECK(r.str() == "hello");
    CHECK(r.bytes() == Bytes{9, 8, 7});
    CHECK(r.done());
}

TEST_CASE("reader rejects truncation and trailing bytes") {
    Writer w;
    w.u32(42);
    Reader r1(w.data());
    CHECK_THROWS_AS(r1.u64(), DecodeError);
    Reader r2(w.data());
    r2.u16();
    CHECK_THROWS_AS(r2.expect_done(), DecodeError);
}

TEST_CASE("hex") {
    Bytes b = {0x00, 0xff, 0x1a};
    CHECK(to_hex(b) == "00ff1a");
    CHECK(from_hex("00ff1a") == b);
    CHECK(from_hex("00FF1A") == b);
    CHECK_FALSE(from_hex("0g").has_value());
    CHECK_FALSE(from_hex("abc").has_value());
}
