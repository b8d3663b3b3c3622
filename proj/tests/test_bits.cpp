#include <catch2/catch_amalgamated.hpp>

#include "prgkit/bits.hpp"
#include "prgkit/rng.hpp"

using namespace prgkit;

TEST_CASE("bit fields round-trip through set/get") {
    seed s(130);
    s.set_bits(0, 7, 0x5a);
    s.set_bits(60, 10, 0x3ff);
    s.set_bits(120, 10, 0x2aa);
    REQUIRE(s.get_bits(0, 7) == 0x5a);
    REQUIRE(s.get_bits(60, 10) == 0x3ff);
    REQUIRE(s.get_bits(120, 10) == 0x2aa);
    REQUIRE(s.get_bits(7, 53) == 0);
}

TEST_CASE("bit_reader consumes fields in order") {
    seed s(40);
    s.set_bits(0, 12, 0xabc);
    s.set_bits(12, 12, 0x123);
    s.set_bits(24, 16, 0xbeef);
    bit_reader r(s);
    REQUIRE(r.take(12) == 0xabc);
    REQUIRE(r.take(12) == 0x123);
    REQUIRE(r.take(16) == 0xbeef);
    REQUIRE(r.remaining() == 0);
}

TEST_CASE("hex round-trip") {
    harness_rng rng(7);
    for (std::size_t len : {1, 4, 5, 63, 64, 65, 130}) {
        seed s = rng.next_seed(len);
        REQUIRE(seed::from_hex(len, s.to_hex()) == s);
    }
    REQUIRE_THROWS_AS(seed::from_hex(8, "zz"), format_error);
    REQUIRE_THROWS_AS(seed::from_hex(4, "zz"), argument_error);
}

TEST_CASE("take_seed extracts a contiguous window") {
    harness_rng rng(11);
    seed s = rng.next_seed(200);
    bit_reader r(s);
    seed a = r.take_seed(70);
    seed b = r.take_seed(130);
    for (std::size_t i = 0; i < 70; ++i) REQUIRE(a.bit(i) == s.bit(i));
    for (std::size_t i = 0; i < 130; ++i) REQUIRE(b.bit(i) == s.bit(70 + i));
}

TEST_CASE("harness rng streams are reproducible and chunk-splittable") {
    harness_rng a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());
    harness_rng c = harness_rng(42).child(3);
    harness_rng d = harness_rng(42).child(3);
    REQUIRE(c.next_u64() == d.next_u64());
    REQUIRE(harness_rng(42).child(3).next_u64() != harness_rng(42).child(4).next_u64());
}
