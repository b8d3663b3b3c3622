#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "prgkit/gf2.hpp"

using namespace prgkit;

namespace {

// Reference multiplication: schoolbook polynomial product, then long
// division by x^w + low. Independent of the xtimes-based path in gf2_field.
std::uint64_t ref_mul(int w, std::uint64_t low, std::uint64_t a, std::uint64_t b) {
    // product fits in 2w-1 <= 127 bits
    unsigned __int128 prod = 0;
    for (int i = 0; i < w; ++i)
        if ((b >> i) & 1) prod ^= static_cast<unsigned __int128>(a) << i;
    unsigned __int128 mod = (static_cast<unsigned __int128>(1) << w) ^ low;
    for (int d = 2 * w - 2; d >= w; --d)
        if ((prod >> d) & 1) prod ^= mod << (d - w);
    return static_cast<std::uint64_t>(prod);
}

}  // namespace

TEST_CASE("chosen moduli are irreducible and minimal") {
    for (int w : {1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 15, 16, 17, 24, 31, 32, 52, 63, 64}) {
        gf2_field f(w);
        std::uint64_t low = f.modulus_low_terms();
        REQUIRE(gf2_field::is_irreducible(w, low));
        for (std::uint64_t cand = 1; cand < low; cand += 2)
            REQUIRE_FALSE(gf2_field::is_irreducible(w, cand));
    }
}

TEST_CASE("irreducibility test rejects known composites") {
    // x^4 + x^2 + 1 = (x^2+x+1)^2, x^3 + x^2 + x + 1 = (x+1)(x^2+1)
    REQUIRE_FALSE(gf2_field::is_irreducible(4, 0b0101));
    REQUIRE_FALSE(gf2_field::is_irreducible(3, 0b111));
    // x^6 + x^5 + x^4 + x^3 + x^2 + x + 1 = (x^3+x+1)(x^3+x^2+1)
    REQUIRE_FALSE(gf2_field::is_irreducible(6, 0b111111));
    REQUIRE(gf2_field::is_irreducible(8, 0x1b));  // AES modulus
}

TEST_CASE("multiplication matches reference on small and wide fields") {
    for (int w : {1, 2, 3, 4, 8, 11, 16, 17, 29, 52, 63, 64}) {
        gf2_field f(w);
        std::uint64_t mask = f.element_mask();
        std::uint64_t x = 0x243f6a8885a308d3ULL, y = 0x13198a2e03707344ULL;
        for (int i = 0; i < 200; ++i) {
            x = x * 6364136223846793005ULL + 1442695040888963407ULL;
            y = y * 6364136223846793005ULL + 1442695040888963407ULL;
            std::uint64_t a = x & mask, b = y & mask;
            REQUIRE(f.mul(a, b) == ref_mul(w, f.modulus_low_terms(), a, b));
        }
        REQUIRE(f.mul(0, mask) == 0);
        REQUIRE(f.mul(1, mask) == mask);
    }
}

TEST_CASE("field axioms hold exhaustively in GF(2^4)") {
    gf2_field f(4);
    for (std::uint64_t a = 0; a < 16; ++a) {
        for (std::uint64_t b = 0; b < 16; ++b) {
            REQUIRE(f.mul(a, b) == f.mul(b, a));
            for (std::uint64_t c = 0; c < 16; ++c) {
                REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                REQUIRE(f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c)));
            }
        }
    }
    // nonzero elements form a group: a*. is a bijection
    for (std::uint64_t a = 1; a < 16; ++a) {
        std::set<std::uint64_t> image;
        for (std::uint64_t b = 0; b < 16; ++b) image.insert(f.mul(a, b));
        REQUIRE(image.size() == 16);
    }
}

TEST_CASE("pow agrees with iterated multiplication") {
    gf2_field f(8);
    for (std::uint64_t a : {1ULL, 2ULL, 7ULL, 0x53ULL, 0xffULL}) {
        std::uint64_t acc = 1;
        for (int e = 0; e < 20; ++e) {
            REQUIRE(f.pow(a, e) == acc);
            acc = f.mul(acc, a);
        }
    }
    REQUIRE(f.pow(0, 0) == 1);
    REQUIRE(f.pow(0, 5) == 0);
}

TEST_CASE("multiplicative order divides group order") {
    gf2_field f(6);
    for (std::uint64_t a = 1; a < 64; ++a) REQUIRE(f.pow(a, 63) == 1);
}
