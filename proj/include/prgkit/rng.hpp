#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "prgkit/bits.hpp"

namespace prgkit {

// Harness randomness. This PRNG drives measurements and test-instance
// generation only; it is never the randomness of a generator under test.
// All draws go through the helpers below (std::uniform_int_distribution is
// implementation-defined, so we avoid it to keep runs reproducible anywhere).
class harness_rng {
public:
    explicit harness_rng(std::uint64_t s) : engine_(s), seed_value_(s) {}

    std::uint64_t seed_value() const { return seed_value_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, bound) by rejection; bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t mask = ~std::uint64_t{0};
        int bits = 64 - __builtin_clzll(bound - 1);
        mask = bits == 64 ? mask : ((std::uint64_t{1} << bits) - 1);
        for (;;) {
            std::uint64_t v = engine_() & mask;
            if (v < bound) return v;
        }
    }

    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double next_unit() {  // [0,1) with 53 random bits
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double next_gaussian() {  // Box-Muller, fresh pair each call pair
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    seed next_seed(std::size_t length_bits) {
        seed s(length_bits);
        for (std::size_t pos = 0; pos < length_bits; pos += 64) {
            std::size_t chunk = std::min<std::size_t>(64, length_bits - pos);
            s.set_bits(pos, chunk, engine_());
        }
        return s;
    }

    std::vector<std::int8_t> next_signs(std::size_t n) {
        std::vector<std::int8_t> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = (engine_() & 1) ? 1 : -1;
        return x;
    }

    // Independent child stream; used to fan measurement out over chunks so
    // results do not depend on the thread count.
    harness_rng child(std::uint64_t index) const {
        // splitmix64 over (seed, index) for decorrelated child seeds
        std::uint64_t z = seed_value_ + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return harness_rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_value_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace prgkit
