#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdint>
#include <vector>

#include "prgkit/sign_space.hpp"

using namespace prgkit;

namespace {

// Enumerates every seed of a space (seed length <= 62) and counts the sign
// pattern on the coordinate subset `idx`. Counting is the oracle: marginal
// uniformity claims reduce to integer equalities on these counts.
std::vector<std::uint64_t> marginal_counts(const sign_space& sp,
                                           const std::vector<int>& idx) {
    REQUIRE(sp.seed_length() <= 62);
    std::vector<std::uint64_t> counts(std::size_t{1} << idx.size(), 0);
    std::uint64_t total = std::uint64_t{1} << sp.seed_length();
    std::vector<std::int8_t> x(sp.dimension());
    for (std::uint64_t v = 0; v < total; ++v) {
        sp.sample_into(seed::from_uint(sp.seed_length(), v), x.data());
        std::size_t pat = 0;
        for (std::size_t i = 0; i < idx.size(); ++i)
            if (x[idx[i]] < 0) pat |= std::size_t{1} << i;
        ++counts[pat];
    }
    return counts;
}

// One enumeration pass over all seeds, counting patterns for several
// coordinate subsets at once.
std::vector<std::vector<std::uint64_t>> marginal_counts_multi(
    const sign_space& sp, const std::vector<std::vector<int>>& subsets) {
    REQUIRE(sp.seed_length() <= 62);
    std::vector<std::vector<std::uint64_t>> counts;
    for (const auto& idx : subsets) counts.emplace_back(std::size_t{1} << idx.size(), 0);
    std::uint64_t total = std::uint64_t{1} << sp.seed_length();
    std::vector<std::int8_t> x(sp.dimension());
    for (std::uint64_t v = 0; v < total; ++v) {
        sp.sample_into(seed::from_uint(sp.seed_length(), v), x.data());
        for (std::size_t s = 0; s < subsets.size(); ++s) {
            std::size_t pat = 0;
            for (std::size_t i = 0; i < subsets[s].size(); ++i)
                if (x[subsets[s][i]] < 0) pat |= std::size_t{1} << i;
            ++counts[s][pat];
        }
    }
    return counts;
}

// Exact marginals of a small-bias space, counted over the full (a, b) seed
// space. The b half is integrated exactly: the output bit vector is checked
// to be linear in b, a basis of b-probes determines the linear map per a,
// and every value of the map is hit by exactly 2^(w - rank) choices of b.
// The result equals what plain enumeration of all 2^(2w) seeds would return.
std::vector<std::vector<std::uint64_t>> small_bias_marginal_counts(
    const sign_space& sp, const std::vector<std::vector<int>>& subsets) {
    REQUIRE(sp.kind() == sign_space_kind::small_bias);
    int w = sp.field_width();
    int m = sp.dimension();
    REQUIRE(w <= 26);
    REQUIRE(m <= 64);
    std::vector<std::vector<std::uint64_t>> counts;
    for (const auto& idx : subsets) counts.emplace_back(std::size_t{1} << idx.size(), 0);
    std::vector<std::int8_t> x(m);
    auto bits_for = [&](std::uint64_t a, std::uint64_t b) {
        seed s(sp.seed_length());
        s.set_bits(0, w, a);
        s.set_bits(w, w, b);
        sp.sample_into(s, x.data());
        std::uint64_t bits = 0;
        for (int i = 0; i < m; ++i)
            if (x[i] < 0) bits |= std::uint64_t{1} << i;
        return bits;
    };
    std::vector<std::uint64_t> basis_img(w);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << w); ++a) {
        REQUIRE(bits_for(a, 0) == 0);  // linear in b, no affine part
        for (int bit = 0; bit < w; ++bit)
            basis_img[bit] = bits_for(a, std::uint64_t{1} << bit);
        if (a < 4) {
            // spot-check linearity itself on a few probes
            REQUIRE(bits_for(a, 0b11) == (basis_img[0] ^ basis_img[1]));
            REQUIRE(bits_for(a, 0b101) == (basis_img[0] ^ basis_img[2]));
        }
        for (std::size_t s = 0; s < subsets.size(); ++s) {
            const auto& idx = subsets[s];
            // project the basis images onto the subset, then row-reduce
            std::vector<std::uint64_t> proj;
            for (int bit = 0; bit < w; ++bit) {
                std::uint64_t p = 0;
                for (std::size_t i = 0; i < idx.size(); ++i)
                    if ((basis_img[bit] >> idx[i]) & 1) p |= std::uint64_t{1} << i;
                proj.push_back(p);
            }
            std::vector<std::uint64_t> pivots;
            for (std::uint64_t v : proj) {
                for (std::uint64_t p : pivots) v = std::min(v, v ^ p);
                if (v) pivots.push_back(v);
            }
            std::uint64_t per_pattern = std::uint64_t{1} << (w - pivots.size());
            std::vector<std::uint64_t> span{0};
            for (std::uint64_t p : pivots) {
                std::size_t sz = span.size();
                for (std::size_t i = 0; i < sz; ++i) span.push_back(span[i] ^ p);
            }
            for (std::uint64_t pat : span) counts[s][pat] += per_pattern;
        }
    }
    return counts;
}

}  // namespace

TEST_CASE("every coordinate of the exact space is unbiased") {
    sign_space sp = sign_space::exact_kwise(8, 4);
    for (int i = 0; i < 8; ++i) {
        auto c = marginal_counts(sp, {i});
        REQUIRE(c[0] == c[1]);
    }
}

TEST_CASE("m=8 k=4: every 4-subset sees all 16 patterns equally often") {
    sign_space sp = sign_space::exact_kwise(8, 4);
    REQUIRE(sp.seed_length() == 4 * 3);
    std::uint64_t expect = (std::uint64_t{1} << sp.seed_length()) / 16;
    for (int a = 0; a < 8; ++a)
        for (int b = a + 1; b < 8; ++b)
            for (int c = b + 1; c < 8; ++c)
                for (int d = c + 1; d < 8; ++d) {
                    auto counts = marginal_counts(sp, {a, b, c, d});
                    for (std::uint64_t cnt : counts) REQUIRE(cnt == expect);
                }
}

TEST_CASE("m=8 k=4: products of up to 4 coordinates have mean exactly zero") {
    sign_space sp = sign_space::exact_kwise(8, 4);
    std::uint64_t total = std::uint64_t{1} << sp.seed_length();
    std::vector<std::int8_t> x(8);
    for (std::uint64_t mask = 1; mask < 256; ++mask) {
        if (__builtin_popcountll(mask) > 4) continue;
        std::int64_t sum = 0;
        for (std::uint64_t v = 0; v < total; ++v) {
            sp.sample_into(seed::from_uint(sp.seed_length(), v), x.data());
            int prod = 1;
            for (int i = 0; i < 8; ++i)
                if ((mask >> i) & 1) prod *= x[i];
            sum += prod;
        }
        REQUIRE(sum == 0);
    }
}

TEST_CASE("wrong seed length is rejected") {
    sign_space sp = sign_space::exact_kwise(8, 4);
    REQUIRE_THROWS_AS(sp.sample(seed(11)), argument_error);
    REQUIRE_THROWS_AS(sp.sample(seed(13)), argument_error);
}

TEST_CASE("delta = 0 degenerates to the exact construction") {
    sign_space sp = sign_space::almost_kwise(8, 6, 0.0);
    REQUIRE(sp.kind() == sign_space_kind::almost_kwise);
    REQUIRE(sp.exact_factor() == nullptr);
    // all 6-subsets exactly uniform
    std::uint64_t expect = (std::uint64_t{1} << sp.seed_length()) / 64;
    auto counts = marginal_counts(sp, {0, 2, 3, 5, 6, 7});
    for (std::uint64_t cnt : counts) REQUIRE(cnt == expect);
}

TEST_CASE("seed length follows the documented closed forms") {
    // exact: min(k, m) * ceil(log2 m)
    REQUIRE(sign_space::exact_kwise(8, 4).seed_length() == 12);
    REQUIRE(sign_space::exact_kwise(16, 8).seed_length() == 32);
    REQUIRE(sign_space::exact_kwise(4, 72).seed_length() == 8);  // order capped at m
    // product: exact-4 part + 2 * bias field width
    sign_space sp = sign_space::almost_kwise(16, 6, std::ldexp(1.0, -8));
    REQUIRE(sp.exact_factor() != nullptr);
    REQUIRE(sp.bias_factor() != nullptr);
    REQUIRE(sp.seed_length() ==
            sp.exact_factor()->seed_length() + sp.bias_factor()->seed_length());
    REQUIRE(sp.exact_factor()->seed_length() == 16);
    // bias target 2^-8 * 2^-3; field must cover (m-1)/target
    REQUIRE(sp.bias_factor()->bias_bound() <= std::ldexp(1.0, -8) * std::ldexp(1.0, -3));
}

TEST_CASE("small-bias space: every parity bias is within the reported bound") {
    sign_space sp = sign_space::small_bias(8, 0.25);
    int w = sp.field_width();
    std::uint64_t total = std::uint64_t{1} << sp.seed_length();
    std::vector<std::int8_t> x(8);
    for (std::uint64_t mask = 1; mask < 256; ++mask) {
        std::int64_t sum = 0;
        for (std::uint64_t v = 0; v < total; ++v) {
            sp.sample_into(seed::from_uint(sp.seed_length(), v), x.data());
            int prod = 1;
            for (int i = 0; i < 8; ++i)
                if ((mask >> i) & 1) prod *= x[i];
            sum += prod;
        }
        double bias = static_cast<double>(sum) / static_cast<double>(total);
        REQUIRE(std::abs(bias) <= sp.bias_bound() + 1e-15);
    }
    REQUIRE(w >= 5);  // (m-1)/0.25 = 28 needs 2^w >= 28
}

TEST_CASE("m=16 k=6 delta=2^-8: 6-marginals are within delta of uniform in L1") {
    const int m = 16, k = 6;
    const double delta = std::ldexp(1.0, -8);
    sign_space sp = sign_space::almost_kwise(m, k, delta);
    const sign_space& ex = *sp.exact_factor();
    const sign_space& sb = *sp.bias_factor();

    // deterministic set of 100 distinct 6-subsets
    std::vector<std::vector<int>> subsets;
    std::uint64_t lcg = 0x9e3779b97f4a7c15ULL;
    while (subsets.size() < 100) {
        std::uint64_t mask = 0;
        while (__builtin_popcountll(mask) < k) {
            lcg = lcg * 6364136223846793005ULL + 1442695040888963407ULL;
            mask |= std::uint64_t{1} << ((lcg >> 33) % m);
        }
        std::vector<int> idx;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1) idx.push_back(i);
        if (std::find(subsets.begin(), subsets.end(), idx) == subsets.end())
            subsets.push_back(idx);
    }

    auto ex_all = marginal_counts_multi(ex, subsets);        // over 2^16 seeds
    auto sb_all = small_bias_marginal_counts(sb, subsets);   // over 2^(2w) seeds
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        const auto& ex_counts = ex_all[s];
        const auto& sb_counts = sb_all[s];
        // product space: XOR-convolution of the factor marginals
        std::size_t patterns = std::size_t{1} << k;
        std::vector<unsigned __int128> conv(patterns, 0);
        for (std::size_t p = 0; p < patterns; ++p)
            for (std::size_t q = 0; q < patterns; ++q)
                conv[p ^ q] += static_cast<unsigned __int128>(ex_counts[p]) * sb_counts[q];
        // L1 distance from uniform, exact integer arithmetic:
        // sum |c/total - 1/2^k| = sum |2^k c - total| / (2^k total)
        unsigned __int128 total = 0;
        for (auto c : conv) total += c;
        REQUIRE(total == (static_cast<unsigned __int128>(1)
                          << (ex.seed_length() + sb.seed_length())));
        unsigned __int128 num = 0;
        for (auto c : conv) {
            unsigned __int128 lhs = c << k;
            num += lhs > total ? lhs - total : total - lhs;
        }
        // L1 <= delta  <=>  num <= delta * 2^k * total; delta = 2^-8
        unsigned __int128 rhs = (total << k) >> 8;
        REQUIRE(num <= rhs);
    }
}

TEST_CASE("almost space keeps 4-marginals exactly uniform") {
    // small instance where the whole product seed space is enumerable
    sign_space sp = sign_space::almost_kwise(8, 5, 0.9);
    REQUIRE(sp.seed_length() == 24);
    auto counts = marginal_counts(sp, {1, 3, 4, 6});
    std::uint64_t expect = (std::uint64_t{1} << sp.seed_length()) / 16;
    for (std::uint64_t cnt : counts) REQUIRE(cnt == expect);
}

TEST_CASE("descriptors round-trip") {
    for (const sign_space& sp :
         {sign_space::exact_kwise(16, 4), sign_space::small_bias(32, 0.01),
          sign_space::almost_kwise(16, 6, std::ldexp(1.0, -8)),
          sign_space::almost_kwise(8, 5, 0.0)}) {
        auto j = sp.descriptor();
        sign_space back = sign_space::from_descriptor(j);
        REQUIRE(back.descriptor() == j);
        REQUIRE(back.seed_length() == sp.seed_length());
    }
}
