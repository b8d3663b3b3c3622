#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "prgkit/derand.hpp"
#include "prgkit/generator.hpp"
#include "prgkit/halfspace_robp.hpp"
#include "prgkit/rational.hpp"
#include "prgkit/robp.hpp"

namespace prgkit {

// Exact Pr[<w, x> >= theta] under uniform signs, for integer weights of any
// dimension, by convolving the per-coordinate value distributions. Counts
// are big integers; the result is an exact rational.
inline rational exact_integer_halfspace_bias(const std::vector<std::int64_t>& w, double theta) {
    std::map<std::int64_t, bigint> dist;
    dist[0] = 1;
    for (std::int64_t wi : w) {
        std::map<std::int64_t, bigint> nxt;
        for (const auto& [v, c] : dist) {
            nxt[v + wi] += c;
            nxt[v - wi] += c;
        }
        dist = std::move(nxt);
    }
    bigint acc = 0;
    for (const auto& [v, c] : dist)
        if (static_cast<double>(v) - theta >= 0.0) acc += c;
    return rational(acc, bigint(1) << w.size());
}

namespace detail {

// Per-bucket tables val[i][z] = <w restricted to bucket i, block(z)> for a
// fixed hash member, with in-bucket positions in increasing coordinate
// order (the same layout generate() uses).
inline std::vector<std::vector<std::int64_t>> bucket_value_tables(
    const generator_spec& g, const hash_family::member& member,
    const std::vector<std::int64_t>& w) {
    int n = g.dimension(), m = g.block_dimension();
    std::uint64_t t = g.bucket_count();
    std::size_t r0 = g.block().seed_length();
    require(r0 <= 24, "bucket tables: block seed too long to enumerate");
    std::vector<std::vector<std::int64_t>> bucket_weights(t);
    for (int j = 0; j < n; ++j) bucket_weights[member.bucket(j)].push_back(w[j]);
    for (const auto& bw : bucket_weights)
        require(bw.size() == static_cast<std::size_t>(m), "bucket tables: uneven member");
    std::vector<std::vector<std::int64_t>> tables(t,
                                                  std::vector<std::int64_t>(std::size_t{1} << r0));
    std::vector<std::int8_t> out(m);
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << r0); ++z) {
        g.block().sample_into(seed::from_uint(r0, z), out.data());
        for (std::uint64_t i = 0; i < t; ++i) {
            std::int64_t dot = 0;
            for (int p = 0; p < m; ++p) dot += bucket_weights[i][p] * out[p];
            tables[i][z] = dot;
        }
    }
    return tables;
}

}  // namespace detail

// Exact generator-side bias of a halfspace under the bucketed generator,
// computed by enumerating the hash seed space and convolving the exact
// per-bucket dot-product distributions (block seeds are independent across
// buckets, so the convolution counts the full seed space).
inline rational exact_generator_halfspace_bias(const generator_spec& g,
                                               const std::vector<std::int64_t>& w, double theta) {
    require(w.size() == static_cast<std::size_t>(g.dimension()),
            "exact bias: weight vector must match the generator dimension");
    std::size_t hash_bits = g.hash().seed_length();
    require(hash_bits <= 24, "exact bias: hash seed too long to enumerate");
    std::size_t r0 = g.block().seed_length();
    unsigned total_block_bits = static_cast<unsigned>(r0 * g.bucket_count());

    bigint accepting = 0;
    for (std::uint64_t hs = 0; hs < (std::uint64_t{1} << hash_bits); ++hs) {
        auto member = g.hash().member_from_seed(seed::from_uint(hash_bits, hs));
        auto tables = detail::bucket_value_tables(g, member, w);
        std::map<std::int64_t, bigint> dist;
        dist[0] = 1;
        for (const auto& table : tables) {
            std::map<std::int64_t, bigint> value_counts;
            for (std::int64_t v : table) value_counts[v] += 1;
            std::map<std::int64_t, bigint> nxt;
            for (const auto& [v, c] : dist)
                for (const auto& [u, k] : value_counts) nxt[v + u] += c * k;
            dist = std::move(nxt);
        }
        for (const auto& [v, c] : dist)
            if (static_cast<double>(v) - theta >= 0.0) accepting += c;
    }
    return rational(accepting, bigint(1) << (hash_bits + total_block_bits));
}

// Everything criterion-style comparisons of the derandomized generator
// need, computed exactly in one sweep over the hash members:
//   - bias under the inner generator G and under the derandomized one
//   - the stretch generator's worst exact error over the sandwiching
//     programs of every per-member partial-sum program
struct derand_exact_report {
    rational uniform_bias = 0;
    rational generator_bias = 0;        // inner G
    rational derand_bias = 0;           // G composed with the stretch
    rational generator_error = 0;       // |uniform - generator|
    rational derand_error = 0;          // |uniform - derand|
    rational stretch_error = 0;         // max over members, over {down, up}
    rational sandwich_eps = 0;
};

inline derand_exact_report exact_derand_halfspace_report(const derand_spec& d,
                                                         const std::vector<std::int64_t>& w,
                                                         double theta, const rational& eps) {
    const generator_spec& g = d.inner();
    require(w.size() == static_cast<std::size_t>(g.dimension()),
            "derand report: weight vector must match the generator dimension");
    std::size_t hash_bits = g.hash().seed_length();
    std::size_t r0 = g.block().seed_length();
    std::size_t ry = d.prg().seed_length();
    require(hash_bits <= 24, "derand report: hash seed too long to enumerate");
    require(ry <= 26, "derand report: stretch seed too long to enumerate");
    std::uint64_t t = g.bucket_count();

    // stretch expansions are member-independent; cache them once
    std::uint64_t y_total = std::uint64_t{1} << ry;
    std::vector<std::uint16_t> words(static_cast<std::size_t>(y_total) * t);
    require(r0 <= 16, "derand report: block seed wider than the cached word type");
    {
        std::vector<std::uint64_t> wbuf(t);
        for (std::uint64_t y = 0; y < y_total; ++y) {
            d.prg().expand_into(seed::from_uint(ry, y), wbuf.data());
            for (std::uint64_t i = 0; i < t; ++i)
                words[y * t + i] = static_cast<std::uint16_t>(wbuf[i]);
        }
    }

    derand_exact_report rep;
    rep.sandwich_eps = eps;
    rep.uniform_bias = exact_integer_halfspace_bias(w, theta);

    bigint g_accepting = 0;      // over 2^(hash + t*r0)
    bigint gd_accepting = 0;     // over 2^(hash + ry)
    unsigned total_block_bits = static_cast<unsigned>(r0 * t);

    for (std::uint64_t hs = 0; hs < (std::uint64_t{1} << hash_bits); ++hs) {
        auto member = g.hash().member_from_seed(seed::from_uint(hash_bits, hs));
        auto tables = detail::bucket_value_tables(g, member, w);

        // exact bias of G for this member, by convolution
        {
            std::map<std::int64_t, bigint> dist;
            dist[0] = 1;
            for (const auto& table : tables) {
                std::map<std::int64_t, bigint> value_counts;
                for (std::int64_t v : table) value_counts[v] += 1;
                std::map<std::int64_t, bigint> nxt;
                for (const auto& [v, c] : dist)
                    for (const auto& [u, k] : value_counts) nxt[v + u] += c * k;
                dist = std::move(nxt);
            }
            for (const auto& [v, c] : dist)
                if (static_cast<double>(v) - theta >= 0.0) g_accepting += c;
        }

        // exact bias of the derandomized generator for this member
        {
            std::uint64_t acc = 0;
            for (std::uint64_t y = 0; y < y_total; ++y) {
                std::int64_t sum = 0;
                const std::uint16_t* wy = &words[y * t];
                for (std::uint64_t i = 0; i < t; ++i) sum += tables[i][wy[i]];
                if (static_cast<double>(sum) - theta >= 0.0) ++acc;
            }
            gd_accepting += acc;
        }

        // stretch error on the sandwiching programs of this member's
        // partial-sum program
        {
            auto ps = robp_from_layer_values(tables, theta);
            auto pair = sandwich(ps.program, ps.order, eps);
            for (const branching_program* prog : {&pair.down, &pair.up}) {
                std::uint64_t acc = 0;
                for (std::uint64_t y = 0; y < y_total; ++y) {
                    const std::uint16_t* wy = &words[y * t];
                    std::uint32_t st = 0;
                    for (std::uint64_t i = 0; i < t; ++i) st = prog->next[i][st][wy[i]];
                    acc += prog->accept[st];
                }
                rational err = rational_abs(rational(bigint(acc), bigint(1) << ry) -
                                            acceptance_prob(*prog));
                if (err > rep.stretch_error) rep.stretch_error = err;
            }
        }
    }

    rep.generator_bias = rational(g_accepting, bigint(1) << (hash_bits + total_block_bits));
    rep.derand_bias = rational(gd_accepting, bigint(1) << (hash_bits + ry));
    rep.generator_error = rational_abs(rep.uniform_bias - rep.generator_bias);
    rep.derand_error = rational_abs(rep.uniform_bias - rep.derand_bias);
    return rep;
}

}  // namespace prgkit
