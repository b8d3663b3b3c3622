#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "prgkit/robp.hpp"

namespace prgkit {

// A branching program whose states are running partial sums, together with
// the order that makes it monotone (sums ascending) and the sum each state
// stands for.
struct partial_sum_program {
    branching_program program;
    monotone_order order;
    std::vector<std::vector<std::int64_t>> layer_sums;  // per layer, by state id
};

namespace detail {

inline std::int64_t sum_as_int64(std::int64_t v) { return v; }
inline std::int64_t sum_as_int64(const bigint& v) {
    // diagnostic only; saturates outside the int64 range
    if (v > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
    if (v < std::numeric_limits<std::int64_t>::min()) return std::numeric_limits<std::int64_t>::min();
    return v.template convert_to<std::int64_t>();
}

inline double sum_minus_theta(std::int64_t v, double theta) {
    return static_cast<double>(v) - theta;
}
inline double sum_minus_theta(const bigint& v, double theta) {
    return v.template convert_to<double>() - theta;
}

template <typename Int>
partial_sum_program build_partial_sum_program(
    const std::vector<std::vector<Int>>& layer_values, double theta) {
    int T = static_cast<int>(layer_values.size());
    require(T >= 1, "partial-sum program: need at least one layer");
    std::size_t words = layer_values[0].size();
    require(words >= 2 && is_pow2(words), "partial-sum program: word count must be a power of two");
    for (const auto& v : layer_values)
        require(v.size() == words, "partial-sum program: ragged layer value tables");

    partial_sum_program out;
    out.program.word_bits = ceil_log2(words);
    out.program.widths.resize(T + 1);
    out.program.next.resize(T);
    out.order.layers.resize(T + 1);
    out.layer_sums.resize(T + 1);

    // states per layer keyed by partial sum; std::map keeps them ascending,
    // which is exactly the monotone order
    std::map<Int, std::uint32_t> cur;
    cur[Int(0)] = 0;
    out.program.widths[0] = 1;
    out.order.layers[0] = {0};
    out.layer_sums[0] = {0};
    for (int i = 0; i < T; ++i) {
        std::map<Int, std::uint32_t> nxt;
        for (const auto& [sum, id] : cur)
            for (const Int& v : layer_values[i]) nxt.emplace(sum + v, 0);
        std::uint32_t id = 0;
        out.layer_sums[i + 1].clear();
        for (auto& [sum, slot] : nxt) {
            slot = id++;
            out.layer_sums[i + 1].push_back(sum_as_int64(sum));
        }
        out.program.widths[i + 1] = id;
        out.order.layers[i + 1].resize(id);
        for (std::uint32_t s = 0; s < id; ++s) out.order.layers[i + 1][s] = s;
        out.program.next[i].assign(cur.size(), std::vector<std::uint32_t>(words));
        for (const auto& [sum, sid] : cur)
            for (std::size_t z = 0; z < words; ++z)
                out.program.next[i][sid][z] = nxt.at(sum + layer_values[i][z]);
        cur = std::move(nxt);
    }
    out.program.accept.resize(cur.size());
    for (const auto& [sum, id] : cur)
        out.program.accept[id] = sum_minus_theta(sum, theta) >= 0.0 ? 1 : 0;
    return out;
}

}  // namespace detail

// T-layer program accumulating layer_values[i][word] per step and accepting
// when the final sum reaches theta (ties accept). Sums that could leave the
// int64 range are recomputed over big integers; state counts are unaffected.
inline partial_sum_program robp_from_layer_values(
    const std::vector<std::vector<std::int64_t>>& layer_values, double theta) {
    // overflow bound: sum of per-layer extremes
    long double bound = 0.0L;
    for (const auto& v : layer_values) {
        long double mx = 0.0L;
        for (std::int64_t x : v) mx = std::max<long double>(mx, std::abs((long double)x));
        bound += mx;
    }
    if (bound < 4.6e18L / 2) return detail::build_partial_sum_program(layer_values, theta);
    std::vector<std::vector<bigint>> big(layer_values.size());
    for (std::size_t i = 0; i < layer_values.size(); ++i)
        big[i].assign(layer_values[i].begin(), layer_values[i].end());
    return detail::build_partial_sum_program(big, theta);
}

// Halfspace sign(<w, x> - theta) as a one-bit-per-layer program over the
// partial sums. Word bit b maps to the sign x = 2b - 1 (a set bit reads +1).
inline partial_sum_program robp_from_halfspace(const std::vector<std::int64_t>& weights,
                                               double theta) {
    require(!weights.empty(), "robp_from_halfspace: empty weight vector");
    std::vector<std::vector<std::int64_t>> layer_values(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        layer_values[i] = {-weights[i], weights[i]};
    return robp_from_layer_values(layer_values, theta);
}

}  // namespace prgkit
