#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "prgkit/common.hpp"
#include "prgkit/rational.hpp"

namespace prgkit {

// Layered read-once branching program. Layer 0 holds the single start
// state; each state of layer i < T has exactly 2^word_bits outgoing edges,
// one per word value; final-layer states carry accept labels. The program
// reads T words of word_bits fresh bits each.
struct branching_program {
    int word_bits = 1;                                        // D
    std::vector<std::uint32_t> widths;                        // w_0 .. w_T
    std::vector<std::vector<std::vector<std::uint32_t>>> next;  // [layer][state][word]
    std::vector<std::uint8_t> accept;                         // per final-layer state

    int length() const { return static_cast<int>(next.size()); }  // T
    std::uint64_t words_per_state() const { return std::uint64_t{1} << word_bits; }

    std::uint32_t max_width() const {
        std::uint32_t w = 0;
        for (std::uint32_t x : widths) w = std::max(w, x);
        return w;
    }
    // Smallest S with every layer width <= 2^S.
    int width_exponent() const { return ceil_log2(max_width()); }

    void validate() const {
        require(word_bits >= 1 && word_bits <= 62, "robp: word_bits in [1,62]");
        require(widths.size() == next.size() + 1, "robp: widths must cover layers 0..T");
        require(widths.front() == 1, "robp: first layer must hold a single start state");
        require(accept.size() == widths.back(), "robp: one accept label per final state");
        for (int i = 0; i < length(); ++i) {
            require(next[i].size() == widths[i], "robp: layer width mismatch");
            for (const auto& edges : next[i]) {
                require(edges.size() == words_per_state(),
                        "robp: every state needs 2^D outgoing edges");
                for (std::uint32_t tgt : edges)
                    require(tgt < widths[i + 1], "robp: edge target out of range");
            }
        }
    }

    bool evaluate(std::span<const std::uint64_t> words) const {
        require(words.size() == static_cast<std::size_t>(length()),
                "robp::evaluate: need exactly T words");
        std::uint32_t state = 0;
        for (int i = 0; i < length(); ++i) {
            require(words[i] < words_per_state(), "robp::evaluate: word value out of range");
            state = next[i][state][words[i]];
        }
        return accept[state] != 0;
    }

    // evaluate on a packed bit string (layer i reads bits [i*D, (i+1)*D))
    bool evaluate_bits(std::uint64_t bits) const {
        std::uint32_t state = 0;
        std::uint64_t mask = words_per_state() - 1;
        for (int i = 0; i < length(); ++i)
            state = next[i][state][(bits >> (i * word_bits)) & mask];
        return accept[state] != 0;
    }
};

// Exact acceptance probabilities P(v) for every state, by backward dynamic
// programming; out[i][s] is the probability that a uniformly random suffix
// accepts from state s of layer i.
inline std::vector<std::vector<rational>> acceptance_probabilities(const branching_program& m) {
    int T = m.length();
    std::vector<std::vector<rational>> p(T + 1);
    p[T].resize(m.widths[T]);
    for (std::uint32_t s = 0; s < m.widths[T]; ++s) p[T][s] = m.accept[s] ? 1 : 0;
    rational inv_words(1, bigint(1) << m.word_bits);
    for (int i = T - 1; i >= 0; --i) {
        p[i].resize(m.widths[i]);
        for (std::uint32_t s = 0; s < m.widths[i]; ++s) {
            rational acc = 0;
            for (std::uint32_t tgt : m.next[i][s]) acc += p[i + 1][tgt];
            p[i][s] = acc * inv_words;
        }
    }
    return p;
}

inline rational acceptance_prob(const branching_program& m, int layer, std::uint32_t state) {
    require(layer >= 0 && layer <= m.length() && state < m.widths[layer],
            "acceptance_prob: no such state");
    return acceptance_probabilities(m)[layer][state];
}

inline rational acceptance_prob(const branching_program& m) {
    return acceptance_probabilities(m)[0][0];
}

// Per-layer state order under which accepting sets are nested.
struct monotone_order {
    std::vector<std::vector<std::uint32_t>> layers;  // layers[i] = states, ascending
};

struct non_monotone_witness {
    int layer = 0;
    std::uint32_t state_a = 0, state_b = 0;  // incomparable accepting sets
};

namespace detail {

// bad[i][a * w_i + b] = exists a suffix accepted from a but rejected from b.
// A(a) is contained in A(b) exactly when the entry is false.
inline std::vector<std::vector<char>> containment_violations(const branching_program& m) {
    int T = m.length();
    std::vector<std::vector<char>> bad(T + 1);
    std::uint32_t wt = m.widths[T];
    bad[T].assign(static_cast<std::size_t>(wt) * wt, 0);
    for (std::uint32_t a = 0; a < wt; ++a)
        for (std::uint32_t b = 0; b < wt; ++b)
            bad[T][a * wt + b] = m.accept[a] && !m.accept[b];
    for (int i = T - 1; i >= 0; --i) {
        std::uint32_t w = m.widths[i], wn = m.widths[i + 1];
        bad[i].assign(static_cast<std::size_t>(w) * w, 0);
        for (std::uint32_t a = 0; a < w; ++a) {
            for (std::uint32_t b = 0; b < w; ++b) {
                char v = 0;
                const auto& ea = m.next[i][a];
                const auto& eb = m.next[i][b];
                for (std::uint64_t z = 0; z < m.words_per_state() && !v; ++z)
                    v = bad[i + 1][ea[z] * wn + eb[z]];
                bad[i][a * w + b] = v;
            }
        }
    }
    return bad;
}

}  // namespace detail

// Decides monotonicity. The only candidate order is by acceptance
// probability (containment forces it); containment along that order is then
// verified pairwise through a product-automaton reachability check. States
// with equal probability must have equal accepting sets, so ties are checked
// in both directions.
inline std::variant<monotone_order, non_monotone_witness> find_monotone_order(
    const branching_program& m) {
    auto p = acceptance_probabilities(m);
    auto bad = detail::containment_violations(m);
    monotone_order order;
    order.layers.resize(m.length() + 1);
    for (int i = 0; i <= m.length(); ++i) {
        std::uint32_t w = m.widths[i];
        auto& layer = order.layers[i];
        layer.resize(w);
        for (std::uint32_t s = 0; s < w; ++s) layer[s] = s;
        std::stable_sort(layer.begin(), layer.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return p[i][a] < p[i][b]; });
        for (std::uint32_t j = 0; j + 1 < w; ++j) {
            std::uint32_t a = layer[j], b = layer[j + 1];
            bool ok = !bad[i][a * w + b] && (p[i][a] != p[i][b] || !bad[i][b * w + a]);
            if (!ok) return non_monotone_witness{i, a, b};
        }
    }
    return order;
}

inline bool is_monotone(const branching_program& m) {
    return std::holds_alternative<monotone_order>(find_monotone_order(m));
}

// Result of rounding a monotone program down/up onto interval
// representatives: for all z, down(z) <= m(z) <= up(z), and the acceptance
// gap between up and down under uniform inputs is at most eps.
struct sandwich_pair {
    branching_program down, up;
};

// Interval rounding. Each layer's order is cut greedily from the bottom
// into runs whose acceptance probabilities span at most eps/2T; the upper
// program rounds every edge to the top of the target interval, the lower
// one to the bottom. Output layers have at most ceil(2T/eps) states.
inline sandwich_pair sandwich(const branching_program& m, const monotone_order& order,
                              const rational& eps) {
    require(eps > 0 && eps < 1, "sandwich: eps in (0,1)");
    require(order.layers.size() == static_cast<std::size_t>(m.length()) + 1,
            "sandwich: order does not match program");
    int T = m.length();
    auto p = acceptance_probabilities(m);
    rational gap = eps / (2 * T);

    // interval_of[i][state] -> interval index; bottom/top reps per interval
    std::vector<std::vector<std::uint32_t>> interval_of(T + 1);
    std::vector<std::vector<std::uint32_t>> rep_low(T + 1), rep_high(T + 1);
    for (int i = 0; i <= T; ++i) {
        const auto& layer = order.layers[i];
        require(layer.size() == m.widths[i], "sandwich: order layer width mismatch");
        for (std::size_t j = 0; j + 1 < layer.size(); ++j)
            require(p[i][layer[j]] <= p[i][layer[j + 1]],
                    "sandwich: order is not monotone (acceptance probabilities decrease)");
        interval_of[i].resize(layer.size());
        rational run_start;
        for (std::size_t j = 0; j < layer.size(); ++j) {
            bool open_new = j == 0 || p[i][layer[j]] - run_start > gap;
            if (open_new) {
                run_start = p[i][layer[j]];
                rep_low[i].push_back(layer[j]);
                rep_high[i].push_back(layer[j]);
            } else {
                rep_high[i].back() = layer[j];
            }
            interval_of[i][layer[j]] = static_cast<std::uint32_t>(rep_low[i].size() - 1);
        }
    }

    auto build = [&](const std::vector<std::vector<std::uint32_t>>& rep) {
        branching_program out;
        out.word_bits = m.word_bits;
        out.widths.resize(T + 1);
        for (int i = 0; i <= T; ++i) out.widths[i] = static_cast<std::uint32_t>(rep[i].size());
        out.next.resize(T);
        for (int i = 0; i < T; ++i) {
            out.next[i].resize(rep[i].size());
            for (std::size_t s = 0; s < rep[i].size(); ++s) {
                out.next[i][s].resize(m.words_per_state());
                for (std::uint64_t z = 0; z < m.words_per_state(); ++z)
                    out.next[i][s][z] = interval_of[i + 1][m.next[i][rep[i][s]][z]];
            }
        }
        out.accept.resize(rep[T].size());
        for (std::size_t s = 0; s < rep[T].size(); ++s) out.accept[s] = m.accept[rep[T][s]];
        return out;
    };
    return {build(rep_low), build(rep_high)};
}

}  // namespace prgkit
