#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "prgkit/common.hpp"
#include "prgkit/polynomial.hpp"

namespace prgkit {

// Sign convention used everywhere: sign(0) = +1.
inline int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

// H(x) = sign(<w, x> - theta) over {+1,-1}^n.
struct halfspace {
    std::vector<double> weights;
    double theta = 0.0;

    int dimension() const { return static_cast<int>(weights.size()); }

    int evaluate(std::span<const std::int8_t> x) const {
        require(x.size() == weights.size(), "halfspace: input length mismatch");
        double dot = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) dot += weights[i] * x[i];
        return sign_of(dot - theta);
    }

    double norm() const {
        double s = 0.0;
        for (double w : weights) s += w * w;
        return std::sqrt(s);
    }

    // Normalized copy (||w|| = 1) plus the scale that was divided out.
    std::pair<halfspace, double> normalized() const {
        double nrm = norm();
        require(nrm > 0.0, "halfspace: zero weight vector");
        halfspace h{weights, theta / nrm};
        for (double& w : h.weights) w /= nrm;
        return {h, nrm};
    }

    multilinear_polynomial as_polynomial() const {
        multilinear_polynomial p(dimension(), 1);
        for (int i = 0; i < dimension(); ++i) p.set_coefficient({i}, weights[i]);
        return p;
    }

    // Text format: "w_1 w_2 ... w_n | theta".
    void write(std::ostream& os) const;
    static halfspace read(std::istream& is);
};

// f(x) = sign(P(x) - theta).
struct ptf {
    multilinear_polynomial p;
    double theta = 0.0;

    int dimension() const { return p.dimension(); }
    int evaluate(std::span<const std::int8_t> x) const { return sign_of(p.evaluate(x) - theta); }
};

inline void halfspace::write(std::ostream& os) const {
    char buf[40];
    for (std::size_t i = 0; i < weights.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", weights[i]);
        os << (i ? " " : "") << buf;
    }
    char tbuf[40];
    std::snprintf(tbuf, sizeof tbuf, "%.17g", theta);
    os << " | " << tbuf << '\n';
}

inline halfspace halfspace::read(std::istream& is) {
    std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    auto bar = all.find('|');
    if (bar == std::string::npos) throw format_error("halfspace: missing '|' separator");
    std::istringstream ws(all.substr(0, bar)), ts(all.substr(bar + 1));
    halfspace h;
    double v;
    while (ws >> v) h.weights.push_back(v);
    if (!(ts >> h.theta)) throw format_error("halfspace: missing threshold");
    if (h.weights.empty()) throw format_error("halfspace: no weights");
    return h;
}

// ---------------------------------------------------------------------------
// Regularity

struct regularity_report {
    bool regular = false;
    double ratio = 0.0;  // attained value compared against eps
};

// A weight vector is eps-regular when no coordinate carries more than an
// eps fraction of its norm: ratio = max_i |w_i| / ||w||.
inline regularity_report is_regular(const halfspace& h, double eps) {
    double nrm = h.norm();
    require(nrm > 0.0, "is_regular: zero weight vector");
    double mx = 0.0;
    for (double w : h.weights) mx = std::max(mx, std::abs(w));
    double ratio = mx / nrm;
    return {ratio <= eps * (1.0 + 1e-12), ratio};
}

// A polynomial is eps-regular when no coordinate influence dominates:
// ratio = sqrt(sum_i tau_i^2) of the norm-1 rescaling, compared to eps.
inline regularity_report is_regular(const multilinear_polynomial& p, double eps) {
    double n2 = p.norm2_squared();
    require(n2 > 0.0, "is_regular: zero polynomial");
    double s = 0.0;
    for (double tau : p.influences()) s += tau * tau;
    double ratio = std::sqrt(s) / n2;
    return {ratio <= eps * (1.0 + 1e-12), ratio};
}

// ---------------------------------------------------------------------------
// Critical index

struct critical_index_report {
    int K = 0;                      // least index at which the tail turns regular
    std::vector<int> order;         // coordinates sorted by decreasing influence
    std::vector<double> sorted_influences;
};

// Influences are sorted decreasing; K is the least i (0-based) with
// tau_(i+1) <= eps^2 * (tau_(i+1) + tau_(i+2) + ... ), counting 1-based
// positions in the sorted order. K = n when no index qualifies.
inline critical_index_report critical_index_of(std::vector<double> tau, double eps) {
    int n = static_cast<int>(tau.size());
    require(n > 0, "critical_index: empty influence vector");
    double total = std::accumulate(tau.begin(), tau.end(), 0.0);
    require(total > 0.0, "critical_index: zero influences");
    critical_index_report rep;
    rep.order.resize(n);
    std::iota(rep.order.begin(), rep.order.end(), 0);
    std::stable_sort(rep.order.begin(), rep.order.end(),
                     [&](int a, int b) { return tau[a] > tau[b]; });
    rep.sorted_influences.resize(n);
    for (int i = 0; i < n; ++i) rep.sorted_influences[i] = tau[rep.order[i]];
    double tail = total;  // sum_{l > i} tau_l at i = 0 includes tau_1
    const double rel = 1.0 + 1e-12;
    for (int i = 0; i < n; ++i) {
        if (rep.sorted_influences[i] <= eps * eps * tail * rel) {
            rep.K = i;
            return rep;
        }
        tail -= rep.sorted_influences[i];
    }
    rep.K = n;
    return rep;
}

inline critical_index_report critical_index(const multilinear_polynomial& p, double eps) {
    return critical_index_of(p.influences(), eps);
}

inline critical_index_report critical_index(const halfspace& h, double eps) {
    std::vector<double> tau(h.weights.size());
    for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = h.weights[i] * h.weights[i];
    return critical_index_of(std::move(tau), eps);
}

// ---------------------------------------------------------------------------
// Exact enumeration oracles

struct bias_count {
    std::uint64_t accepting = 0;  // #inputs with f(x) = +1
    int n = 0;
    std::uint64_t total() const { return std::uint64_t{1} << n; }
    double value() const { return static_cast<double>(accepting) / static_cast<double>(total()); }
};

// Pr[f(x) = 1] for uniform x, by full enumeration in Gray-code order
// (one sign flip per step). Refuses above the cap; callers beyond it should
// use the Monte-Carlo harness.
inline bias_count exact_bias(const halfspace& h, int cap = kDefaultInputCap) {
    int n = h.dimension();
    if (n > cap)
        throw cap_exceeded("exact_bias: n = " + std::to_string(n) + " exceeds input cap " +
                           std::to_string(cap) + "; use the monte-carlo path");
    bias_count out;
    out.n = n;
    double dot = 0.0;
    for (double w : h.weights) dot += w;  // all-ones start
    std::vector<std::int8_t> x(n, 1);
    std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t v = 0;;) {
        if (dot - h.theta >= 0.0) ++out.accepting;
        if (++v == total) break;
        int bit = __builtin_ctzll(v);
        x[bit] = -x[bit];
        dot += 2.0 * h.weights[bit] * x[bit];
    }
    return out;
}

inline bias_count exact_bias(const ptf& f, int cap = kDefaultInputCap) {
    int n = f.dimension();
    if (n > cap)
        throw cap_exceeded("exact_bias: n = " + std::to_string(n) + " exceeds input cap " +
                           std::to_string(cap) + "; use the monte-carlo path");
    bias_count out;
    out.n = n;
    // per-monomial running values; a coordinate flip negates every monomial
    // containing it (exact float operation), the total is re-summed fresh
    std::vector<double> vals;
    std::vector<std::vector<int>> touching(n);
    for (const auto& [idx, c] : f.p.coefficients()) {
        for (int i : idx) touching[i].push_back(static_cast<int>(vals.size()));
        vals.push_back(c);
    }
    std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t v = 0;;) {
        double sum = 0.0;
        for (double t : vals) sum += t;
        if (sum - f.theta >= 0.0) ++out.accepting;
        if (++v == total) break;
        for (int m : touching[__builtin_ctzll(v)]) vals[m] = -vals[m];
    }
    return out;
}

// Chow parameters: E[f * chi_I] for all |I| <= d, exact numerators over 2^n.
// chi_I(x) is the product of the coordinates in I.
struct chow_entry {
    std::vector<int> index_set;
    std::int64_t numerator = 0;  // E = numerator / 2^n
};

template <typename F>
std::vector<chow_entry> chow_parameters(const F& f, int d, int cap = kDefaultInputCap) {
    int n = f.dimension();
    if (n > cap)
        throw cap_exceeded("chow_parameters: n = " + std::to_string(n) + " exceeds input cap " +
                           std::to_string(cap));
    require(n <= 62, "chow_parameters: n too large for mask enumeration");
    // subsets of size <= d, as masks, in (size, lexicographic) order
    std::vector<std::uint64_t> masks;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
        if (__builtin_popcountll(m) <= d) masks.push_back(m);
    std::sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
        int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
        return pa != pb ? pa < pb : a < b;
    });
    std::vector<std::int64_t> acc(masks.size(), 0);
    std::vector<std::int8_t> x(n, 1);
    std::uint64_t neg = 0;  // bit i set when x_i = -1
    std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t v = 0;;) {
        int fx = f.evaluate(x);
        for (std::size_t s = 0; s < masks.size(); ++s) {
            int chi = (__builtin_popcountll(neg & masks[s]) & 1) ? -1 : 1;
            acc[s] += fx * chi;
        }
        if (++v == total) break;
        int bit = __builtin_ctzll(v);
        x[bit] = -x[bit];
        neg ^= std::uint64_t{1} << bit;
    }
    std::vector<chow_entry> out(masks.size());
    for (std::size_t s = 0; s < masks.size(); ++s) {
        for (int i = 0; i < n; ++i)
            if ((masks[s] >> i) & 1) out[s].index_set.push_back(i);
        out[s].numerator = acc[s];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integer scaling

struct integer_halfspace {
    std::vector<std::int64_t> weights;
    std::int64_t theta = 0;
    std::int64_t denominator = 1;  // original ~ this / denominator
};

// Rounds (w, theta) to integers over a common denominator. The rounding
// error per coordinate is at most 1/(2*denominator) of the original scale.
inline integer_halfspace scale_to_integers(const halfspace& h, std::int64_t denominator) {
    require(denominator >= 1, "scale_to_integers: denominator >= 1");
    integer_halfspace out;
    out.denominator = denominator;
    for (double w : h.weights)
        out.weights.push_back(static_cast<std::int64_t>(std::llround(w * denominator)));
    out.theta = static_cast<std::int64_t>(std::llround(h.theta * denominator));
    return out;
}

}  // namespace prgkit
