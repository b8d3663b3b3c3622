#pragma once

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "prgkit/common.hpp"

namespace prgkit {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Discrete one-dimensional distribution as sorted atoms with integer
// multiplicities. Doubles both as an empirical sample CDF and as an exactly
// enumerated distribution (multiplicities = exact counts).
class empirical_cdf {
public:
    empirical_cdf() = default;

    static empirical_cdf from_samples(std::vector<double> values) {
        require(!values.empty(), "empirical_cdf: empty sample");
        std::sort(values.begin(), values.end());
        empirical_cdf e;
        for (double v : values) {
            if (!e.values_.empty() && e.values_.back() == v)
                ++e.counts_.back();
            else {
                e.values_.push_back(v);
                e.counts_.push_back(1);
            }
        }
        e.finish();
        return e;
    }

    static empirical_cdf from_counts(std::vector<double> values,
                                     std::vector<std::uint64_t> counts) {
        require(!values.empty() && values.size() == counts.size(),
                "empirical_cdf: values/counts mismatch");
        require(std::is_sorted(values.begin(), values.end()), "empirical_cdf: values not sorted");
        empirical_cdf e;
        e.values_ = std::move(values);
        e.counts_ = std::move(counts);
        e.finish();
        return e;
    }

    std::uint64_t total() const { return total_; }
    const std::vector<double>& atoms() const { return values_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

    // #samples strictly below / at most x
    std::uint64_t count_below(double x) const {
        std::size_t idx = std::lower_bound(values_.begin(), values_.end(), x) - values_.begin();
        return cum_[idx];
    }
    std::uint64_t count_at_most(double x) const {
        std::size_t idx = std::upper_bound(values_.begin(), values_.end(), x) - values_.begin();
        return cum_[idx];
    }

    // Pools two sample sets (mixture weighted by totals).
    static empirical_cdf pool(const empirical_cdf& a, const empirical_cdf& b) {
        std::vector<double> values;
        std::vector<std::uint64_t> counts;
        std::size_t i = 0, j = 0;
        while (i < a.values_.size() || j < b.values_.size()) {
            bool take_a = j >= b.values_.size() ||
                          (i < a.values_.size() && a.values_[i] <= b.values_[j]);
            double v = take_a ? a.values_[i] : b.values_[j];
            std::uint64_t c = 0;
            if (i < a.values_.size() && a.values_[i] == v) c += a.counts_[i], ++i;
            if (j < b.values_.size() && b.values_[j] == v) c += b.counts_[j], ++j;
            values.push_back(v);
            counts.push_back(c);
        }
        return from_counts(std::move(values), std::move(counts));
    }

private:
    void finish() {
        cum_.assign(values_.size() + 1, 0);
        for (std::size_t k = 0; k < counts_.size(); ++k) cum_[k + 1] = cum_[k] + counts_[k];
        total_ = cum_.back();
        require(total_ > 0, "empirical_cdf: zero total");
    }

    std::vector<double> values_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> cum_;  // cum_[i] = counts of the first i atoms
    std::uint64_t total_ = 0;
};

// Sup-norm distance between the two CDFs, evaluated from both one-sided
// limits at every atom of either distribution. For two discrete
// distributions the comparison is exact integer cross-multiplication.
inline double ks_distance(const empirical_cdf& p, const empirical_cdf& q) {
    const auto& pa = p.atoms();
    const auto& qa = q.atoms();
    std::vector<double> points;
    points.reserve(pa.size() + qa.size());
    std::merge(pa.begin(), pa.end(), qa.begin(), qa.end(), std::back_inserter(points));
    points.erase(std::unique(points.begin(), points.end()), points.end());
    // max |a/N - b/M| = max |a M - b N| / (N M), exact while the products
    // stay within 64 bits
    const std::uint64_t N = p.total(), M = q.total();
    if (N <= (std::uint64_t{1} << 31) && M <= (std::uint64_t{1} << 31)) {
        std::uint64_t best = 0;
        for (double x : points) {
            std::uint64_t a = p.count_below(x), b = q.count_below(x);
            best = std::max(best, a * M > b * N ? a * M - b * N : b * N - a * M);
            a = p.count_at_most(x), b = q.count_at_most(x);
            best = std::max(best, a * M > b * N ? a * M - b * N : b * N - a * M);
        }
        return static_cast<double>(best) / (static_cast<double>(N) * static_cast<double>(M));
    }
    double best = 0.0;
    double in = 1.0 / static_cast<double>(N), im = 1.0 / static_cast<double>(M);
    for (double x : points) {
        best = std::max(best, std::abs(static_cast<double>(p.count_below(x)) * in -
                                       static_cast<double>(q.count_below(x)) * im));
        best = std::max(best, std::abs(static_cast<double>(p.count_at_most(x)) * in -
                                       static_cast<double>(q.count_at_most(x)) * im));
    }
    return best;
}

// Distance to the standard normal.
inline double ks_distance_normal(const empirical_cdf& p) {
    double best = 0.0;
    const auto& atoms = p.atoms();
    double inv = 1.0 / static_cast<double>(p.total());
    for (double x : atoms) {
        double phi = normal_cdf(x);
        best = std::max(best, std::abs(static_cast<double>(p.count_below(x)) * inv - phi));
        best = std::max(best, std::abs(static_cast<double>(p.count_at_most(x)) * inv - phi));
    }
    return best;
}

// Quantitative central-limit bounds for a sum of independent centered
// variables: third-moment form rho/sigma^3 and fourth-moment form
// sqrt(rho4)/sigma^2, whichever moments are supplied.
struct clt_moments {
    std::vector<double> second;                 // E[Y_i^2]
    std::optional<std::vector<double>> third;   // E[|Y_i|^3]
    std::optional<std::vector<double>> fourth;  // E[Y_i^4]
};

struct clt_bounds {
    std::optional<double> third_moment_bound;
    std::optional<double> fourth_moment_bound;
};

inline clt_bounds berry_esseen_bound(const clt_moments& m) {
    double sigma2 = 0.0;
    for (double s : m.second) sigma2 += s;
    require(sigma2 > 0.0, "berry_esseen_bound: zero variance");
    double sigma = std::sqrt(sigma2);
    clt_bounds out;
    if (m.third) {
        double rho = 0.0;
        for (double r : *m.third) rho += r;
        out.third_moment_bound = rho / (sigma2 * sigma);
    }
    if (m.fourth) {
        double rho4 = 0.0;
        for (double r : *m.fourth) rho4 += r;
        out.fourth_moment_bound = std::sqrt(rho4) / sigma2;
    }
    return out;
}

// Sampling slack for empirical CDFs: with probability 1-beta the empirical
// CDF of N draws sits within this band of the truth.
inline double dkw_epsilon(std::uint64_t n, double beta) {
    require(n > 0 && beta > 0.0 && beta < 1.0, "dkw_epsilon: bad arguments");
    return std::sqrt(std::log(2.0 / beta) / (2.0 * static_cast<double>(n)));
}

struct binomial_interval {
    double lo = 0.0, hi = 1.0;
    double half_width() const { return (hi - lo) / 2.0; }
};

// Two-sided Clopper-Pearson interval at the given confidence level.
inline binomial_interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence) {
    require(k <= n && n > 0, "clopper_pearson: k <= n, n > 0");
    require(confidence > 0.0 && confidence < 1.0, "clopper_pearson: confidence in (0,1)");
    double alpha = 1.0 - confidence;
    binomial_interval iv;
    iv.lo = k == 0 ? 0.0
                   : boost::math::ibeta_inv(static_cast<double>(k),
                                            static_cast<double>(n - k + 1), alpha / 2.0);
    iv.hi = k == n ? 1.0
                   : boost::math::ibeta_inv(static_cast<double>(k + 1),
                                            static_cast<double>(n - k), 1.0 - alpha / 2.0);
    return iv;
}

}  // namespace prgkit
