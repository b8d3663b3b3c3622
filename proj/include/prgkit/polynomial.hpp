#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "prgkit/common.hpp"

namespace prgkit {

// Multilinear polynomial over x in {+1,-1}^n, stored as a sparse map from
// index subsets (sorted, distinct) to real coefficients. Degree of every
// stored key is bounded by the declared degree. The empty key is the
// constant term.
class multilinear_polynomial {
public:
    multilinear_polynomial() = default;
    multilinear_polynomial(int n, int degree_bound) : n_(n), d_(degree_bound) {
        require(n >= 0 && degree_bound >= 0, "polynomial: n, d >= 0");
    }

    int dimension() const { return n_; }
    int degree_bound() const { return d_; }

    void set_coefficient(std::vector<int> idx, double c) {
        std::sort(idx.begin(), idx.end());
        require(std::adjacent_find(idx.begin(), idx.end()) == idx.end(),
                "polynomial: repeated index in monomial");
        require(idx.empty() || (idx.front() >= 0 && idx.back() < n_),
                "polynomial: index out of range");
        require(static_cast<int>(idx.size()) <= d_, "polynomial: monomial exceeds degree bound");
        if (c == 0.0)
            coeffs_.erase(idx);
        else
            coeffs_[std::move(idx)] = c;
    }

    double coefficient(std::vector<int> idx) const {
        std::sort(idx.begin(), idx.end());
        auto it = coeffs_.find(idx);
        return it == coeffs_.end() ? 0.0 : it->second;
    }

    const std::map<std::vector<int>, double>& coefficients() const { return coeffs_; }

    std::size_t monomial_count() const { return coeffs_.size(); }

    int degree() const {
        int d = 0;
        for (const auto& [idx, c] : coeffs_) d = std::max<int>(d, idx.size());
        return d;
    }

    double evaluate(std::span<const std::int8_t> x) const {
        require(x.size() == static_cast<std::size_t>(n_), "polynomial: input length mismatch");
        double sum = 0.0;
        for (const auto& [idx, c] : coeffs_) {
            double term = c;
            for (int i : idx) term *= x[i];
            sum += term;
        }
        return sum;
    }

    double norm2_squared() const {  // sum of squared coefficients
        double s = 0.0;
        for (const auto& [idx, c] : coeffs_) s += c * c;
        return s;
    }

    // Influence of coordinate i: the squared-coefficient mass of monomials
    // containing i.
    double influence(int i) const {
        require(i >= 0 && i < n_, "influence: index out of range");
        double s = 0.0;
        for (const auto& [idx, c] : coeffs_)
            if (std::binary_search(idx.begin(), idx.end(), i)) s += c * c;
        return s;
    }

    std::vector<double> influences() const {
        std::vector<double> tau(n_, 0.0);
        for (const auto& [idx, c] : coeffs_)
            for (int i : idx) tau[i] += c * c;
        return tau;
    }

    double total_influence() const {
        double s = 0.0;
        for (const auto& [idx, c] : coeffs_) s += static_cast<double>(idx.size()) * c * c;
        return s;
    }

    multilinear_polynomial scaled(double factor) const {
        multilinear_polynomial p = *this;
        for (auto& [idx, c] : p.coeffs_) c *= factor;
        return p;
    }

    bool operator==(const multilinear_polynomial& o) const {
        return n_ == o.n_ && d_ == o.d_ && coeffs_ == o.coeffs_;
    }

    // Text format: one line per monomial, "coeff i_1 i_2 ... i_k"; an empty
    // index list is the constant term. '#' starts a comment.
    void write(std::ostream& os) const;
    static multilinear_polynomial read(std::istream& is, int n, int degree_bound);

private:
    int n_ = 0;
    int d_ = 0;
    std::map<std::vector<int>, double> coeffs_;
};

inline void multilinear_polynomial::write(std::ostream& os) const {
    char buf[40];
    for (const auto& [idx, c] : coeffs_) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        os << buf;
        for (int i : idx) os << ' ' << i;
        os << '\n';
    }
}

inline multilinear_polynomial multilinear_polynomial::read(std::istream& is, int n,
                                                           int degree_bound) {
    multilinear_polynomial p(n, degree_bound);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double c;
        if (!(ls >> c)) continue;  // blank line
        std::vector<int> idx;
        int i;
        while (ls >> i) idx.push_back(i);
        if (!ls.eof()) throw format_error("polynomial: malformed monomial line: " + line);
        p.set_coefficient(std::move(idx), c);
    }
    return p;
}

}  // namespace prgkit
