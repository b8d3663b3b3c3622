#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "prgkit/bits.hpp"
#include "prgkit/common.hpp"
#include "prgkit/gf2.hpp"

namespace prgkit {

enum class sign_space_kind { exact_kwise, small_bias, almost_kwise };

inline const char* to_string(sign_space_kind k) {
    switch (k) {
        case sign_space_kind::exact_kwise: return "exact-kwise";
        case sign_space_kind::small_bias: return "small-bias";
        case sign_space_kind::almost_kwise: return "almost-kwise";
    }
    return "?";
}

// A distribution over {+1,-1}^m indexed by a fixed-length seed, in one of
// three constructions:
//
//   exact-kwise   one output bit per evaluation point of a random
//                 degree-(k-1) polynomial over GF(2^w), 2^w >= m. Any k
//                 evaluation points see a uniform value vector, so any k
//                 coordinates are exactly uniform. Requested orders k > m
//                 are built at degree m-1 (the two are the same
//                 distribution; there are only m coordinates to look at).
//
//   small-bias    bit i = <a^i, b> over GF(2^w'), seed (a, b). Every parity
//                 over a set S has bias at most (m-1)/2^w' because the biased
//                 seeds are the roots of sum_{i in S} y^i.
//
//   almost-kwise  coordinatewise product of an exact 4-wise space and a
//                 small-bias space with bias delta * 2^(-k/2). The product
//                 keeps 4-marginals exactly uniform and pushes every
//                 k-marginal within L1 distance delta of uniform.
//                 delta == 0 degenerates to the exact k-wise construction.
//
// Every construction has E[x_i] = 0 exactly for each coordinate. Instances
// are immutable; sample() is a pure function of (spec, seed).
class sign_space {
public:
    static sign_space exact_kwise(int m, int k) {
        require(m >= 1, "sign_space: m >= 1");
        require(k >= 1, "sign_space: k >= 1");
        sign_space s;
        s.kind_ = sign_space_kind::exact_kwise;
        s.m_ = m;
        s.k_ = k;
        s.delta_ = 0.0;
        s.degree_ = std::min<int>(k, m);
        s.field_ = get_gf2_field(std::max(1, ceil_log2(static_cast<std::uint64_t>(m))));
        s.seed_length_ = static_cast<std::size_t>(s.degree_) * s.field_->width();
        return s;
    }

    // Bias targets below what one 64-bit field reaches are met by XORing
    // independent copies; parity biases multiply across the copies.
    static sign_space small_bias(int m, double bias_target) {
        require(m >= 1, "sign_space: m >= 1");
        require(bias_target > 0.0 && bias_target < 1.0, "sign_space: bias target in (0,1)");
        sign_space s;
        s.kind_ = sign_space_kind::small_bias;
        s.m_ = m;
        s.k_ = m;
        s.delta_ = bias_target;
        int folds = 1, w = 1;
        for (;; ++folds) {
            require(folds <= 16, "sign_space: bias target out of range");
            double per_copy = std::pow(bias_target, 1.0 / folds);
            w = 1;
            while (w < 64 && static_cast<double>(m - 1) > per_copy * std::ldexp(1.0, w)) ++w;
            // verify the attained product bound against the target
            long double attained = 1.0L;
            for (int i = 0; i < folds; ++i)
                attained *= std::max<long double>(std::ldexp(static_cast<long double>(m - 1), -w),
                                                  0.0L);
            if (m == 1 || attained <= static_cast<long double>(bias_target)) break;
            if (w < 64) {
                ++w;
                attained = 1.0L;
                for (int i = 0; i < folds; ++i)
                    attained *= std::ldexp(static_cast<long double>(m - 1), -w);
                if (attained <= static_cast<long double>(bias_target)) break;
            }
        }
        s.folds_ = folds;
        s.field_ = get_gf2_field(w);
        s.seed_length_ = 2 * static_cast<std::size_t>(w) * folds;
        return s;
    }

    static sign_space almost_kwise(int m, int k, double delta) {
        require(delta >= 0.0, "sign_space: delta >= 0");
        if (delta == 0.0) {
            sign_space s = exact_kwise(m, std::max(k, 4));
            s.kind_ = sign_space_kind::almost_kwise;
            s.k_ = k;
            return s;
        }
        sign_space s;
        s.kind_ = sign_space_kind::almost_kwise;
        s.m_ = m;
        s.k_ = k;
        s.delta_ = delta;
        s.exact_part_ = std::make_shared<sign_space>(exact_kwise(m, 4));
        if (m > 1) {
            double bias = delta * std::exp2(-0.5 * static_cast<double>(k));
            s.bias_part_ = std::make_shared<sign_space>(small_bias(m, bias));
        }
        s.seed_length_ = s.exact_part_->seed_length() +
                         (s.bias_part_ ? s.bias_part_->seed_length() : 0);
        return s;
    }

    sign_space_kind kind() const { return kind_; }
    int dimension() const { return m_; }
    int independence() const { return k_; }
    double delta() const { return delta_; }
    std::size_t seed_length() const { return seed_length_; }

    // Attained parity-bias bound of a small-bias space: ((m-1)/2^w)^folds.
    double bias_bound() const {
        require(kind_ == sign_space_kind::small_bias, "bias_bound: small-bias spaces only");
        double per_copy = std::ldexp(static_cast<double>(m_ - 1), -field_->width());
        double b = 1.0;
        for (int i = 0; i < folds_; ++i) b *= per_copy;
        return b;
    }

    int folds() const { return folds_; }

    int field_width() const { return field_ ? field_->width() : 0; }
    int polynomial_degree() const { return degree_; }

    // Factors of the product construction (null for the other kinds and for
    // the delta == 0 degenerate case).
    const sign_space* exact_factor() const { return exact_part_.get(); }
    const sign_space* bias_factor() const { return bias_part_.get(); }

    std::vector<std::int8_t> sample(const seed& s) const {
        std::vector<std::int8_t> out(m_);
        sample_into(s, out.data());
        return out;
    }

    void sample_into(const seed& s, std::int8_t* out) const {
        require(s.length() == seed_length_, "sign_space::sample: seed length mismatch (want " +
                                                std::to_string(seed_length_) + " bits, got " +
                                                std::to_string(s.length()) + ")");
        bit_reader r(s);
        sample_reader(r, out);
    }

    // Reads this space's bits out of a longer seed; used by the bucketed
    // generators that pack t block seeds behind a hash seed.
    void sample_reader(bit_reader& r, std::int8_t* out) const {
        switch (kind_) {
            case sign_space_kind::exact_kwise:
                sample_poly(r, out);
                return;
            case sign_space_kind::small_bias:
                sample_powering(r, out);
                return;
            case sign_space_kind::almost_kwise:
                if (!exact_part_) {  // delta == 0 degenerate form
                    sample_poly(r, out);
                    return;
                }
                exact_part_->sample_reader(r, out);
                if (bias_part_) {
                    thread_local std::vector<std::int8_t> tmp;
                    tmp.resize(m_);
                    bias_part_->sample_reader(r, tmp.data());
                    for (int i = 0; i < m_; ++i) out[i] = static_cast<std::int8_t>(out[i] * tmp[i]);
                }
                return;
        }
    }

    nlohmann::json descriptor() const;
    static sign_space from_descriptor(const nlohmann::json& j);

private:
    void sample_poly(bit_reader& r, std::int8_t* out) const {
        const gf2_field& f = *field_;
        int w = f.width();
        thread_local std::vector<std::uint64_t> coeff;
        coeff.resize(static_cast<std::size_t>(degree_));
        for (int i = 0; i < degree_; ++i) coeff[i] = r.take(w);
        for (int j = 0; j < m_; ++j) {
            // Horner at point j
            std::uint64_t x = static_cast<std::uint64_t>(j);
            std::uint64_t v = coeff[degree_ - 1];
            for (int i = degree_ - 2; i >= 0; --i) v = f.mul(v, x) ^ coeff[i];
            out[j] = (v & 1) ? -1 : 1;
        }
    }

    void sample_powering(bit_reader& r, std::int8_t* out) const {
        const gf2_field& f = *field_;
        int w = f.width();
        for (int copy = 0; copy < folds_; ++copy) {
            std::uint64_t a = r.take(w);
            std::uint64_t b = r.take(w);
            std::uint64_t u = 1;  // a^0
            for (int i = 0; i < m_; ++i) {
                int bit = __builtin_popcountll(u & b) & 1;
                if (copy == 0)
                    out[i] = bit ? -1 : 1;
                else if (bit)
                    out[i] = static_cast<std::int8_t>(-out[i]);
                if (i + 1 < m_) u = f.mul(u, a);
            }
        }
    }

    sign_space_kind kind_ = sign_space_kind::exact_kwise;
    int m_ = 0;
    int k_ = 0;
    int degree_ = 0;
    int folds_ = 1;
    double delta_ = 0.0;
    std::size_t seed_length_ = 0;
    std::shared_ptr<const gf2_field> field_;
    std::shared_ptr<const sign_space> exact_part_;
    std::shared_ptr<const sign_space> bias_part_;
};

inline nlohmann::json sign_space::descriptor() const {
    nlohmann::json j;
    j["schema"] = "prgkit/sign-space";
    j["version"] = kSchemaVersion;
    j["kind"] = to_string(kind_);
    j["m"] = m_;
    j["k"] = k_;
    j["delta"] = delta_;
    j["seed_length"] = seed_length_;
    if (field_) {
        j["field_width"] = field_->width();
        j["field_modulus_low"] = field_->modulus_low_terms();
    }
    switch (kind_) {
        case sign_space_kind::exact_kwise:
            j["construction"] = "gf2-poly-eval";
            j["poly_degree"] = degree_;
            break;
        case sign_space_kind::small_bias:
            j["construction"] = "gf2-powering";
            j["folds"] = folds_;
            j["bias_bound"] = bias_bound();
            break;
        case sign_space_kind::almost_kwise:
            if (exact_part_) {
                j["construction"] = "product-exact4-small-bias";
                j["exact_factor"] = exact_part_->descriptor();
                if (bias_part_) j["bias_factor"] = bias_part_->descriptor();
            } else {
                j["construction"] = "gf2-poly-eval";
                j["poly_degree"] = degree_;
            }
            break;
    }
    return j;
}

inline sign_space sign_space::from_descriptor(const nlohmann::json& j) {
    if (j.value("schema", "") != "prgkit/sign-space")
        throw format_error("sign_space descriptor: wrong schema");
    std::string kind = j.at("kind").get<std::string>();
    int m = j.at("m").get<int>();
    int k = j.at("k").get<int>();
    double delta = j.at("delta").get<double>();
    sign_space s = kind == "exact-kwise"  ? exact_kwise(m, k)
                   : kind == "small-bias" ? small_bias(m, delta)
                                          : almost_kwise(m, k, delta);
    if (s.seed_length() != j.at("seed_length").get<std::size_t>())
        throw format_error("sign_space descriptor: seed length does not match construction");
    return s;
}

}  // namespace prgkit
