#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "prgkit/generator.hpp"
#include "prgkit/sign_space.hpp"

namespace prgkit {

// In-place unnormalized Walsh-Hadamard butterfly; multiplies by sqrt(n) * H
// where H is the symmetric orthonormal matrix of +-1/sqrt(n) entries.
template <typename T>
void fwht_unnormalized(std::vector<T>& v) {
    require(!v.empty() && is_pow2(v.size()), "fwht: length must be a power of two");
    for (std::size_t half = 1; half < v.size(); half <<= 1) {
        for (std::size_t block = 0; block < v.size(); block += 2 * half) {
            for (std::size_t i = block; i < block + half; ++i) {
                T a = v[i], b = v[i + half];
                v[i] = a + b;
                v[i + half] = a - b;
            }
        }
    }
}

// Normalized transform: v <- H v, entries of H are +-1/sqrt(n). Applying it
// twice returns the input (H is symmetric and orthonormal).
inline void hadamard_transform(std::vector<double>& v) {
    fwht_unnormalized(v);
    double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (double& x : v) x *= scale;
}

// Unit-sphere generator: a sign vector x from an exact 8-wise space picks a
// rotation D(x)H, which is applied to the scaled output of the inner
// regular-halfspace generator. Outputs are exactly unit vectors: every
// entry is an integer multiple of 1/n and the squared entries sum to n^2/n^2
// in integer arithmetic.
class sphere_spec {
public:
    static sphere_spec make(int n, double eps) {
        require(n >= 2 && is_pow2(static_cast<std::uint64_t>(n)),
                "sphere: n must be a power of two (pad the ambient dimension)");
        sphere_spec s;
        s.n_ = n;
        s.x_space_ = sign_space::exact_kwise(n, 8);
        s.inner_ = generator_spec::profile(gen_mode::regular_halfspace, n, 1, eps);
        return s;
    }

    int dimension() const { return n_; }
    const sign_space& rotation_space() const { return x_space_; }
    const generator_spec& inner() const { return inner_; }
    std::size_t rotation_seed_length() const { return x_space_.seed_length(); }
    std::size_t inner_seed_length() const { return inner_.seed_length(); }

    // Integer form: n times the output vector.
    std::vector<std::int64_t> generate_scaled(const seed& x_seed, const seed& y_seed) const {
        thread_local std::vector<std::int8_t> signs, u;
        signs.resize(n_);
        u.resize(n_);
        x_space_.sample_into(x_seed, signs.data());
        inner_.generate_into(y_seed, u.data());
        std::vector<std::int64_t> v(n_);
        for (int i = 0; i < n_; ++i) v[i] = u[i];
        fwht_unnormalized(v);
        for (int i = 0; i < n_; ++i) v[i] *= signs[i];
        return v;
    }

    std::vector<double> generate(const seed& x_seed, const seed& y_seed) const {
        std::vector<std::int64_t> v = generate_scaled(x_seed, y_seed);
        std::vector<double> out(n_);
        double inv = 1.0 / static_cast<double>(n_);
        for (int i = 0; i < n_; ++i) out[i] = static_cast<double>(v[i]) * inv;
        return out;
    }

    nlohmann::json descriptor() const {
        nlohmann::json j;
        j["schema"] = "prgkit/sphere-generator";
        j["version"] = kSchemaVersion;
        j["n"] = n_;
        j["rotation"] = x_space_.descriptor();
        j["inner"] = inner_.descriptor();
        j["seed_length_rotation"] = x_space_.seed_length();
        j["seed_length_inner"] = inner_.seed_length();
        return j;
    }

private:
    int n_ = 0;
    sign_space x_space_;
    generator_spec inner_;
};

}  // namespace prgkit
