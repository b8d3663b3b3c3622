#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "prgkit/bits.hpp"
#include "prgkit/common.hpp"
#include "prgkit/hash_family.hpp"
#include "prgkit/sign_space.hpp"

namespace prgkit {

enum class gen_mode { regular_halfspace, halfspace, regular_ptf, ptf, custom };

inline const char* to_string(gen_mode m) {
    switch (m) {
        case gen_mode::regular_halfspace: return "regular-halfspace";
        case gen_mode::halfspace: return "halfspace";
        case gen_mode::regular_ptf: return "regular-ptf";
        case gen_mode::ptf: return "ptf";
        case gen_mode::custom: return "custom";
    }
    return "?";
}

inline gen_mode gen_mode_from_string(const std::string& s) {
    if (s == "regular-halfspace") return gen_mode::regular_halfspace;
    if (s == "halfspace") return gen_mode::halfspace;
    if (s == "regular-ptf") return gen_mode::regular_ptf;
    if (s == "ptf") return gen_mode::ptf;
    if (s == "custom") return gen_mode::custom;
    throw argument_error("unknown generator mode: " + s);
}

struct profile_overrides {
    std::uint64_t t = 0;          // bucket count override (0 = derived)
    double ptf_scale = 1.0;       // multiplier on the ptf-mode bucket count
};

// The bucketed sign generator: a hash member scatters the n coordinates
// into t buckets, and every bucket is filled from an independent draw of
// the block space (positions within a bucket in increasing coordinate
// order). Seed layout: hash member bits, then the t block seeds in bucket
// order.
//
// Mode profiles differ in the bucket count, the block space, and whether
// the hash family carries the load-balance mixing:
//
//   regular-halfspace  t ~ 1/eps^2,              block 4-wise within eps^2/4n^5
//   halfspace          t ~ log^2(1/eps)/eps^2,   block exactly 4-wise and
//                      balanced hash             almost (L+4)-wise, L ~ log t
//   regular-ptf        t ~ 1/eps^2,              block exactly 4d-wise
//   ptf                t ~ log^2(1/eps)/eps^2,   block exactly (t+4d)-wise
//                      balanced hash
//
// Derived sizes are rounded up to powers of two and t never exceeds n.
// Exact independence of order k >= m is realized at order m (identical
// distribution, shorter seed); the requested order is kept in the spec.
class generator_spec {
public:
    static generator_spec profile(gen_mode mode, int n, int d, double eps,
                                  profile_overrides ov = {}) {
        require(eps > 0.0 && eps < 1.0, "profile: eps must be in (0,1)");
        require(n >= 1, "profile: n >= 1");
        require(mode != gen_mode::custom, "profile: custom specs are assembled, not profiled");
        bool needs_d = mode == gen_mode::regular_ptf || mode == gen_mode::ptf;
        require(!needs_d || d >= 1, "profile: degree must be >= 1 in ptf modes");

        generator_spec g;
        g.mode_ = mode;
        g.n_requested_ = n;
        g.n_ = static_cast<int>(next_pow2(static_cast<std::uint64_t>(std::max(n, 2))));
        g.d_ = needs_d ? d : 1;
        g.eps_ = eps;

        double log1e = std::max(1.0, std::log2(1.0 / eps));
        double t_raw = 0.0;
        switch (mode) {
            case gen_mode::regular_halfspace:
            case gen_mode::regular_ptf:
                t_raw = 1.0 / (eps * eps);
                break;
            case gen_mode::halfspace:
                t_raw = log1e * log1e / (eps * eps);
                break;
            case gen_mode::ptf:
                t_raw = ov.ptf_scale * log1e * log1e / (eps * eps);
                break;
            case gen_mode::custom:
                break;
        }
        std::uint64_t t = ov.t ? ov.t : next_pow2(static_cast<std::uint64_t>(std::ceil(t_raw)));
        require(is_pow2(t), "profile: bucket count override must be a power of two");
        t = std::min<std::uint64_t>(t, g.n_);
        g.t_ = t;
        int m = static_cast<int>(g.n_ / t);

        double n5 = std::pow(static_cast<double>(g.n_), 5.0);
        switch (mode) {
            case gen_mode::regular_halfspace: {
                g.block_ = sign_space::almost_kwise(m, 4, eps * eps / (4.0 * n5));
                g.hash_ = hash_family::pairwise(g.n_, t);
                break;
            }
            case gen_mode::halfspace: {
                int L = std::max(1, ceil_log2(t));
                g.block_ = sign_space::almost_kwise(m, L + 4, std::pow(eps, 3) / (t * n5));
                g.hash_ = hash_family::balanced(g.n_, t, balance_target(t, eps));
                break;
            }
            case gen_mode::regular_ptf: {
                g.block_ = sign_space::exact_kwise(m, 4 * d);
                g.hash_ = hash_family::pairwise(g.n_, t);
                break;
            }
            case gen_mode::ptf: {
                g.block_ = sign_space::exact_kwise(m, static_cast<int>(t) + 4 * d);
                g.hash_ = hash_family::balanced(g.n_, t, balance_target(t, eps));
                break;
            }
            case gen_mode::custom:
                break;
        }
        g.finish();
        return g;
    }

    // Assembles a generator from explicit parts; block dimension must equal
    // n / t for the hash family's (n, t).
    static generator_spec custom(hash_family hash, sign_space block) {
        generator_spec g;
        g.mode_ = gen_mode::custom;
        g.n_requested_ = static_cast<int>(hash.domain_size());
        g.n_ = static_cast<int>(hash.domain_size());
        g.t_ = hash.bucket_count();
        require(block.dimension() == static_cast<int>(hash.domain_size() / hash.bucket_count()),
                "custom generator: block dimension must be n/t");
        g.d_ = 1;
        g.eps_ = 0.0;
        g.hash_ = std::move(hash);
        g.block_ = std::move(block);
        g.finish();
        return g;
    }

    gen_mode mode() const { return mode_; }
    int dimension() const { return n_; }
    int requested_dimension() const { return n_requested_; }
    int degree() const { return d_; }
    double eps() const { return eps_; }
    std::uint64_t bucket_count() const { return t_; }
    int block_dimension() const { return block_.dimension(); }
    const hash_family& hash() const { return hash_; }
    const sign_space& block() const { return block_; }
    std::size_t seed_length() const { return seed_length_; }

    std::vector<std::int8_t> generate(const seed& s) const {
        std::vector<std::int8_t> x(n_);
        generate_into(s, x.data());
        return x;
    }

    void generate_into(const seed& s, std::int8_t* x) const {
        require(s.length() == seed_length_, "generator: seed length mismatch (want " +
                                                std::to_string(seed_length_) + " bits, got " +
                                                std::to_string(s.length()) + ")");
        bit_reader r(s);
        auto member = hash_.member_from_reader(r);
        int m = block_.dimension();
        thread_local std::vector<std::uint32_t> position;  // per-coordinate slot in its bucket
        thread_local std::vector<std::uint32_t> bucket_of;
        thread_local std::vector<std::uint32_t> fill;
        thread_local std::vector<std::int8_t> block_out;
        position.resize(n_);
        bucket_of.resize(n_);
        fill.assign(t_, 0);
        block_out.resize(static_cast<std::size_t>(m) * t_);
        for (int j = 0; j < n_; ++j) {
            std::uint32_t b = member.bucket(static_cast<std::uint64_t>(j));
            bucket_of[j] = b;
            position[j] = fill[b]++;
        }
        for (std::uint64_t i = 0; i < t_; ++i) {
            require(fill[i] == static_cast<std::uint32_t>(m),
                    "generator: hash member is not evenly distributed");
            block_.sample_reader(r, block_out.data() + i * m);
        }
        for (int j = 0; j < n_; ++j) x[j] = block_out[bucket_of[j] * m + position[j]];
    }

    // Diagnostic variant exposing the pieces the output was assembled from.
    struct parts {
        std::vector<std::int8_t> x;
        std::vector<std::uint32_t> bucket_of;               // per coordinate
        std::vector<std::vector<std::int8_t>> block_outputs;  // per bucket
    };
    parts generate_parts(const seed& s) const {
        parts p;
        p.x = generate(s);
        bit_reader r(s);
        auto member = hash_.member_from_reader(r);
        p.bucket_of.resize(n_);
        for (int j = 0; j < n_; ++j) p.bucket_of[j] = member.bucket(static_cast<std::uint64_t>(j));
        p.block_outputs.resize(t_);
        for (std::uint64_t i = 0; i < t_; ++i) {
            p.block_outputs[i].resize(block_.dimension());
            block_.sample_reader(r, p.block_outputs[i].data());
        }
        return p;
    }

    nlohmann::json descriptor() const {
        nlohmann::json j;
        j["schema"] = "prgkit/generator";
        j["version"] = kSchemaVersion;
        j["mode"] = to_string(mode_);
        j["n"] = n_;
        j["n_requested"] = n_requested_;
        j["d"] = d_;
        j["eps"] = eps_;
        j["t"] = t_;
        j["seed_length"] = seed_length_;
        j["seed_layout"] = "hash | block seeds in bucket order";
        j["hash"] = hash_.descriptor();
        j["block"] = block_.descriptor();
        return j;
    }

    static generator_spec from_descriptor(const nlohmann::json& j) {
        if (j.value("schema", "") != "prgkit/generator")
            throw format_error("generator descriptor: wrong schema");
        generator_spec g = custom(hash_family::from_descriptor(j.at("hash")),
                                  sign_space::from_descriptor(j.at("block")));
        g.mode_ = gen_mode_from_string(j.at("mode").get<std::string>());
        g.n_requested_ = j.at("n_requested").get<int>();
        g.d_ = j.at("d").get<int>();
        g.eps_ = j.at("eps").get<double>();
        if (g.seed_length() != j.at("seed_length").get<std::size_t>())
            throw format_error("generator descriptor: seed length does not match construction");
        return g;
    }

private:
    static balance_profile balance_target(std::uint64_t t, double eps) {
        int log1e = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / eps))));
        balance_profile p;
        p.K = t;
        p.L = 2 * log1e + 2;
        p.beta = 1.0 / (static_cast<double>(t) * static_cast<double>(t));
        p.q = std::max(2, log1e);
        return p;
    }

    void finish() {
        seed_length_ = hash_.seed_length() + t_ * block_.seed_length();
    }

    gen_mode mode_ = gen_mode::custom;
    int n_requested_ = 0;
    int n_ = 0;
    int d_ = 1;
    double eps_ = 0.0;
    std::uint64_t t_ = 1;
    hash_family hash_;
    sign_space block_;
    std::size_t seed_length_ = 0;
};

}  // namespace prgkit
