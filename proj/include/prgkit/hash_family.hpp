#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "prgkit/bits.hpp"
#include "prgkit/common.hpp"
#include "prgkit/gf2.hpp"
#include "prgkit/rng.hpp"

namespace prgkit {

// Requested balance target (K, L, beta): over a random member, any set S of
// at most K indices should put L or more of its elements into one bucket
// with probability at most beta. q is the independence order of the bucket
// mixing polynomial used to chase that target; balance_check measures what
// a family actually attains.
struct balance_profile {
    std::uint64_t K = 0;
    int L = 0;
    double beta = 0.0;
    int q = 2;
};

// Families of hash functions [n] -> [t], n and t powers of two, t | n.
//
// Every member is a field permutation u = a*j + b over GF(2^w) (w = log2 n,
// a != 0) followed by a balanced projection, so each bucket receives exactly
// n/t indices. Two members collide on a fixed pair i != j and bucket k with
// probability at most 1/t^2 over a random member, i.e. the family is
// pairwise independent with slack alpha = 0.
//
// The balanced variant additionally XORs the bucket with g(low bits of u),
// where g is a uniformly random polynomial of degree < q over a field
// covering the low bits. The XOR keeps every member a bijection (so buckets
// stay exactly even) while giving sets of indices with distinct low parts
// q-wise independent bucket assignments, which concentrates bucket loads.
//
// Seed layout: a | b | g coefficients (balanced only). The w-bit pattern
// a = 0 is remapped to a = 1; the pairwise bound above already accounts for
// the doubled member.
class hash_family {
public:
    static hash_family pairwise(std::uint64_t n, std::uint64_t t) {
        return make(n, t, std::nullopt);
    }

    static hash_family balanced(std::uint64_t n, std::uint64_t t, balance_profile p) {
        require(p.q >= 1, "hash_family: mixing order q >= 1");
        return make(n, t, p);
    }

    std::uint64_t domain_size() const { return n_; }
    std::uint64_t bucket_count() const { return t_; }
    double alpha() const { return 0.0; }
    std::size_t seed_length() const { return seed_length_; }
    const std::optional<balance_profile>& balance() const { return balance_; }
    int field_width() const { return w_; }

    class member {
    public:
        std::uint32_t bucket(std::uint64_t j) const {
            std::uint64_t u = field_->mul(a_, j) ^ b_;
            std::uint64_t bkt = u >> shift_;
            if (mix_degree_ > 0) {
                std::uint64_t bot = u & bot_mask_;
                std::uint64_t v = g_coeff_[mix_degree_ - 1];
                for (int i = mix_degree_ - 2; i >= 0; --i) v = g_field_->mul(v, bot) ^ g_coeff_[i];
                bkt ^= v & bucket_mask_;
            }
            return static_cast<std::uint32_t>(bkt);
        }

    private:
        friend class hash_family;
        std::uint64_t a_ = 1, b_ = 0;
        std::uint64_t bot_mask_ = 0, bucket_mask_ = 0;
        int shift_ = 0, mix_degree_ = 0;
        const gf2_field* field_ = nullptr;
        const gf2_field* g_field_ = nullptr;
        std::vector<std::uint64_t> g_coeff_;
    };

    member member_from_seed(const seed& s) const {
        require(s.length() == seed_length_, "hash_family: seed length mismatch (want " +
                                                std::to_string(seed_length_) + " bits, got " +
                                                std::to_string(s.length()) + ")");
        bit_reader r(s);
        return member_from_reader(r);
    }

    member member_from_reader(bit_reader& r) const {
        member m;
        m.a_ = r.take(w_);
        if (m.a_ == 0) m.a_ = 1;
        m.b_ = r.take(w_);
        m.field_ = field_.get();
        m.shift_ = w_ - log2t_;
        m.bot_mask_ = (std::uint64_t{1} << m.shift_) - 1;
        m.bucket_mask_ = t_ - 1;
        if (balance_) {
            m.mix_degree_ = balance_->q;
            m.g_field_ = g_field_.get();
            m.g_coeff_.resize(balance_->q);
            for (int i = 0; i < balance_->q; ++i) m.g_coeff_[i] = r.take(g_field_->width());
        }
        return m;
    }

    std::uint32_t eval(const seed& s, std::uint64_t j) const {
        require(j < n_, "hash_family::eval: index out of range");
        return member_from_seed(s).bucket(j);
    }

    nlohmann::json descriptor() const {
        nlohmann::json j;
        j["schema"] = "prgkit/hash-family";
        j["version"] = kSchemaVersion;
        j["n"] = n_;
        j["t"] = t_;
        j["alpha"] = 0.0;
        j["seed_length"] = seed_length_;
        j["field_width"] = w_;
        j["field_modulus_low"] = field_->modulus_low_terms();
        j["construction"] = balance_ ? "affine-feistel-mixed" : "affine-top-bits";
        if (balance_) {
            j["balance"] = {{"K", balance_->K},
                            {"L", balance_->L},
                            {"beta", balance_->beta},
                            {"q", balance_->q},
                            {"mix_field_width", g_field_->width()}};
        }
        return j;
    }

    static hash_family from_descriptor(const nlohmann::json& j) {
        if (j.value("schema", "") != "prgkit/hash-family")
            throw format_error("hash_family descriptor: wrong schema");
        std::uint64_t n = j.at("n").get<std::uint64_t>();
        std::uint64_t t = j.at("t").get<std::uint64_t>();
        hash_family h;
        if (j.contains("balance")) {
            const auto& b = j.at("balance");
            balance_profile p{b.at("K").get<std::uint64_t>(), b.at("L").get<int>(),
                              b.at("beta").get<double>(), b.at("q").get<int>()};
            h = balanced(n, t, p);
        } else {
            h = pairwise(n, t);
        }
        if (h.seed_length() != j.at("seed_length").get<std::size_t>())
            throw format_error("hash_family descriptor: seed length does not match construction");
        return h;
    }

private:
    static hash_family make(std::uint64_t n, std::uint64_t t, std::optional<balance_profile> p) {
        require(n >= 2 && is_pow2(n), "hash_family: n must be a power of two >= 2");
        require(t >= 1 && is_pow2(t) && t <= n, "hash_family: t must be a power of two dividing n");
        hash_family h;
        h.n_ = n;
        h.t_ = t;
        h.w_ = ceil_log2(n);
        h.log2t_ = ceil_log2(t);
        h.field_ = get_gf2_field(h.w_);
        h.balance_ = p;
        h.seed_length_ = 2 * static_cast<std::size_t>(h.w_);
        if (p) {
            int wg = std::max(1, std::max(h.w_ - h.log2t_, h.log2t_));
            h.g_field_ = get_gf2_field(wg);
            h.seed_length_ += static_cast<std::size_t>(p->q) * wg;
        }
        return h;
    }

    std::uint64_t n_ = 0, t_ = 0;
    int w_ = 0, log2t_ = 0;
    std::size_t seed_length_ = 0;
    std::optional<balance_profile> balance_;
    std::shared_ptr<const gf2_field> field_, g_field_;
};

inline std::uint32_t hash_eval(const hash_family& f, const seed& s, std::uint64_t j) {
    return f.eval(s, j);
}

struct balance_check_options {
    int num_sets = 20;              // random index sets to try
    std::uint64_t rng_seed = 1;     // set-sampling seed (harness randomness)
    int member_enumeration_cap = kDefaultSeedCap;
    std::uint64_t member_samples = 1 << 16;  // fallback when the family is too big
};

struct balance_check_report {
    double max_tail = 0.0;          // worst Pr over tried sets
    bool exact = false;             // true if every member was enumerated
    std::uint64_t members = 0;      // members per set (enumerated or sampled)
    std::vector<double> per_set_tail;
};

// Measures max_{S tried} Pr_h[max bucket load from S >= L] for |S| <= K.
// Tries num_sets random K-subsets plus the first K indices. Exhaustive over
// the family when the seed fits under the enumeration cap.
inline balance_check_report balance_check(const hash_family& f, std::uint64_t K, int L,
                                          balance_check_options opt = {}) {
    require(K <= f.domain_size(), "balance_check: K <= n");
    require(K >= 1 && L >= 1, "balance_check: K, L >= 1");
    harness_rng rng(opt.rng_seed);
    std::vector<std::vector<std::uint64_t>> sets;
    {
        std::vector<std::uint64_t> first(K);
        for (std::uint64_t i = 0; i < K; ++i) first[i] = i;
        sets.push_back(first);
    }
    for (int s = 0; s < opt.num_sets; ++s) {
        // Floyd-style K-subset sample
        std::vector<std::uint64_t> pool(f.domain_size());
        for (std::uint64_t i = 0; i < pool.size(); ++i) pool[i] = i;
        std::vector<std::uint64_t> pick;
        for (std::uint64_t i = 0; i < K; ++i) {
            std::uint64_t j = i + rng.next_below(pool.size() - i);
            std::swap(pool[i], pool[j]);
            pick.push_back(pool[i]);
        }
        sets.push_back(pick);
    }

    bool exact = f.seed_length() <= static_cast<std::size_t>(std::min(opt.member_enumeration_cap, 62));
    std::uint64_t members = exact ? (std::uint64_t{1} << f.seed_length()) : opt.member_samples;

    balance_check_report rep;
    rep.exact = exact;
    rep.members = members;
    std::vector<std::uint32_t> load(f.bucket_count());
    std::vector<std::uint64_t> hits(sets.size(), 0);
    for (std::uint64_t idx = 0; idx < members; ++idx) {
        seed s = exact ? seed::from_uint(f.seed_length(), idx) : rng.next_seed(f.seed_length());
        auto m = f.member_from_seed(s);
        for (std::size_t si = 0; si < sets.size(); ++si) {
            std::fill(load.begin(), load.end(), 0);
            std::uint32_t worst = 0;
            for (std::uint64_t j : sets[si]) worst = std::max(worst, ++load[m.bucket(j)]);
            if (worst >= static_cast<std::uint32_t>(L)) ++hits[si];
        }
    }
    for (std::size_t si = 0; si < sets.size(); ++si) {
        rep.per_set_tail.push_back(static_cast<double>(hits[si]) / static_cast<double>(members));
        rep.max_tail = std::max(rep.max_tail, rep.per_set_tail.back());
    }
    return rep;
}

}  // namespace prgkit
