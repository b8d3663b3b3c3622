#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "json.hpp"
#include "prgkit/bits.hpp"
#include "prgkit/common.hpp"
#include "prgkit/gf2.hpp"

namespace prgkit {

// Generator stretching a short seed into T words of D bits for feeding
// branching programs.
//
// The recursive construction halves the block sequence: with k hash levels,
//   expand_k(x, h_1..h_k) = expand_(k-1)(x, ...) followed by
//                           expand_(k-1)(h_k(x), ...)
// so block j applies h_l to the start block for every set bit l-1 of j.
// Hashes are pairwise members a*v + b over GF(2^block_bits). Each output
// word is the low D bits of its block.
//
// Seed layout: start block | a_1 b_1 | ... | a_k b_k, giving the closed-form
// seed length block_bits * (1 + 2 * ceil(log2 T)). The default block size is
// b = D + S + ceil(log2(T / delta)); callers running exhaustive seed-space
// experiments can override it downward.
//
// The identity kind stretches nothing: T*D seed bits split verbatim into
// words. It exists as the zero-error baseline (and the T = 1 recursion base
// behaves the same way: the output is the seed block).
class robp_prg {
public:
    enum class kind { recursive, identity };

    static int default_block_bits(int width_exponent, int word_bits, int length, double delta) {
        require(delta > 0 && delta < 1, "robp_prg: delta in (0,1)");
        if (length == 1) return word_bits;
        int log_term = 0;
        while (std::ldexp(delta, log_term) < static_cast<double>(length)) ++log_term;
        return word_bits + width_exponent + log_term;
    }

    static robp_prg recursive_hashing(int width_exponent, int word_bits, int length, double delta,
                                      int block_bits_override = 0) {
        require(width_exponent >= 0 && word_bits >= 1 && length >= 1,
                "robp_prg: parameters must be positive");
        robp_prg g;
        g.kind_ = kind::recursive;
        g.S_ = width_exponent;
        g.D_ = word_bits;
        g.T_ = length;
        g.delta_ = delta;
        g.block_bits_ = block_bits_override > 0
                            ? block_bits_override
                            : default_block_bits(width_exponent, word_bits, length, delta);
        require(g.block_bits_ >= word_bits, "robp_prg: block must carry at least D bits");
        require(g.block_bits_ <= 32, "robp_prg: block wider than 32 bits is not supported");
        g.levels_ = ceil_log2(static_cast<std::uint64_t>(length));
        g.seed_length_ = static_cast<std::size_t>(g.block_bits_) * (1 + 2 * g.levels_);
        g.field_ = get_gf2_field(g.block_bits_);
        return g;
    }

    static robp_prg identity(int word_bits, int length) {
        require(word_bits >= 1 && length >= 1, "robp_prg: parameters must be positive");
        robp_prg g;
        g.kind_ = kind::identity;
        g.D_ = word_bits;
        g.T_ = length;
        g.block_bits_ = word_bits;
        g.seed_length_ = static_cast<std::size_t>(word_bits) * length;
        return g;
    }

    kind generator_kind() const { return kind_; }
    int width_exponent() const { return S_; }
    int word_bits() const { return D_; }
    int length() const { return T_; }
    double delta() const { return delta_; }
    int block_bits() const { return block_bits_; }
    int levels() const { return levels_; }
    std::size_t seed_length() const { return seed_length_; }

    std::vector<std::uint64_t> expand(const seed& s) const {
        std::vector<std::uint64_t> words(T_);
        expand_into(s, words.data());
        return words;
    }

    void expand_into(const seed& s, std::uint64_t* words) const {
        require(s.length() == seed_length_, "robp_prg: seed length mismatch (want " +
                                                std::to_string(seed_length_) + " bits, got " +
                                                std::to_string(s.length()) + ")");
        std::uint64_t word_mask = (std::uint64_t{1} << D_) - 1;
        if (kind_ == kind::identity) {
            for (int j = 0; j < T_; ++j) words[j] = s.get_bits(static_cast<std::size_t>(j) * D_, D_);
            return;
        }
        bit_reader r(s);
        std::uint64_t x = r.take(block_bits_);
        std::uint64_t ha[32], hb[32];
        for (int l = 0; l < levels_; ++l) {
            ha[l] = r.take(block_bits_);
            if (ha[l] == 0) ha[l] = 1;
            hb[l] = r.take(block_bits_);
        }
        for (int j = 0; j < T_; ++j) {
            std::uint64_t v = x;
            for (int l = levels_; l >= 1; --l)
                if ((j >> (l - 1)) & 1) v = field_->mul(ha[l - 1], v) ^ hb[l - 1];
            words[j] = v & word_mask;
        }
    }

    nlohmann::json descriptor() const {
        nlohmann::json j;
        j["schema"] = "prgkit/robp-prg";
        j["version"] = kSchemaVersion;
        j["kind"] = kind_ == kind::recursive ? "recursive-hashing" : "identity";
        j["word_bits"] = D_;
        j["length"] = T_;
        j["seed_length"] = seed_length_;
        if (kind_ == kind::recursive) {
            j["width_exponent"] = S_;
            j["delta"] = delta_;
            j["block_bits"] = block_bits_;
            j["levels"] = levels_;
        }
        return j;
    }

    static robp_prg from_descriptor(const nlohmann::json& j) {
        if (j.value("schema", "") != "prgkit/robp-prg")
            throw format_error("robp_prg descriptor: wrong schema");
        robp_prg g = j.at("kind").get<std::string>() == "identity"
                         ? identity(j.at("word_bits").get<int>(), j.at("length").get<int>())
                         : recursive_hashing(j.at("width_exponent").get<int>(),
                                             j.at("word_bits").get<int>(),
                                             j.at("length").get<int>(), j.at("delta").get<double>(),
                                             j.at("block_bits").get<int>());
        if (g.seed_length() != j.at("seed_length").get<std::size_t>())
            throw format_error("robp_prg descriptor: seed length does not match construction");
        return g;
    }

private:
    kind kind_ = kind::identity;
    int S_ = 0, D_ = 1, T_ = 1;
    double delta_ = 0.5;
    int block_bits_ = 1, levels_ = 0;
    std::size_t seed_length_ = 0;
    std::shared_ptr<const gf2_field> field_;
};

}  // namespace prgkit
