#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "prgkit/generator.hpp"
#include "prgkit/robp_prg.hpp"

namespace prgkit {

// Derandomized variant of the bucketed generator: instead of t independent
// block seeds, a single short seed is stretched through a branching-program
// generator whose words become the block seeds. Seed layout: hash member
// bits, then the stretch seed.
class derand_spec {
public:
    derand_spec(generator_spec inner, robp_prg prg)
        : inner_(std::move(inner)), prg_(std::move(prg)) {
        require(prg_.word_bits() == static_cast<int>(inner_.block().seed_length()),
                "derand: stretch word size must equal the block seed length");
        require(prg_.length() == static_cast<int>(inner_.bucket_count()),
                "derand: stretch length must equal the bucket count");
        seed_length_ = inner_.hash().seed_length() + prg_.seed_length();
    }

    const generator_spec& inner() const { return inner_; }
    const robp_prg& prg() const { return prg_; }
    std::size_t seed_length() const { return seed_length_; }
    int dimension() const { return inner_.dimension(); }

    std::vector<std::int8_t> generate(const seed& s) const {
        std::vector<std::int8_t> x(inner_.dimension());
        generate_into(s, x.data());
        return x;
    }

    void generate_into(const seed& s, std::int8_t* x) const {
        require(s.length() == seed_length_, "derand: seed length mismatch (want " +
                                                std::to_string(seed_length_) + " bits, got " +
                                                std::to_string(s.length()) + ")");
        std::size_t hash_bits = inner_.hash().seed_length();
        std::size_t r0 = inner_.block().seed_length();
        bit_reader r(s);
        seed inner_seed(inner_.seed_length());
        for (std::size_t pos = 0; pos < hash_bits; pos += 64) {
            std::size_t chunk = std::min<std::size_t>(64, hash_bits - pos);
            inner_seed.set_bits(pos, chunk, r.take(chunk));
        }
        thread_local std::vector<std::uint64_t> words;
        words.resize(prg_.length());
        prg_.expand_into(r.take_seed(prg_.seed_length()), words.data());
        for (int i = 0; i < prg_.length(); ++i) {
            std::size_t pos = hash_bits + static_cast<std::size_t>(i) * r0;
            for (std::size_t off = 0; off < r0; off += 64) {
                std::size_t chunk = std::min<std::size_t>(64, r0 - off);
                inner_seed.set_bits(pos + off, chunk, words[i] >> off);
            }
        }
        inner_.generate_into(inner_seed, x);
    }

    nlohmann::json descriptor() const {
        nlohmann::json j;
        j["schema"] = "prgkit/derand-generator";
        j["version"] = kSchemaVersion;
        j["seed_length"] = seed_length_;
        j["seed_layout"] = "hash | stretch seed";
        j["inner"] = inner_.descriptor();
        j["stretch"] = prg_.descriptor();
        return j;
    }

    static derand_spec from_descriptor(const nlohmann::json& j) {
        if (j.value("schema", "") != "prgkit/derand-generator")
            throw format_error("derand descriptor: wrong schema");
        derand_spec d(generator_spec::from_descriptor(j.at("inner")),
                      robp_prg::from_descriptor(j.at("stretch")));
        if (d.seed_length() != j.at("seed_length").get<std::size_t>())
            throw format_error("derand descriptor: seed length does not match construction");
        return d;
    }

private:
    generator_spec inner_;
    robp_prg prg_;
    std::size_t seed_length_ = 0;
};

}  // namespace prgkit
