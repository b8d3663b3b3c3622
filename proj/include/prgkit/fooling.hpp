#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "prgkit/common.hpp"
#include "prgkit/derand.hpp"
#include "prgkit/generator.hpp"
#include "prgkit/rational.hpp"
#include "prgkit/rng.hpp"
#include "prgkit/stats.hpp"
#include "prgkit/threshold.hpp"

namespace prgkit {

// Type-erased sign generator under measurement.
class sign_generator {
public:
    virtual ~sign_generator() = default;
    virtual int dimension() const = 0;
    virtual std::size_t seed_length() const = 0;
    virtual void generate_into(const seed& s, std::int8_t* out) const = 0;
    virtual std::string id() const = 0;
};

class main_sign_generator final : public sign_generator {
public:
    explicit main_sign_generator(generator_spec g) : g_(std::move(g)) {}
    int dimension() const override { return g_.dimension(); }
    std::size_t seed_length() const override { return g_.seed_length(); }
    void generate_into(const seed& s, std::int8_t* out) const override {
        g_.generate_into(s, out);
    }
    std::string id() const override {
        return std::string("bucketed/") + to_string(g_.mode()) + "/n" +
               std::to_string(g_.dimension()) + "/t" + std::to_string(g_.bucket_count());
    }
    const generator_spec& spec() const { return g_; }

private:
    generator_spec g_;
};

class derand_sign_generator final : public sign_generator {
public:
    explicit derand_sign_generator(derand_spec d) : d_(std::move(d)) {}
    int dimension() const override { return d_.dimension(); }
    std::size_t seed_length() const override { return d_.seed_length(); }
    void generate_into(const seed& s, std::int8_t* out) const override {
        d_.generate_into(s, out);
    }
    std::string id() const override {
        return "derand/n" + std::to_string(d_.dimension()) + "/t" +
               std::to_string(d_.inner().bucket_count());
    }
    const derand_spec& spec() const { return d_; }

private:
    derand_spec d_;
};

// Boolean test function over sign vectors; eval returns +-1.
struct test_function {
    std::string id;
    int n = 0;
    std::function<int(std::span<const std::int8_t>)> eval;

    static test_function from(const halfspace& h, std::string name = "halfspace") {
        return {std::move(name), h.dimension(),
                [h](std::span<const std::int8_t> x) { return h.evaluate(x); }};
    }
    static test_function from(const ptf& f, std::string name = "ptf") {
        return {std::move(name), f.dimension(),
                [f](std::span<const std::int8_t> x) { return f.evaluate(x); }};
    }
    static test_function constant(int n, int value, std::string name = "constant") {
        return {std::move(name), n, [value](std::span<const std::int8_t>) { return value; }};
    }
};

enum class fool_method { exact, monte_carlo };

struct fooling_options {
    fool_method method = fool_method::exact;
    std::uint64_t budget = 1000000;  // per side, monte-carlo only
    int input_cap = kDefaultInputCap;
    int seed_cap = kDefaultSeedCap;
    std::uint64_t harness_seed = 1;
    int threads = 1;
    double confidence = 0.99;
    double eps_target = 0.0;  // recorded in the report
};

struct fooling_report {
    std::string function_id;
    std::string generator_id;
    double eps_target = 0.0;
    std::string method;  // "exact" or "monte-carlo"
    double uniform_estimate = 0.0;
    double generator_estimate = 0.0;
    double error = 0.0;
    std::string uniform_fraction;    // exact mode only
    std::string generator_fraction;  // exact mode only
    std::string error_fraction;      // exact mode only
    std::uint64_t uniform_samples = 0;
    std::uint64_t generator_samples = 0;
    double ci_half_width_uniform = 0.0;
    double ci_half_width_generator = 0.0;
    double ci_half_width_combined = 0.0;
    double confidence = 0.0;
    std::uint64_t harness_seed = 0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema"] = "prgkit/fooling-report";
        j["version"] = kSchemaVersion;
        j["function_id"] = function_id;
        j["generator_id"] = generator_id;
        j["eps_target"] = eps_target;
        j["method"] = method;
        j["uniform_estimate"] = uniform_estimate;
        j["generator_estimate"] = generator_estimate;
        j["error"] = error;
        if (!uniform_fraction.empty()) {
            j["uniform_fraction"] = uniform_fraction;
            j["generator_fraction"] = generator_fraction;
            j["error_fraction"] = error_fraction;
        }
        j["uniform_samples"] = uniform_samples;
        j["generator_samples"] = generator_samples;
        j["ci_half_width_uniform"] = ci_half_width_uniform;
        j["ci_half_width_generator"] = ci_half_width_generator;
        j["ci_half_width_combined"] = ci_half_width_combined;
        j["confidence"] = confidence;
        j["harness_seed"] = harness_seed;
        return j;
    }

    static fooling_report from_json(const nlohmann::json& j) {
        if (j.value("schema", "") != "prgkit/fooling-report")
            throw format_error("fooling report: wrong schema");
        fooling_report r;
        r.function_id = j.at("function_id").get<std::string>();
        r.generator_id = j.at("generator_id").get<std::string>();
        r.eps_target = j.at("eps_target").get<double>();
        r.method = j.at("method").get<std::string>();
        r.uniform_estimate = j.at("uniform_estimate").get<double>();
        r.generator_estimate = j.at("generator_estimate").get<double>();
        r.error = j.at("error").get<double>();
        r.uniform_fraction = j.value("uniform_fraction", "");
        r.generator_fraction = j.value("generator_fraction", "");
        r.error_fraction = j.value("error_fraction", "");
        r.uniform_samples = j.at("uniform_samples").get<std::uint64_t>();
        r.generator_samples = j.at("generator_samples").get<std::uint64_t>();
        r.ci_half_width_uniform = j.at("ci_half_width_uniform").get<double>();
        r.ci_half_width_generator = j.at("ci_half_width_generator").get<double>();
        r.ci_half_width_combined = j.at("ci_half_width_combined").get<double>();
        r.confidence = j.at("confidence").get<double>();
        r.harness_seed = j.at("harness_seed").get<std::uint64_t>();
        return r;
    }

    static std::string csv_header() {
        return "function_id,generator_id,eps_target,method,uniform_estimate,generator_estimate,"
               "error,uniform_fraction,generator_fraction,error_fraction,uniform_samples,"
               "generator_samples,ci_half_width_uniform,ci_half_width_generator,"
               "ci_half_width_combined,confidence,harness_seed";
    }
    std::string csv_row() const;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Deterministic chunked fan-out: the work is split into a fixed number of
// chunks with chunk-indexed child RNGs, so results do not depend on the
// thread count.
inline constexpr int kChunks = 64;

template <typename Body>
void run_chunks(int threads, Body&& body) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int c = 0; c < kChunks; ++c) body(c);
        return;
    }
    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int c = cursor.fetch_add(1);
                if (c >= kChunks) return;
                body(c);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

inline std::string fooling_report::csv_row() const {
    using detail::format_double;
    std::string row;
    row += function_id + ',' + generator_id + ',';
    row += format_double(eps_target) + ',' + method + ',';
    row += format_double(uniform_estimate) + ',' + format_double(generator_estimate) + ',';
    row += format_double(error) + ',';
    row += uniform_fraction + ',' + generator_fraction + ',' + error_fraction + ',';
    row += std::to_string(uniform_samples) + ',' + std::to_string(generator_samples) + ',';
    row += format_double(ci_half_width_uniform) + ',' + format_double(ci_half_width_generator) +
           ',' + format_double(ci_half_width_combined) + ',';
    row += format_double(confidence) + ',' + std::to_string(harness_seed);
    return row;
}

// Fooling error measured exactly (full enumeration of both the input space
// and the seed space) or by Monte-Carlo with two-sided binomial confidence
// intervals. Estimates and error are acceptance probabilities Pr[f = 1].
inline fooling_report fooling_error(const test_function& f, const sign_generator& gen,
                                    const fooling_options& opt) {
    require(f.n == gen.dimension(), "fooling_error: dimension mismatch");
    fooling_report rep;
    rep.function_id = f.id;
    rep.generator_id = gen.id();
    rep.eps_target = opt.eps_target;
    rep.harness_seed = opt.harness_seed;
    rep.confidence = opt.confidence;

    if (opt.method == fool_method::exact) {
        if (f.n > opt.input_cap)
            throw cap_exceeded("fooling_error: input cap " + std::to_string(opt.input_cap) +
                               " exceeded (n = " + std::to_string(f.n) +
                               "); use monte-carlo with a budget around 100/eps^2");
        if (gen.seed_length() > static_cast<std::size_t>(opt.seed_cap))
            throw cap_exceeded("fooling_error: seed cap " + std::to_string(opt.seed_cap) +
                               " exceeded (seed = " + std::to_string(gen.seed_length()) +
                               " bits); use monte-carlo with a budget around 100/eps^2");
        rep.method = "exact";
        std::vector<std::int8_t> x(f.n);
        std::uint64_t u_total = std::uint64_t{1} << f.n, u_acc = 0;
        for (std::uint64_t v = 0; v < u_total; ++v) {
            for (int i = 0; i < f.n; ++i) x[i] = (v >> i) & 1 ? 1 : -1;
            if (f.eval(x) == 1) ++u_acc;
        }
        std::uint64_t g_total = std::uint64_t{1} << gen.seed_length(), g_acc = 0;
        for (std::uint64_t v = 0; v < g_total; ++v) {
            gen.generate_into(seed::from_uint(gen.seed_length(), v), x.data());
            if (f.eval(x) == 1) ++g_acc;
        }
        rational pu{bigint(u_acc), bigint(u_total)};
        rational pg{bigint(g_acc), bigint(g_total)};
        rational err = rational_abs(pu - pg);
        rep.uniform_estimate = to_double(pu);
        rep.generator_estimate = to_double(pg);
        rep.error = to_double(err);
        rep.uniform_fraction = fraction_string(pu);
        rep.generator_fraction = fraction_string(pg);
        rep.error_fraction = fraction_string(err);
        rep.uniform_samples = u_total;
        rep.generator_samples = g_total;
        return rep;
    }

    rep.method = "monte-carlo";
    harness_rng root(opt.harness_seed);
    std::uint64_t per_chunk = opt.budget / detail::kChunks;
    std::uint64_t extra = opt.budget % detail::kChunks;
    std::vector<std::uint64_t> u_acc(detail::kChunks, 0), g_acc(detail::kChunks, 0);
    detail::run_chunks(opt.threads, [&](int c) {
        std::uint64_t quota = per_chunk + (static_cast<std::uint64_t>(c) < extra ? 1 : 0);
        harness_rng rng_u = root.child(2 * c);
        harness_rng rng_g = root.child(2 * c + 1);
        std::vector<std::int8_t> x(f.n);
        for (std::uint64_t i = 0; i < quota; ++i) {
            for (int j = 0; j < f.n; ++j) x[j] = (rng_u.next_u64() & 1) ? 1 : -1;
            if (f.eval(x) == 1) ++u_acc[c];
        }
        for (std::uint64_t i = 0; i < quota; ++i) {
            gen.generate_into(rng_g.next_seed(gen.seed_length()), x.data());
            if (f.eval(x) == 1) ++g_acc[c];
        }
    });
    std::uint64_t u_sum = 0, g_sum = 0;
    for (int c = 0; c < detail::kChunks; ++c) u_sum += u_acc[c], g_sum += g_acc[c];
    rep.uniform_samples = opt.budget;
    rep.generator_samples = opt.budget;
    rep.uniform_estimate = static_cast<double>(u_sum) / static_cast<double>(opt.budget);
    rep.generator_estimate = static_cast<double>(g_sum) / static_cast<double>(opt.budget);
    rep.error = std::abs(rep.uniform_estimate - rep.generator_estimate);
    rep.ci_half_width_uniform = clopper_pearson(u_sum, opt.budget, opt.confidence).half_width();
    rep.ci_half_width_generator = clopper_pearson(g_sum, opt.budget, opt.confidence).half_width();
    rep.ci_half_width_combined = rep.ci_half_width_uniform + rep.ci_half_width_generator;
    return rep;
}

}  // namespace prgkit
