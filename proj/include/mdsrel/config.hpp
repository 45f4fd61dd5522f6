#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdsrel/inner_code.hpp"
#include "mdsrel/retrieval.hpp"
#include "mdsrel/sequencing.hpp"

namespace mdsrel {

// Invalid configuration input; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat INI-style experiment configuration.
//
// Grammar: `[section]` headers, `key = value` pairs, `#`/`;` comments, blank
// lines ignored. Sections: code, channel, bound, run. Unknown sections or
// keys are rejected. Values are plain scalars; lists are comma-separated.
struct ExperimentConfig {
    // [code]
    std::optional<int> n_prime;
    std::optional<int> k_prime;
    std::optional<int> m;
    std::optional<int64_t> N;
    std::optional<int64_t> K;
    std::optional<int> M;

    // [channel]
    std::optional<double> epsilon;
    std::optional<std::string> model;  // "multinomial" | "poisson"
    std::optional<int64_t> r_all;
    std::optional<double> lambda;
    std::optional<double> xi;
    std::optional<std::string> p_file;
    std::optional<uint64_t> seed;

    // [bound]
    std::optional<std::string> r_prime;  // "auto" or integer
    std::optional<double> trunc_eps;

    // [run]
    std::optional<int64_t> trials;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<double> delta_th;
    std::optional<int64_t> r_all_from;
    std::optional<int64_t> r_all_to;
    std::optional<int64_t> r_all_step;
    std::optional<double> depth;
    std::optional<double> depth_from;
    std::optional<double> depth_to;
    std::optional<double> depth_step;
    std::optional<double> rho_out_from;
    std::optional<double> rho_out_to;
    std::optional<double> rho_out_step;
    std::optional<std::vector<int>> t_list;
    std::optional<int> t_max;
    std::optional<double> lambda_lo;
    std::optional<double> lambda_hi;
    std::optional<std::string> profile_file;
    std::optional<int> r_max;

    // Typed accessors with validation; all throw ConfigError on missing or
    // inconsistent values.
    InnerCode inner_code() const;
    OuterCode outer_code() const;
    double epsilon_value() const;
    uint64_t seed_value() const;              // default 0
    int resolved_r_prime() const;             // 0 = auto
    double trunc_eps_value() const;           // default 1e-12
    std::vector<double> resolve_probs(int64_t n) const;  // p_file > xi > uniform
    SamplingSpec sampling_spec() const;       // uses model / r_all / lambda
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace mdsrel
