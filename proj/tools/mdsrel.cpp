// Command-line front end: reliability tables, retrieval bounds, Monte Carlo
// sweeps and the two cost optimizers, emitting CSV plus a JSON run manifest.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdsrel/bounds.hpp"
#include "mdsrel/config.hpp"
#include "mdsrel/consensus.hpp"
#include "mdsrel/csv.hpp"
#include "mdsrel/inner_code.hpp"
#include "mdsrel/montecarlo.hpp"
#include "mdsrel/optimizer.hpp"
#include "mdsrel/parallel.hpp"
#include "mdsrel/retrieval.hpp"
#include "mdsrel/sequencing.hpp"
#include "mdsrel/version.hpp"

namespace {

using namespace mdsrel;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitInfeasible = 3;

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Cli {
    std::string config_path;

    // Flag overrides; flags win over config-file values.
    std::optional<int> n_prime, k_prime, m, M, t_max, r_max;
    std::optional<int64_t> N, K, trials, r_all, r_all_from, r_all_to, r_all_step;
    std::optional<double> epsilon, lambda, xi, delta_th, depth, depth_from, depth_to, depth_step;
    std::optional<double> rho_out, rho_out_from, rho_out_to, rho_out_step, lambda_lo, lambda_hi;
    std::optional<double> trunc_eps;
    std::optional<uint64_t> seed;
    std::optional<std::string> model, output, p_file, profile_file, r_prime, t_list, xi_list;

    ExperimentConfig resolve() const {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = parse_config_file(config_path);
        auto put = [](auto& slot, const auto& value) {
            if (value) slot = *value;
        };
        put(cfg.n_prime, n_prime);
        put(cfg.k_prime, k_prime);
        put(cfg.m, m);
        put(cfg.M, M);
        put(cfg.N, N);
        put(cfg.K, K);
        put(cfg.epsilon, epsilon);
        put(cfg.model, model);
        put(cfg.r_all, r_all);
        put(cfg.lambda, lambda);
        put(cfg.xi, xi);
        put(cfg.p_file, p_file);
        put(cfg.seed, seed);
        put(cfg.r_prime, r_prime);
        put(cfg.trunc_eps, trunc_eps);
        put(cfg.trials, trials);
        put(cfg.output, output);
        put(cfg.delta_th, delta_th);
        put(cfg.r_all_from, r_all_from);
        put(cfg.r_all_to, r_all_to);
        put(cfg.r_all_step, r_all_step);
        put(cfg.depth, depth);
        put(cfg.depth_from, depth_from);
        put(cfg.depth_to, depth_to);
        put(cfg.depth_step, depth_step);
        put(cfg.rho_out_from, rho_out_from);
        put(cfg.rho_out_to, rho_out_to);
        put(cfg.rho_out_step, rho_out_step);
        put(cfg.lambda_lo, lambda_lo);
        put(cfg.lambda_hi, lambda_hi);
        put(cfg.profile_file, profile_file);
        put(cfg.r_max, r_max);
        if (rho_out) {
            cfg.rho_out_from = *rho_out;
            cfg.rho_out_to = *rho_out;
            cfg.rho_out_step = 1.0;
        }
        if (t_max) cfg.t_max = *t_max;
        if (t_list) {
            std::vector<int> values;
            std::stringstream ss(*t_list);
            std::string item;
            while (std::getline(ss, item, ',')) values.push_back(std::stoi(item));
            cfg.t_list = values;
        }
        return cfg;
    }

    std::vector<double> xi_values(const ExperimentConfig& cfg) const {
        std::vector<double> values;
        if (xi_list) {
            std::stringstream ss(*xi_list);
            std::string item;
            while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
        }
        if (values.empty()) values.push_back(cfg.xi.value_or(0.0));
        return values;
    }
};

void add_common_flags(CLI::App* cmd, Cli& cli) {
    cmd->add_option("--config", cli.config_path, "INI configuration file");
    cmd->add_option("--epsilon", cli.epsilon, "substitution probability");
    cmd->add_option("--n-prime", cli.n_prime, "inner code length in symbols");
    cmd->add_option("--k-prime", cli.k_prime, "inner code dimension in symbols");
    cmd->add_option("--m", cli.m, "bits per inner symbol");
    cmd->add_option("--N", cli.N, "number of encoded strands");
    cmd->add_option("--K", cli.K, "number of information strands");
    cmd->add_option("--outer-m", cli.M, "outer symbol size in bits");
    cmd->add_option("--model", cli.model, "sampling model: multinomial | poisson");
    cmd->add_option("--r-all", cli.r_all, "total number of reads (multinomial)");
    cmd->add_option("--lambda", cli.lambda, "Poisson mean of the total reads");
    cmd->add_option("--xi", cli.xi, "Dirichlet concentration (0 = uniform)");
    cmd->add_option("--p-file", cli.p_file, "sampling probabilities, one per line");
    cmd->add_option("--seed", cli.seed, "RNG seed");
    cmd->add_option("--r-prime", cli.r_prime, "class threshold: integer or 'auto'");
    cmd->add_option("--trunc-eps", cli.trunc_eps, "state truncation threshold");
    cmd->add_option("--trials", cli.trials, "Monte Carlo trials");
    cmd->add_option("--output", cli.output, "output CSV path");
    cmd->add_option("--r-max", cli.r_max, "largest tabulated read count");
}

std::string resolved_ini(const ExperimentConfig& cfg) {
    std::ostringstream out;
    auto value_str = [](const auto& v) {
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    out << "[code]\n";
    if (cfg.n_prime) out << "n_prime = " << *cfg.n_prime << "\n";
    if (cfg.k_prime) out << "k_prime = " << *cfg.k_prime << "\n";
    if (cfg.m) out << "m = " << *cfg.m << "\n";
    if (cfg.N) out << "N = " << *cfg.N << "\n";
    if (cfg.K) out << "K = " << *cfg.K << "\n";
    if (cfg.M) out << "M = " << *cfg.M << "\n";
    out << "\n[channel]\n";
    if (cfg.epsilon) out << "epsilon = " << value_str(*cfg.epsilon) << "\n";
    if (cfg.model) out << "model = " << *cfg.model << "\n";
    if (cfg.r_all) out << "r_all = " << *cfg.r_all << "\n";
    if (cfg.lambda) out << "lambda = " << value_str(*cfg.lambda) << "\n";
    if (cfg.xi) out << "xi = " << value_str(*cfg.xi) << "\n";
    if (cfg.p_file) out << "p_file = " << *cfg.p_file << "\n";
    if (cfg.seed) out << "seed = " << *cfg.seed << "\n";
    out << "\n[bound]\n";
    if (cfg.r_prime) out << "r_prime = " << *cfg.r_prime << "\n";
    if (cfg.trunc_eps) out << "trunc_eps = " << value_str(*cfg.trunc_eps) << "\n";
    out << "\n[run]\n";
    if (cfg.trials) out << "trials = " << *cfg.trials << "\n";
    if (cfg.output) out << "output = " << *cfg.output << "\n";
    if (cfg.delta_th) out << "delta_th = " << value_str(*cfg.delta_th) << "\n";
    if (cfg.r_all_from) out << "r_all_from = " << *cfg.r_all_from << "\n";
    if (cfg.r_all_to) out << "r_all_to = " << *cfg.r_all_to << "\n";
    if (cfg.r_all_step) out << "r_all_step = " << *cfg.r_all_step << "\n";
    if (cfg.depth) out << "depth = " << value_str(*cfg.depth) << "\n";
    if (cfg.depth_from) out << "depth_from = " << value_str(*cfg.depth_from) << "\n";
    if (cfg.depth_to) out << "depth_to = " << value_str(*cfg.depth_to) << "\n";
    if (cfg.depth_step) out << "depth_step = " << value_str(*cfg.depth_step) << "\n";
    if (cfg.rho_out_from) out << "rho_out_from = " << value_str(*cfg.rho_out_from) << "\n";
    if (cfg.rho_out_to) out << "rho_out_to = " << value_str(*cfg.rho_out_to) << "\n";
    if (cfg.rho_out_step) out << "rho_out_step = " << value_str(*cfg.rho_out_step) << "\n";
    if (cfg.t_list) {
        out << "t_list = ";
        for (size_t i = 0; i < cfg.t_list->size(); ++i) {
            if (i) out << ",";
            out << (*cfg.t_list)[i];
        }
        out << "\n";
    }
    if (cfg.t_max) out << "t_max = " << *cfg.t_max << "\n";
    if (cfg.lambda_lo) out << "lambda_lo = " << value_str(*cfg.lambda_lo) << "\n";
    if (cfg.lambda_hi) out << "lambda_hi = " << value_str(*cfg.lambda_hi) << "\n";
    if (cfg.profile_file) out << "profile_file = " << *cfg.profile_file << "\n";
    if (cfg.r_max) out << "r_max = " << *cfg.r_max << "\n";
    return out.str();
}

class ManifestTimer {
  public:
    ManifestTimer() : start_(std::chrono::steady_clock::now()) {}
    int64_t elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void emit_manifest(const std::string& csv_path, const std::string& subcommand,
                   const ExperimentConfig& cfg, const ManifestTimer& timer,
                   json extra = json::object()) {
    json manifest;
    manifest["generator"] = std::string("mdsrel ") + kVersion;
    manifest["subcommand"] = subcommand;
    manifest["schema_version"] = kCsvSchemaVersion;
    manifest["rng"] = Rng::kAlgorithm;
    manifest["seed"] = cfg.seed.value_or(0);
    manifest["threads"] = thread_count();
    manifest["wall_time_ms"] = timer.elapsed_ms();
    const auto now = std::chrono::system_clock::now();
    manifest["created_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    manifest["config_ini"] = resolved_ini(cfg);
    manifest.update(extra);
    write_manifest(csv_path, manifest);
}

std::string require_output(const ExperimentConfig& cfg) {
    if (!cfg.output) throw ConfigError("[run] output path is required");
    return *cfg.output;
}

int64_t trials_or_default(const ExperimentConfig& cfg) {
    const int64_t trials = cfg.trials.value_or(1000);
    if (trials < 1) throw ConfigError("[run] trials must be >= 1");
    return trials;
}

// eps: consensus error-rate table.
void run_eps(const ExperimentConfig& cfg) {
    ManifestTimer timer;
    const double epsilon = cfg.epsilon_value();
    const int m = cfg.m.value_or(2);
    const int r_max = cfg.r_max.value_or(10);
    if (r_max < 1) throw ConfigError("[run] r_max must be >= 1");
    const auto rates = consensus_rates_upto(epsilon, r_max, m);
    const std::string path = require_output(cfg);
    CsvWriter csv(path);
    csv.write_header({"r", "eps_r", "eps_sym_r", "schema_version"});
    for (const auto& rate : rates) {
        csv.write_row({int64_t{rate.r}, rate.eps_r, rate.eps_sym_r,
                       std::string(kCsvSchemaVersion)});
    }
    emit_manifest(path, "eps", cfg, timer);
}

// inner: per-read-count decoding outcome table.
void run_inner(const ExperimentConfig& cfg) {
    ManifestTimer timer;
    const auto code = cfg.inner_code();
    const int r_max = cfg.r_max.value_or(50);
    const auto table = build_outcome_table(code, cfg.epsilon_value(), r_max);
    const std::string path = require_output(cfg);
    CsvWriter csv(path);
    csv.write_header(
        {"r", "eps_r", "eps_sym_r", "alpha", "beta", "gamma", "schema_version"});
    for (int r = 0; r <= table.r_max(); ++r) {
        const auto& o = table.at(r);
        csv.write_row({int64_t{r}, table.eps_r[static_cast<size_t>(r)],
                       table.eps_sym_r[static_cast<size_t>(r)], o.alpha, o.beta, o.gamma,
                       std::string(kCsvSchemaVersion)});
    }
    emit_manifest(path, "inner", cfg, timer);
}

// retrieve: score PMF for an explicit read profile.
void run_retrieve(const ExperimentConfig& cfg) {
    ManifestTimer timer;
    if (!cfg.profile_file) throw ConfigError("[run] profile_file is required for retrieve");
    std::ifstream in(*cfg.profile_file);
    if (!in) throw ConfigError("cannot open profile file: " + *cfg.profile_file);
    std::vector<int> profile;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        int r;
        if (ss >> r) profile.push_back(r);
    }
    if (profile.empty()) throw ConfigError("profile file holds no read counts");
    const auto outer = cfg.outer_code();
    if (static_cast<int64_t>(profile.size()) != outer.N) {
        throw ConfigError("profile length does not match N");
    }
    int max_r = 1;
    for (int r : profile) max_r = std::max(max_r, r);
    const auto table = build_outcome_table(cfg.inner_code(), cfg.epsilon_value(), max_r);
    const auto dist = score_pmf(profile, table, outer.K);
    const auto clt = clt_success_approx(profile, table, outer.K);

    const std::string path = require_output(cfg);
    CsvWriter csv(path);
    csv.write_header({"score", "probability", "schema_version"});
    for (int64_t s = dist.pmf.first(); s <= dist.pmf.last(); ++s) {
        csv.write_row({s, dist.pmf.at(s), std::string(kCsvSchemaVersion)});
    }
    json extra;
    extra["success_prob"] = dist.success_prob;
    extra["truncation_loss"] = dist.truncation_loss;
    extra["clt_approx"] = clt.approx;
    extra["clt_error_bound"] = clt.error_bound;
    emit_manifest(path, "retrieve", cfg, timer);
    std::cout << "success_prob " << dist.success_prob << " (truncation loss "
              << dist.truncation_loss << ")\n";
}

const std::vector<std::string> kSweepColumns = {
    "r_all",     "lambda",    "bound",      "mass_deficit",    "r_prime",
    "mc_mean",   "mc_stderr", "clt_approx", "clt_error_bound", "truncation_loss",
    "seed",      "schema_version"};

// bound: Theorem-style analytical lower bound at a single read budget.
void run_bound(const ExperimentConfig& cfg) {
    ManifestTimer timer;
    const auto outer = cfg.outer_code();
    auto spec = cfg.sampling_spec();
    bool poissonized = false;
    if (spec.model == SamplingModel::kMultinomial) {
        // The joint recursion needs independent read counts; approximate the
        // fixed-total model by a Poisson total with the same mean.
        spec.model = SamplingModel::kPoisson;
        spec.lambda = static_cast<double>(spec.r_all);
        poissonized = true;
    }
    BoundConfig bound_config;
    bound_config.trunc_eps = cfg.trunc_eps_value();
    bound_config.r_prime = cfg.resolved_r_prime();
    const int table_r = std::max(bound_config.r_prime + 1, cfg.r_max.value_or(16));
    const auto table = build_outcome_table(cfg.inner_code(), cfg.epsilon_value(), table_r);
    const auto result = retrieval_bound(spec, outer, table, bound_config);

    const std::string path = require_output(cfg);
    CsvWriter csv(path);
    csv.write_header(kSweepColumns);
    csv.write_row({int64_t{std::llround(spec.lambda)}, spec.lambda, result.bound,
                   result.mass_deficit, int64_t{result.r_prime}, std::string(), std::string(),
                   std::string(), std::string(), result.truncation_loss,
                   cfg.seed.value_or(0), std::string(kCsvSchemaVersion)});
    json extra;
    extra["poissonized_from_r_all"] = poissonized;
    extra["bound"] = result.bound;
    emit_manifest(path, "bound", cfg, timer);
    std::cout << "bound " << result.bound << " (mass deficit " << result.mass_deficit
              << ", r_prime " << result.r_prime << ")\n";
}

// sweep-reads: bound + Monte Carlo mean across a read-budget range.
void run_sweep_reads(const ExperimentConfig& cfg) {
    ManifestTimer timer;
    if (!cfg.r_all_from || !cfg.r_all_to) {
        throw ConfigError("[run] r_all_from and r_all_to are required for sweep-reads");
    }
    const int64_t from = *cfg.r_all_from;
    const int64_t to = *cfg.r_all_to;
    const int64_t step = cfg.r_all_step.value_or((to - from) / 20 + 1);
    if (from < 0 || to < from || step < 1) throw ConfigError("[run] invalid r_all range");
    const auto outer = cfg.outer_code();
    const int64_t trials = trials_or_default(cfg);

    auto mc_spec = cfg.sampling_spec();
    if (mc_spec.model != SamplingModel::kMultinomial) {
        throw ConfigError("sweep-reads sweeps the multinomial read total; set model = multinomial");
    }
    SamplingSpec bound_spec = mc_spec;
    bound_spec.model = SamplingModel::kPoisson;

    BoundConfig bound_config;
    bound_config.trunc_eps = cfg.trunc_eps_value();
    bound_config.r_prime = cfg.resolved_r_prime();
    auto table = build_outcome_table(cfg.inner_code(), cfg.epsilon_value(),
                                     std::max(16, bound_config.r_prime + 1));
    if (bound_config.r_prime == 0) bound_config.r_prime = choose_r_prime(table);
    TwoClassEvaluator eval(table, bound_config.r_prime, outer.K);

    const std::string path = require_output(cfg);
    CsvWriter csv(path);
    csv.write_header(kSweepColumns);
    json times = json::array();
    for (int64_t r_all = from; r_all <= to; r_all += step) {
        ManifestTimer point_timer;
        bound_spec.lambda = static_cast<double>(r_all);
        const auto bound = retrieval_bound(bound_spec, outer, table, bound_config, eval);
        mc_spec.r_all = r_all;
        const auto stats = mc_sweep_point(mc_spec, outer, table, trials, mc_spec.seed);
        if (bound.bound > stats.mc.mean + 3.0 * stats.mc.stderr_) {
            std::cerr << "WARNING: bound " << bound.bound << " exceeds mc mean "
                      << stats.mc.mean << " + 3 stderr at r_all " << r_all << "\n";
        }
        csv.write_row({r_all, bound_spec.lambda, bound.bound, bound.mass_deficit,
                       int64_t{bound.r_prime}, stats.mc.mean, stats.mc.stderr_, stats.clt_mean,
                       stats.clt_error_bound_mean, bound.truncation_loss, mc_spec.seed,
                       std::string(kCsvSchemaVersion)});
        times.push_back({{"r_all", r_all}, {"ms", point_timer.elapsed_ms()}});
    }
    json extra;
    extra["point_wall_time_ms"] = times;
    extra["trials"] = trials;
    emit_manifest(path, "sweep-reads", cfg, timer);
}

// min-reads: minimum read budget per design point.
void run_min_reads(const ExperimentConfig& cfg, const Cli& cli) {
    ManifestTimer timer;
    if (!cfg.K) throw ConfigError("[code] K is required");
    if (!cfg.k_prime || !cfg.m) throw ConfigError("[code] k_prime and m are required");
    const int k_bits = *cfg.k_prime * *cfg.m;
    ReliabilityTarget target{cfg.delta_th.value_or(1e-6)};

    ChannelModel channel;
    channel.epsilon = cfg.epsilon_value();
    channel.seed = cfg.seed_value();
    const std::vector<int> ts = cfg.t_list.value_or(std::vector<int>{2});
    const double rho_from = cfg.rho_out_from.value_or(0.9);
    const double rho_to = cfg.rho_out_to.value_or(rho_from);
    const double rho_step = cfg.rho_out_step.value_or(0.05);
    const auto xis = cli.xi_values(cfg);

    MinReadsOptions options;
    options.lambda_lo = cfg.lambda_lo.value_or(0.0);
    options.lambda_hi = cfg.lambda_hi.value_or(0.0);
    options.policy.r_prime = cfg.resolved_r_prime();
    if (cfg.trunc_eps) options.policy.trunc_eps = *cfg.trunc_eps;

    const std::string path = require_output(cfg);
    CsvWriter csv(path);
    csv.write_header({"t", "rho_in", "rho_out", "xi", "N", "r_star_all", "depth_star",
                      "monotone_scan", "bound_at_star", "seed", "schema_version"});
    const int64_t micro_step = std::llround(rho_step * 1e6);
    const int64_t micro_from = std::llround(rho_from * 1e6);
    const int64_t micro_to = std::llround(rho_to * 1e6);
    for (int t : ts) {
        for (double xi : xis) {
            channel.xi = xi;
            for (int64_t micro = micro_from; micro <= micro_to; micro += micro_step) {
                const double rho_out = static_cast<double>(micro) * 1e-6;
                const auto design = DesignPoint::make(*cfg.K, k_bits, *cfg.m, t, rho_out);
                const auto result = min_reads(design, channel, target, options);
                csv.write_row({int64_t{t}, design.rho_in, rho_out, xi, design.outer.N,
                               result.lambda_star, result.depth_star,
                               int64_t{result.monotone_scan ? 1 : 0}, result.bound_at_star,
                               channel.seed, std::string(kCsvSchemaVersion)});
            }
        }
    }
    json extra;
    extra["delta_th"] = target.delta_th;
    emit_manifest(path, "min-reads", cfg, timer);
}

// opt-density: densest feasible rate allocation per read depth.
void run_opt_density(const ExperimentConfig& cfg) {
    ManifestTimer timer;
    if (!cfg.K) throw ConfigError("[code] K is required");
    if (!cfg.k_prime || !cfg.m) throw ConfigError("[code] k_prime and m are required");
    const int k_bits = *cfg.k_prime * *cfg.m;
    ReliabilityTarget target{cfg.delta_th.value_or(1e-6)};

    ChannelModel channel;
    channel.epsilon = cfg.epsilon_value();
    channel.seed = cfg.seed_value();
    channel.xi = cfg.xi.value_or(0.0);

    OptDensityGrids grids;
    grids.t_max = cfg.t_max.value_or(20);
    grids.rho_out_lo = cfg.rho_out_from.value_or(0.10);
    grids.rho_out_hi = cfg.rho_out_to.value_or(0.995);
    grids.rho_out_step = cfg.rho_out_step.value_or(0.005);
    BoundPolicy policy;
    policy.r_prime = cfg.resolved_r_prime();
    if (cfg.trunc_eps) policy.trunc_eps = *cfg.trunc_eps;

    std::vector<double> depths;
    if (cfg.depth) depths.push_back(*cfg.depth);
    if (cfg.depth_from && cfg.depth_to) {
        const double step = cfg.depth_step.value_or(0.5);
        if (step <= 0.0) throw ConfigError("[run] depth_step must be positive");
        const int64_t micro_step = std::llround(step * 1e6);
        for (int64_t micro = std::llround(*cfg.depth_from * 1e6);
             micro <= std::llround(*cfg.depth_to * 1e6); micro += micro_step) {
            depths.push_back(static_cast<double>(micro) * 1e-6);
        }
    }
    if (depths.empty()) throw ConfigError("[run] depth or depth_from/depth_to required");

    const std::string path = require_output(cfg);
    CsvWriter csv(path);
    csv.write_header({"depth", "lambda", "feasible", "delta_star", "rho_in_star",
                      "rho_out_star", "t_star", "N_star", "bound_at_star", "seed",
                      "schema_version"});
    bool any_feasible = false;
    for (double depth : depths) {
        const auto result =
            opt_density(*cfg.K, k_bits, *cfg.m, channel, depth, target, grids, policy);
        any_feasible = any_feasible || result.feasible;
        csv.write_row({depth, depth * static_cast<double>(*cfg.K),
                       int64_t{result.feasible ? 1 : 0}, result.delta_star, result.rho_in_star,
                       result.rho_out_star, int64_t{result.t_star}, result.n_star,
                       result.bound_at_star, channel.seed, std::string(kCsvSchemaVersion)});
    }
    json extra;
    extra["delta_th"] = target.delta_th;
    emit_manifest(path, "opt-density", cfg, timer);
    if (!any_feasible) {
        throw InfeasibleError("no feasible design point at any requested depth");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mdsrel: retrieval reliability analysis for inner/outer MDS-coded DNA storage"};
    app.require_subcommand(1);

    Cli cli;
    auto* eps_cmd = app.add_subcommand("eps", "consensus error-rate table");
    auto* inner_cmd = app.add_subcommand("inner", "inner decoding outcome table");
    auto* retrieve_cmd = app.add_subcommand("retrieve", "score PMF for a read profile");
    auto* bound_cmd = app.add_subcommand("bound", "analytical retrieval bound");
    auto* sweep_cmd = app.add_subcommand("sweep-reads", "bound and Monte Carlo versus read total");
    auto* min_cmd = app.add_subcommand("min-reads", "minimum reads for a reliability target");
    auto* opt_cmd = app.add_subcommand("opt-density", "densest feasible rate allocation");
    auto* oracle_cmd = app.add_subcommand("oracle", "run the brute-force validation suites");

    for (auto* cmd : {eps_cmd, inner_cmd, retrieve_cmd, bound_cmd, sweep_cmd, min_cmd, opt_cmd}) {
        add_common_flags(cmd, cli);
    }
    retrieve_cmd->add_option("--profile", cli.profile_file, "read profile file, one count per line");
    sweep_cmd->add_option("--r-all-from", cli.r_all_from, "sweep start");
    sweep_cmd->add_option("--r-all-to", cli.r_all_to, "sweep end (inclusive)");
    sweep_cmd->add_option("--r-all-step", cli.r_all_step, "sweep step");
    min_cmd->add_option("--delta-th", cli.delta_th, "failure threshold");
    min_cmd->add_option("--t-list", cli.t_list, "inner redundancies t, comma separated");
    min_cmd->add_option("--rho-out", cli.rho_out, "single outer rate");
    min_cmd->add_option("--rho-out-from", cli.rho_out_from, "outer rate grid start");
    min_cmd->add_option("--rho-out-to", cli.rho_out_to, "outer rate grid end");
    min_cmd->add_option("--rho-out-step", cli.rho_out_step, "outer rate grid step");
    min_cmd->add_option("--xi-list", cli.xi_list, "Dirichlet concentrations, comma separated");
    min_cmd->add_option("--lambda-lo", cli.lambda_lo, "bracket lower end");
    min_cmd->add_option("--lambda-hi", cli.lambda_hi, "bracket upper end");
    opt_cmd->add_option("--delta-th", cli.delta_th, "failure threshold");
    opt_cmd->add_option("--depth", cli.depth, "single information read depth");
    opt_cmd->add_option("--depth-from", cli.depth_from, "depth sweep start");
    opt_cmd->add_option("--depth-to", cli.depth_to, "depth sweep end");
    opt_cmd->add_option("--depth-step", cli.depth_step, "depth sweep step");
    opt_cmd->add_option("--t-max", cli.t_max, "largest inner redundancy t");
    opt_cmd->add_option("--rho-out-from", cli.rho_out_from, "outer rate grid start");
    opt_cmd->add_option("--rho-out-to", cli.rho_out_to, "outer rate grid end");
    opt_cmd->add_option("--rho-out-step", cli.rho_out_step, "outer rate grid step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e, std::cerr, std::cerr);
        return kExitConfigError;
    }

    try {
        if (oracle_cmd->parsed()) {
            return run_oracles(std::cout) ? kExitOk : 1;
        }
        const auto cfg = cli.resolve();
        if (eps_cmd->parsed()) {
            run_eps(cfg);
        } else if (inner_cmd->parsed()) {
            run_inner(cfg);
        } else if (retrieve_cmd->parsed()) {
            run_retrieve(cfg);
        } else if (bound_cmd->parsed()) {
            run_bound(cfg);
        } else if (sweep_cmd->parsed()) {
            run_sweep_reads(cfg);
        } else if (min_cmd->parsed()) {
            run_min_reads(cfg, cli);
        } else if (opt_cmd->parsed()) {
            run_opt_density(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
