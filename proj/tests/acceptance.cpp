// Acceptance suite: one self-contained check per shipping criterion, each
// printing a single [PASS]/[FAIL] line. Run with no arguments for the full
// suite or with a criterion number for a single check.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <vector>

#include "mdsrel/bounds.hpp"
#include "mdsrel/consensus.hpp"
#include "mdsrel/inner_code.hpp"
#include "mdsrel/montecarlo.hpp"
#include "mdsrel/optimizer.hpp"
#include "mdsrel/parallel.hpp"
#include "mdsrel/retrieval.hpp"
#include "mdsrel/sequencing.hpp"

namespace {

using namespace mdsrel;
using Clock = std::chrono::steady_clock;

struct Checker {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool condition, const std::string& note) {
        if (!condition) {
            ok = false;
            notes.push_back(note);
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int criterion, const char* name, const Checker& c, double elapsed_s,
            double budget_s) {
    std::cout << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << name
              << " (" << elapsed_s << " s";
    if (budget_s > 0.0) std::cout << " / budget " << budget_s << " s";
    std::cout << ")\n";
    for (const auto& note : c.notes) std::cout << "       - " << note << "\n";
}

// ---------------------------------------------------------------------------
// 1. Consensus closed-form identities.
bool criterion1() {
    const auto start = Clock::now();
    Checker c;
    for (double eps : {0.001, 0.01, 0.1}) {
        c.require(std::abs(consensus_error_rate(eps, 1) - eps) < 1e-12,
                  "single read must pass the channel through");
        c.require(std::abs(consensus_error_rate(eps, 2) - eps) < 1e-12,
                  "two reads must be tie-neutral");
        const double closed = 1.0 - (std::pow(1.0 - eps, 3) +
                                     3.0 * eps * std::pow(1.0 - eps, 2) +
                                     (2.0 / 3.0) * eps * eps * (1.0 - eps));
        c.require(std::abs(consensus_error_rate(eps, 3) - closed) < 1e-12,
                  "three-read closed form mismatch");
    }
    const double elapsed = seconds_since(start);
    c.require(elapsed < 1.0, "runtime budget exceeded");
    report(1, "consensus identities", c, elapsed, 1.0);
    return c.ok;
}

// 2. Consensus vs 1e6-trial channel simulation.
bool criterion2() {
    const auto start = Clock::now();
    Checker c;
    uint64_t seed = 1000;
    for (double eps : {0.05, 0.1}) {
        for (int r : {3, 5, 7}) {
            const auto mc = simulate_consensus(eps, r, 1000000, seed++);
            const double exact = consensus_error_rate(eps, r);
            c.require(std::abs(mc.mean - exact) <= 4.0 * mc.stderr_,
                      "simulation off at eps " + std::to_string(eps) + ", r " +
                          std::to_string(r));
        }
    }
    const double elapsed = seconds_since(start);
    c.require(elapsed < 30.0, "runtime budget exceeded");
    report(2, "consensus vs monte carlo", c, elapsed, 30.0);
    return c.ok;
}

// 3. Inner decoding outcomes vs the exhaustive prime-field census.
bool criterion3() {
    const auto start = Clock::now();
    Checker c;
    const auto code = InnerCode::with_alphabet(4, 2, 5);
    for (double eps_sym : {0.05, 0.2}) {
        const auto census = brute_force_inner(code, eps_sym);
        const auto analytic = outcome_probs(code, eps_sym);
        c.require(std::abs(analytic.alpha - census.outcome.alpha) < 1e-12, "alpha mismatch");
        c.require(std::abs(analytic.beta - census.outcome.beta) < 1e-12, "beta mismatch");
        c.require(std::abs(analytic.gamma - census.outcome.gamma) < 1e-12, "gamma mismatch");
        for (int i = code.t + 1; i <= code.n_sym; ++i) {
            c.require(std::abs(miscorrection_fraction(code, i) -
                               census.eta[static_cast<size_t>(i)]) < 1e-12,
                      "eta mismatch at weight " + std::to_string(i));
        }
    }
    const double elapsed = seconds_since(start);
    c.require(elapsed < 5.0, "runtime budget exceeded");
    report(3, "inner code vs exhaustive census", c, elapsed, 5.0);
    return c.ok;
}

Outcome random_outcome(Rng& rng) {
    const double a = rng.next_double();
    const double b = rng.next_double();
    const double g = rng.next_double();
    const double sum = a + b + g;
    return {a / sum, b / sum, 1.0 - a / sum - b / sum};
}

OutcomeTable synthetic_table(Rng& rng, int r_max) {
    OutcomeTable table;
    table.entries.push_back({0.0, 0.0, 1.0});
    for (int r = 1; r <= r_max; ++r) table.entries.push_back(random_outcome(rng));
    table.eps_r.assign(table.entries.size(), 0.0);
    table.eps_sym_r.assign(table.entries.size(), 0.0);
    return table;
}

// 4. Score recursion vs 3^N enumeration, closed form vs recursion.
bool criterion4() {
    const auto start = Clock::now();
    Checker c;
    Rng rng(4242);
    for (int rep = 0; rep < 20; ++rep) {
        const auto table = synthetic_table(rng, 6);
        for (int64_t n = 1; n <= 8; ++n) {
            std::vector<int> profile(static_cast<size_t>(n));
            for (auto& r : profile) r = static_cast<int>(rng.next_double() * 7.0);
            for (int64_t k = -n; k <= n; ++k) {
                const double dp = score_pmf(profile, table, k).success_prob;
                const double brute = brute_force_score(profile, table, k);
                if (std::abs(dp - brute) > 1e-12) {
                    c.require(false, "recursion vs enumeration mismatch");
                    break;
                }
            }
            // Uniform profile: closed form against the recursion.
            const int r_uniform = 1 + static_cast<int>(rng.next_double() * 6.0);
            const Pmf closed = trinomial_score_pmf(n, table.at(r_uniform));
            std::vector<Outcome> strands(static_cast<size_t>(n), table.at(r_uniform));
            const Pmf naive = score_pmf_naive(strands);
            for (int64_t s = -n; s <= n; ++s) {
                if (std::abs(closed.at(s) - naive.at(s)) > 1e-12) {
                    c.require(false, "closed form mismatch");
                    break;
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    c.require(elapsed < 60.0, "runtime budget exceeded");
    report(4, "score distribution vs enumeration", c, elapsed, 60.0);
    return c.ok;
}

// 5. Gaussian approximation certificate on random profiles.
bool criterion5() {
    const auto start = Clock::now();
    Checker c;
    Rng rng(555);
    int done = 0;
    for (int64_t n : {200, 1000}) {
        for (int rep = 0; rep < 25; ++rep) {
            const auto table = synthetic_table(rng, 5);
            std::vector<int> profile(static_cast<size_t>(n));
            for (auto& r : profile) r = 1 + static_cast<int>(rng.next_double() * 5.0);
            for (int64_t k : {n / 20, n / 10, n / 4, n / 2}) {
                const double exact = score_pmf(profile, table, k).success_prob;
                const auto clt = clt_success_approx(profile, table, k);
                c.require(std::abs(exact - clt.approx) <= clt.error_bound,
                          "certificate violated at N " + std::to_string(n) + ", K " +
                              std::to_string(k));
            }
            ++done;
        }
    }
    c.require(done == 50, "expected 50 profiles");
    const double elapsed = seconds_since(start);
    c.require(elapsed < 120.0, "runtime budget exceeded");
    report(5, "gaussian tail certificate", c, elapsed, 120.0);
    return c.ok;
}

// 6. Joint read-frequency recursion vs a 1e6-trial tally.
bool criterion6() {
    const auto start = Clock::now();
    Checker c;
    SamplingSpec spec;
    spec.model = SamplingModel::kPoisson;
    spec.lambda = 30.0;
    spec.probs.assign(12, 1.0 / 12.0);
    double total = 0.0;
    for (double v : spec.probs) total += v;
    spec.probs.back() += 1.0 - total;
    BoundConfig config;
    const auto joint = joint_freq_pmf(spec, 2, config);
    const int64_t trials = 1000000;
    const auto counts = mc_joint_frequency(spec, 2, trials, 606);
    for (int64_t h0 = 0; h0 <= 12; ++h0) {
        for (int64_t ht = h0; ht <= 12; ++ht) {
            const double p = joint.prob(h0, ht);
            const double emp =
                static_cast<double>(counts[static_cast<size_t>(h0)][static_cast<size_t>(ht)]) /
                static_cast<double>(trials);
            const double se =
                std::sqrt(std::max(p * (1.0 - p) / static_cast<double>(trials), 1e-13));
            if (std::abs(emp - p) > 4.0 * se) {
                c.require(false, "cell (" + std::to_string(h0) + "," + std::to_string(ht) +
                                     ") off by more than 4 stderr");
            }
        }
    }
    // Marginal of the unread count vs the independent-Bernoulli recursion.
    const auto marginal = joint.marginal_h0();
    std::vector<double> dp = {1.0};
    for (double p : spec.probs) {
        const double q0 = std::exp(-spec.lambda * p);
        std::vector<double> next(dp.size() + 1, 0.0);
        for (size_t i = 0; i < dp.size(); ++i) {
            next[i] += dp[i] * (1.0 - q0);
            next[i + 1] += dp[i] * q0;
        }
        dp.swap(next);
    }
    for (size_t i = 0; i < marginal.size(); ++i) {
        const size_t h0 = static_cast<size_t>(joint.h0_lo()) + i;
        c.require(std::abs(marginal[i] - dp[h0]) <= joint.dropped_mass() + 1e-12,
                  "marginal mismatch beyond truncation loss");
    }
    const double elapsed = seconds_since(start);
    c.require(elapsed < 60.0, "runtime budget exceeded");
    report(6, "joint read-frequency recursion vs monte carlo", c, elapsed, 60.0);
    return c.ok;
}

// Shared setup for the production-scale configuration.
struct ProductionSetup {
    OuterCode outer{10526, 10000, 14};
    InnerCode inner = InnerCode::from_bits(49, 45, 8);
    double epsilon = 0.01;
};

// 7. Bound dominance and sigmoid shape across a read sweep.
bool criterion7() {
    const auto start = Clock::now();
    Checker c;
    ProductionSetup setup;
    auto table = build_outcome_table(setup.inner, setup.epsilon, 16);
    BoundConfig config;
    config.r_prime = 2;
    TwoClassEvaluator eval(table, config.r_prime, setup.outer.K);

    const int64_t from = 45000;
    const int64_t to = 120000;
    const int64_t step = 2500;
    const int64_t trials = 1000;

    double prev_bound[2] = {-1.0, -1.0};
    double first_bound[2] = {1.0, 1.0};
    double last_bound[2] = {0.0, 0.0};
    int64_t r99[2] = {0, 0};
    int xi_index = 0;
    for (double xi : {3.0, 9.0}) {
        SamplingSpec spec;
        spec.model = SamplingModel::kMultinomial;
        spec.probs = sample_dirichlet(setup.outer.N, xi, 777);
        spec.seed = 777;
        SamplingSpec bound_spec = spec;
        bound_spec.model = SamplingModel::kPoisson;
        bool first = true;
        for (int64_t r_all = from; r_all <= to; r_all += step) {
            bound_spec.lambda = static_cast<double>(r_all);
            const auto bound = retrieval_bound(bound_spec, setup.outer, table, config, eval);
            spec.r_all = r_all;
            const auto mc = mc_success_probability(spec, setup.outer, table, trials, 777);
            c.require(bound.bound <= mc.mean + 3.0 * mc.stderr_ + 1e-12,
                      "bound exceeds MC mean + 3 stderr at r_all " + std::to_string(r_all));
            c.require(bound.bound >= prev_bound[xi_index] - 1e-9,
                      "bound not monotone at r_all " + std::to_string(r_all));
            prev_bound[xi_index] = bound.bound;
            if (first) {
                first_bound[xi_index] = bound.bound;
                first = false;
            }
            last_bound[xi_index] = bound.bound;
            if (r99[xi_index] == 0 && bound.bound >= 0.99) r99[xi_index] = r_all;
        }
        ++xi_index;
    }
    for (int i = 0; i < 2; ++i) {
        c.require(first_bound[i] < 0.01, "sweep start is not in the low plateau");
        c.require(last_bound[i] > 0.99, "sweep end does not saturate");
        c.require(r99[i] > 0, "curve never reaches 0.99");
    }
    c.require(r99[1] < r99[0], "xi = 9 must reach 0.99 before xi = 3");
    const double elapsed = seconds_since(start);
    report(7, "bound dominance and sigmoids on the production sweep", c, elapsed, 1800.0);
    return c.ok;
}

// 8. Minimum-read curves: interior minimum at rho_in = 1, decreasing with
// diminishing returns for redundant inner codes.
bool criterion8() {
    const auto start = Clock::now();
    Checker c;
    ChannelModel channel;
    channel.epsilon = 0.01;
    channel.xi = 3.0;
    channel.seed = 888;
    ReliabilityTarget target{1e-6};
    MinReadsOptions options;

    auto depth_curve = [&](int t, const std::vector<double>& rhos) {
        std::vector<double> depths;
        for (double rho : rhos) {
            const auto design = DesignPoint::make(10000, 360, 8, t, rho);
            depths.push_back(min_reads(design, channel, target, options).depth_star);
        }
        return depths;
    };

    const std::vector<double> rhos_t0 = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
    const auto t0 = depth_curve(0, rhos_t0);
    size_t argmin = 0;
    for (size_t i = 1; i < t0.size(); ++i) {
        if (t0[i] < t0[argmin]) argmin = i;
    }
    c.require(argmin > 0 && argmin + 1 < t0.size(),
              "rate-1 inner curve must attain its minimum strictly inside the grid");
    c.require(t0.front() > t0[argmin] * 1.05 && t0.back() > t0[argmin] * 1.05,
              "rate-1 inner curve must rise on both sides of the minimum");

    const std::vector<double> rhos = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    for (int t : {1, 2}) {
        const auto curve = depth_curve(t, rhos);
        for (size_t i = 0; i + 1 < curve.size(); ++i) {
            c.require(curve[i + 1] >= curve[i] * (1.0 - 5e-3),
                      "curve for t = " + std::to_string(t) +
                          " must fall as outer redundancy grows");
        }
        const double total_drop = curve.back() - curve.front();
        const double first_drop = curve[1] - curve[0];
        c.require(total_drop > 0.0, "curve must decrease overall");
        c.require(first_drop < 0.35 * total_drop,
                  "returns must diminish toward small outer rates for t = " + std::to_string(t));
    }
    const double elapsed = seconds_since(start);
    report(8, "minimum-read trade-off curves", c, elapsed, 3600.0);
    return c.ok;
}

// 9. Optimal information density versus read depth.
bool criterion9() {
    const auto start = Clock::now();
    Checker c;
    ChannelModel channel;
    channel.epsilon = 0.01;
    channel.xi = 3.0;
    channel.seed = 999;
    ReliabilityTarget target{1e-6};
    OptDensityGrids grids;
    BoundPolicy policy;

    const auto at60 = opt_density(10000, 360, 8, channel, 60.0, target, grids, policy);
    c.require(at60.feasible, "depth 60 must be feasible");
    c.require(std::abs(at60.delta_star - 1.99) <= 0.05,
              "density at depth 60 is " + std::to_string(at60.delta_star) +
                  ", expected 1.99 +- 0.05");

    double prev = 0.0;
    double at_1_5 = 0.0;
    double at_10 = 0.0;
    double at_20 = 0.0;
    double at_25 = 0.0;
    bool rho_in_below_one = true;
    for (double depth = 1.5; depth <= 25.0 + 1e-9; depth += 0.5) {
        const auto result = opt_density(10000, 360, 8, channel, depth, target, grids, policy);
        c.require(result.feasible, "depth " + std::to_string(depth) + " must be feasible");
        if (!result.feasible) continue;
        c.require(result.delta_star >= prev - 1e-12,
                  "density must not decrease with depth (depth " + std::to_string(depth) + ")");
        prev = result.delta_star;
        if (depth == 1.5) at_1_5 = result.delta_star;
        if (std::abs(depth - 10.0) < 1e-9) at_10 = result.delta_star;
        if (std::abs(depth - 20.0) < 1e-9) at_20 = result.delta_star;
        if (std::abs(depth - 25.0) < 1e-9) at_25 = result.delta_star;
        if (depth <= 10.0 && result.rho_in_star >= 1.0) rho_in_below_one = false;
    }
    c.require(at_25 - at_1_5 >= 0.8, "density must grow substantially over the sweep");
    c.require(at_25 - at_20 <= 0.1, "density must saturate at high depth");
    c.require(rho_in_below_one, "inner code must stay redundant in the low-depth regime");
    (void)at_10;
    const double elapsed = seconds_since(start);
    report(9, "optimal density versus read depth", c, elapsed, 3600.0);
    return c.ok;
}

// 10. Bit-level reproducibility across runs and thread counts.
bool criterion10() {
    const auto start = Clock::now();
    Checker c;
    const auto inner = InnerCode::from_bits(49, 45, 8);
    OuterCode outer{500, 420, 9};
    auto table = build_outcome_table(inner, 0.01, 16);
    SamplingSpec spec;
    spec.model = SamplingModel::kMultinomial;
    spec.probs = sample_dirichlet(outer.N, 3.0, 101);
    spec.seed = 101;
    spec.r_all = 3000;
    SamplingSpec bound_spec = spec;
    bound_spec.model = SamplingModel::kPoisson;
    bound_spec.lambda = 3000.0;
    BoundConfig config;
    config.r_prime = 2;

    ChannelModel channel;
    channel.epsilon = 0.01;
    channel.xi = 3.0;
    channel.seed = 101;
    ReliabilityTarget target{1e-4};
    MinReadsOptions options;
    const auto design = DesignPoint::make(500, 360, 8, 2, 0.85);

    std::vector<double> results[2];
    int slot = 0;
    for (int threads : {1, 4}) {
        set_thread_count(threads);
        auto& out = results[slot++];
        out.push_back(mc_success_probability(spec, outer, table, 200, 101).mean);
        out.push_back(mc_success_probability(spec, outer, table, 200, 101).stderr_);
        out.push_back(retrieval_bound(bound_spec, outer, table, config).bound);
        out.push_back(retrieval_bound_mixture(bound_spec, outer, table, config).bound);
        out.push_back(min_reads(design, channel, target, options).lambda_star);
        const auto probs = sample_dirichlet(1000, 3.0, 7);
        out.insert(out.end(), probs.begin(), probs.begin() + 10);
    }
    set_thread_count(0);
    c.require(results[0].size() == results[1].size(), "result vectors differ in size");
    for (size_t i = 0; i < results[0].size(); ++i) {
        c.require(std::memcmp(&results[0][i], &results[1][i], sizeof(double)) == 0,
                  "bitwise mismatch between 1 and 4 worker threads at slot " +
                      std::to_string(i));
    }
    const double elapsed = seconds_since(start);
    report(10, "bit-level determinism across thread counts", c, elapsed, 0.0);
    return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
    bool run[11] = {false, true, true, true, true, true, true, true, true, true};
    run[10] = true;
    if (argc > 1) {
        std::fill(std::begin(run), std::end(run), false);
        for (int i = 1; i < argc; ++i) {
            const int criterion = std::atoi(argv[i]);
            if (criterion < 1 || criterion > 10) {
                std::cerr << "usage: acceptance [criterion 1..10]...\n";
                return 2;
            }
            run[criterion] = true;
        }
    }
    bool all_ok = true;
    using Fn = bool (*)();
    const Fn criteria[11] = {nullptr,    criterion1, criterion2, criterion3,
                             criterion4, criterion5, criterion6, criterion7,
                             criterion8, criterion9, criterion10};
    for (int i = 1; i <= 10; ++i) {
        if (run[i]) all_ok = criteria[i]() && all_ok;
    }
    if (argc == 1) {
        std::cout << (all_ok ? "ACCEPTANCE OK" : "ACCEPTANCE FAILED") << "\n";
    }
    return all_ok ? 0 : 1;
}
