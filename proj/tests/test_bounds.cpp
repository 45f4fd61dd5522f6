#include <doctest.h>

#include <cmath>
#include <vector>

#include "mdsrel/bounds.hpp"
#include "mdsrel/montecarlo.hpp"
#include "mdsrel/sequencing.hpp"

using namespace mdsrel;

namespace {

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

OutcomeTable table_with_alphas(const std::vector<double>& alphas) {
    OutcomeTable table;
    table.entries.push_back({0.0, 0.0, 1.0});
    for (double a : alphas) table.entries.push_back({a, (1.0 - a) / 2.0, (1.0 - a) / 2.0});
    table.eps_r.assign(table.entries.size(), 0.0);
    table.eps_sym_r.assign(table.entries.size(), 0.0);
    return table;
}

}  // namespace

TEST_CASE("class threshold picks the largest success jump") {
    const auto table = table_with_alphas({0.0, 0.1, 0.9, 0.95});
    CHECK(choose_r_prime(table) == 2);
    const auto flat = table_with_alphas({0.4, 0.4, 0.4, 0.4});
    CHECK(choose_r_prime(flat) == 1);  // tie resolves to the smallest index
}

TEST_CASE("class threshold for the production configuration") {
    const auto code = InnerCode::from_bits(49, 45, 8);
    const auto table = build_outcome_table(code, 0.01, 16);
    CHECK(choose_r_prime(table) == 2);
}

TEST_CASE("two-class bound degenerate cases") {
    Rng rng(3);
    const auto table = synthetic_table(rng, 4);
    // Nothing sequenced: both class sums are empty, success needs K <= 0.
    CHECK(two_class_bound(6, 6, 2, 6, 1, table) == 0.0);
    CHECK(two_class_bound(6, 6, 2, 6, 0, table) == doctest::Approx(1.0));
    // Everything well-read: single-class tail.
    const double all_high = two_class_bound(0, 0, 2, 6, 3, table);
    std::vector<Outcome> strands(6, table.at(3));
    CHECK(all_high == doctest::Approx(brute_force_score(strands, 3)).epsilon(1e-12));
}

TEST_CASE("two-class bound equals enumeration on a mixed state") {
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        const auto table = synthetic_table(rng, 3);
        const double bound = two_class_bound(1, 3, 2, 6, 3, table);
        std::vector<Outcome> strands;
        for (int j = 0; j < 2; ++j) strands.push_back(table.at(1));
        for (int j = 0; j < 3; ++j) strands.push_back(table.at(3));
        CHECK(bound == doctest::Approx(brute_force_score(strands, 3)).epsilon(1e-12));
    }
}

TEST_CASE("restricting the class-score subset only lowers the bound") {
    Rng rng(7);
    const auto table = synthetic_table(rng, 3);
    const double full = two_class_bound(1, 3, 2, 8, 2, table);
    const std::vector<int64_t> subset = {0, 1, 2};
    const double restricted = two_class_bound(1, 3, 2, 8, 2, table, subset);
    CHECK(restricted <= full + 1e-15);
}

TEST_CASE("joint pmf single-strand recursion step") {
    SamplingSpec spec;
    spec.model = SamplingModel::kPoisson;
    spec.lambda = 1.3;
    spec.probs = {1.0};
    BoundConfig config;
    const auto joint = joint_freq_pmf(spec, 2, config);
    const double q0 = std::exp(-1.3);
    const double qr = std::exp(-1.3) * (1.3 + 1.3 * 1.3 / 2.0);
    CHECK(joint.prob(1, 1) == doctest::Approx(q0).epsilon(1e-12));
    CHECK(joint.prob(0, 1) == doctest::Approx(qr).epsilon(1e-12));
    CHECK(joint.prob(0, 0) == doctest::Approx(1.0 - q0 - qr).epsilon(1e-12));
}

TEST_CASE("zero reads put all mass at (N, N)") {
    SamplingSpec spec;
    spec.model = SamplingModel::kPoisson;
    spec.lambda = 0.0;
    spec.probs.assign(7, 1.0 / 7.0);
    spec.probs[6] += 1.0 - 7.0 * (1.0 / 7.0);
    BoundConfig config;
    const auto joint = joint_freq_pmf(spec, 3, config);
    CHECK(joint.prob(7, 7) == doctest::Approx(1.0));
    CHECK(joint.retained_mass() == doctest::Approx(1.0));
}

TEST_CASE("joint pmf rejects the multinomial model") {
    SamplingSpec spec;
    spec.model = SamplingModel::kMultinomial;
    spec.r_all = 10;
    spec.probs.assign(4, 0.25);
    BoundConfig config;
    CHECK_THROWS_AS(joint_freq_pmf(spec, 2, config), std::domain_error);
}

TEST_CASE("joint pmf matches monte carlo tallies") {
    SamplingSpec spec;
    spec.model = SamplingModel::kPoisson;
    spec.lambda = 30.0;
    spec.probs.assign(12, 1.0 / 12.0);
    double total = 0.0;
    for (double v : spec.probs) total += v;
    spec.probs.back() += 1.0 - total;
    BoundConfig config;
    const auto joint = joint_freq_pmf(spec, 2, config);
    const int64_t trials = 200000;
    const auto counts = mc_joint_frequency(spec, 2, trials, 13);
    for (int64_t h0 = 0; h0 <= 12; ++h0) {
        for (int64_t ht = h0; ht <= 12; ++ht) {
            const double p = joint.prob(h0, ht);
            const double emp = static_cast<double>(counts[h0][ht]) / trials;
            const double se = std::sqrt(std::max(p * (1.0 - p) / trials, 1e-12));
            REQUIRE(std::abs(emp - p) <= 4.0 * se);
        }
    }
}

TEST_CASE("H0 marginal matches a one-dimensional recursion") {
    SamplingSpec spec;
    spec.model = SamplingModel::kPoisson;
    spec.lambda = 18.0;
    spec.probs = sample_dirichlet(12, 3.0, 21);
    BoundConfig config;
    const auto joint = joint_freq_pmf(spec, 2, config);
    const auto marginal = joint.marginal_h0();

    // Independent-Bernoulli recursion for the number of unread strands.
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
    const double loss = joint.dropped_mass();
    for (size_t i = 0; i < marginal.size(); ++i) {
        const size_t h0 = static_cast<size_t>(joint.h0_lo()) + i;
        REQUIRE(std::abs(marginal[i] - dp[h0]) <= loss + 1e-12);
    }
}

TEST_CASE("retrieval bound via states equals the mixed-score form") {
    const auto inner = InnerCode::from_bits(9, 5, 4);
    const auto table = build_outcome_table(inner, 0.02, 4);
    for (double lambda : {300.0, 600.0, 1200.0}) {
        SamplingSpec spec;
        spec.model = SamplingModel::kPoisson;
        spec.lambda = lambda;
        spec.probs = sample_dirichlet(200, 3.0, 37);
        OuterCode outer{200, 150, 8};
        BoundConfig config;
        config.r_prime = 2;
        const auto two_dim = retrieval_bound(spec, outer, table, config);
        const auto one_dim = retrieval_bound_mixture(spec, outer, table, config);
        CHECK(std::abs(two_dim.bound - one_dim.bound) < 1e-9);
        CHECK(two_dim.mass_deficit < 1e-6);
    }
}

TEST_CASE("bound improves with a uniformly better table") {
    Rng rng(17);
    SamplingSpec spec;
    spec.model = SamplingModel::kPoisson;
    spec.lambda = 60.0;
    spec.probs = sample_dirichlet(30, 3.0, 41);
    OuterCode outer{30, 18, 5};
    BoundConfig config;
    config.r_prime = 2;
    for (int rep = 0; rep < 10; ++rep) {
        auto table = synthetic_table(rng, 4);
        auto better = table;
        for (size_t r = 1; r < better.entries.size(); ++r) {
            auto& o = better.entries[r];
            const double shift = 0.5 * o.beta;
            o.alpha += shift;
            o.beta -= shift;
            o.gamma = 1.0 - o.alpha - o.beta;
        }
        const double base = retrieval_bound(spec, outer, table, config).bound;
        const double improved = retrieval_bound(spec, outer, better, config).bound;
        CHECK(improved >= base - 1e-12);
    }
}

TEST_CASE("near-noiseless deep sequencing retrieves almost surely") {
    const auto inner = InnerCode::from_bits(9, 5, 4);
    const auto table = build_outcome_table(inner, 1e-9, 4);
    const int64_t n = 100;
    SamplingSpec spec;
    spec.model = SamplingModel::kPoisson;
    spec.lambda = 20.0 * static_cast<double>(n);
    spec.probs.assign(static_cast<size_t>(n), 1.0 / static_cast<double>(n));
    double total = 0.0;
    for (double v : spec.probs) total += v;
    spec.probs.back() += 1.0 - total;
    OuterCode outer{n, n / 2, 7};
    BoundConfig config;
    config.r_prime = 2;
    const auto result = retrieval_bound(spec, outer, table, config);
    CHECK(result.bound >= 1.0 - 1e-6);

    // Coupon-collector style cross-check: sampled failures are as rare.
    int64_t failures = 0;
    const int64_t trials = 2000;
    for (int64_t trial = 0; trial < trials; ++trial) {
        const auto profile = sample_profile(spec, static_cast<uint64_t>(trial));
        int64_t read = 0;
        for (int r : profile) read += r > 0;
        if (read < outer.K) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("bound config validation") {
    BoundConfig config;
    config.trunc_eps = 1e-3;
    CHECK_THROWS_AS(config.validate(), std::domain_error);
    config.trunc_eps = 0.0;
    CHECK_THROWS_AS(config.validate(), std::domain_error);
}
