#include <doctest.h>

#include <cmath>

#include "mdsrel/consensus.hpp"
#include "mdsrel/inner_code.hpp"
#include "mdsrel/montecarlo.hpp"
#include "mdsrel/prob.hpp"

using namespace mdsrel;

TEST_CASE("weight distribution of small MDS codes") {
    const auto grs31 = InnerCode::with_alphabet(3, 1, 5);
    const auto w31 = mds_weight_distribution(grs31);
    CHECK(w31[0] == 1);
    CHECK(w31[1] == 0);
    CHECK(w31[2] == 0);
    mpz_class sum31 = 0;
    for (const auto& w : w31) sum31 += w;
    CHECK(sum31 == 5);

    const auto grs42 = InnerCode::with_alphabet(4, 2, 5);
    const auto w42 = mds_weight_distribution(grs42);
    CHECK(w42[0] == 1);
    mpz_class sum42 = 0;
    for (const auto& w : w42) sum42 += w;
    CHECK(sum42 == 25);
}

TEST_CASE("weight distribution matches codeword census") {
    for (auto [n, k, q] : {std::tuple{3, 1, 5LL}, {4, 2, 5LL}, {5, 3, 7LL}}) {
        const auto code = InnerCode::with_alphabet(n, k, q);
        const auto weights = mds_weight_distribution(code);
        const auto census = brute_force_inner(code, 0.1);
        // Census pattern counts at weight w include every word; codewords are
        // the subset decoding to themselves. Recount them directly instead.
        int64_t n_codewords = 1;
        for (int i = 0; i < k; ++i) n_codewords *= q;
        mpz_class total = 0;
        for (const auto& w : weights) total += w;
        CHECK(total == n_codewords);
        CHECK(census.patterns[0] == 1);
    }
}

TEST_CASE("production-size weight distribution sums to q^k") {
    const auto code = InnerCode::from_bits(49, 45, 8);
    const auto weights = mds_weight_distribution(code);
    mpz_class total = 0;
    for (const auto& w : weights) total += w;
    mpz_class expected;
    mpz_ui_pow_ui(expected.get_mpz_t(), 256, 45);
    CHECK(total == expected);
    CHECK(weights[1] == 0);
    CHECK(weights[4] == 0);
    CHECK(weights[5] > 0);  // d_min = 5
}

TEST_CASE("miscorrection fractions lie in (0,1) and match the census") {
    for (auto [n, k, q] : {std::tuple{3, 1, 5LL}, {4, 2, 5LL}, {5, 3, 7LL}, {5, 1, 11LL}}) {
        const auto code = InnerCode::with_alphabet(n, k, q);
        const auto census = brute_force_inner(code, 0.05);
        for (int i = code.t + 1; i <= n; ++i) {
            const double eta = miscorrection_fraction(code, i);
            CHECK(eta > 0.0);
            CHECK(eta < 1.0);
            CHECK(std::abs(eta - census.eta[static_cast<size_t>(i)]) < 1e-12);
        }
    }
}

TEST_CASE("sphere counts never exceed the shell size") {
    const auto code = InnerCode::with_alphabet(5, 3, 7);
    const auto census = brute_force_inner(code, 0.05);
    for (int i = code.t + 1; i <= code.n_sym; ++i) {
        CHECK(census.miscorrections[static_cast<size_t>(i)] <=
              census.patterns[static_cast<size_t>(i)]);
    }
}

TEST_CASE("miscorrection fraction rejects in-radius weights") {
    const auto code = InnerCode::with_alphabet(4, 2, 5);
    CHECK_THROWS_AS(miscorrection_fraction(code, 1), std::domain_error);
    CHECK_THROWS_AS(miscorrection_fraction(code, 5), std::domain_error);
}

TEST_CASE("outcome probabilities against the exhaustive census") {
    const auto code = InnerCode::with_alphabet(4, 2, 5);
    for (double eps_sym : {0.05, 0.2}) {
        const auto analytic = outcome_probs(code, eps_sym);
        const auto census = brute_force_inner(code, eps_sym);
        CHECK(std::abs(analytic.alpha - census.outcome.alpha) < 1e-12);
        CHECK(std::abs(analytic.beta - census.outcome.beta) < 1e-12);
        CHECK(std::abs(analytic.gamma - census.outcome.gamma) < 1e-12);
        CHECK(std::abs(analytic.alpha + analytic.beta + analytic.gamma - 1.0) < 1e-12);
    }
}

TEST_CASE("error-free symbols decode perfectly") {
    const auto code = InnerCode::with_alphabet(4, 2, 5);
    const auto outcome = outcome_probs(code, 0.0);
    CHECK(outcome.alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(outcome.beta == doctest::Approx(0.0));
    CHECK(outcome.gamma == doctest::Approx(0.0));
}

TEST_CASE("rate-1 inner code never erases") {
    const auto code = InnerCode::from_bits(45, 45, 8);
    const double eps_sym = 0.03;
    const auto outcome = outcome_probs(code, eps_sym);
    CHECK(outcome.gamma == 0.0);
    CHECK(outcome.alpha == doctest::Approx(std::pow(1.0 - eps_sym, 45)).epsilon(1e-12));
    CHECK(outcome.alpha + outcome.beta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("first-read outcome for the production inner code") {
    const auto code = InnerCode::from_bits(49, 45, 8);
    const double eps_sym = symbol_error_rate(consensus_error_rate(0.01, 1), 8);
    CHECK(eps_sym == doctest::Approx(1.0 - std::pow(0.99, 4)).epsilon(1e-12));
    const auto outcome = outcome_probs(code, eps_sym);
    CHECK(outcome.alpha == doctest::Approx(binomial_pmf_cdf(2, 49, eps_sym).cdf).epsilon(1e-12));
}

TEST_CASE("outcome table structure") {
    const auto code = InnerCode::from_bits(49, 45, 8);
    const auto table = build_outcome_table(code, 0.01, 50);
    CHECK(table.r_max() == 50);
    CHECK(table.at(0).alpha == 0.0);
    CHECK(table.at(0).beta == 0.0);
    CHECK(table.at(0).gamma == 1.0);
    for (int r = 0; r <= 50; ++r) {
        const auto& o = table.at(r);
        CHECK(std::abs(o.alpha + o.beta + o.gamma - 1.0) < 1e-12);
    }
    // Success probability rises with more reads over odd counts and ends in
    // a sigmoidal saturation at 1.
    for (int r = 3; r <= 49; r += 2) {
        CHECK(table.at(r).alpha >= table.at(r - 2).alpha - 1e-15);
    }
    CHECK(table.at(1).alpha < 0.9);
    CHECK(table.at(9).alpha > 0.999);
}

TEST_CASE("noiseless channel gives a perfect table") {
    const auto code = InnerCode::from_bits(49, 45, 8);
    const auto table = build_outcome_table(code, 0.0, 1);
    CHECK(table.at(1).alpha == 1.0);
    CHECK(table.at(1).beta == 0.0);
    CHECK(table.at(1).gamma == 0.0);
    CHECK(table.at(0).gamma == 1.0);
}
