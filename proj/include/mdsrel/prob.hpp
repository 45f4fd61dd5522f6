#pragma once

#include <cstdint>
#include <vector>

namespace mdsrel {

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
double log_sum_exp(double a, double b);

// log C(n, k); requires 0 <= k <= n.
double log_binomial_coeff(int64_t n, int64_t k);

struct BinomialPoint {
    double pmf;  // f(x; n, p)
    double cdf;  // F(x; n, p)
};

// Binomial PMF and CDF evaluated in log space so that extreme parameter
// combinations (n = 1e4 with p = 1e-4, tail values near 1e-300) keep full
// relative precision. Throws std::domain_error on x > n or p outside [0,1].
BinomialPoint binomial_pmf_cdf(int64_t x, int64_t n, double p);

// Standard Gaussian CDF via the complementary error function.
double gaussian_cdf(double x);

// Probability mass function on a contiguous integer support.
//
// `truncated` marks distributions whose tails were deliberately dropped;
// `lost` is an upper bound on the discarded mass. Truncated PMFs are used as
// certified under-approximations: every retained mass is exact, so tail sums
// over the retained support never overshoot.
struct Pmf {
    int64_t offset = 0;          // value of the first support point
    std::vector<double> mass;    // mass[i] = Pr(X = offset + i)
    bool truncated = false;
    double lost = 0.0;

    static Pmf delta(int64_t at);

    int64_t first() const { return offset; }
    int64_t last() const { return offset + static_cast<int64_t>(mass.size()) - 1; }
    double at(int64_t value) const;
    double total() const;
    // Pr(X >= s) over the retained support.
    double tail_at_or_above(int64_t s) const;
    // Drop leading/trailing support points whose cumulative mass stays below
    // `tail_eps` per side; dropped mass is added to `lost`.
    void trim(double tail_eps);
};

// Full discrete convolution; offsets add, lost-mass bounds add.
Pmf convolve(const Pmf& a, const Pmf& b);

}  // namespace mdsrel
