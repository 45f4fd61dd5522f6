#include "mdsrel/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdsrel {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double log_binomial_coeff(int64_t n, int64_t k) {
    if (k < 0 || k > n) throw std::domain_error("log_binomial_coeff: k outside [0, n]");
    if (k == 0 || k == n) return 0.0;
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

BinomialPoint binomial_pmf_cdf(int64_t x, int64_t n, double p) {
    if (x < 0 || x > n) throw std::domain_error("binomial_pmf_cdf: x outside [0, n]");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_pmf_cdf: p outside [0, 1]");
    if (p == 0.0) return {x == 0 ? 1.0 : 0.0, 1.0};
    if (p == 1.0) return {x == n ? 1.0 : 0.0, x == n ? 1.0 : 0.0};

    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    auto log_pmf = [&](int64_t k) {
        return log_binomial_coeff(n, k) + static_cast<double>(k) * lp +
               static_cast<double>(n - k) * lq;
    };

    const double lf_x = log_pmf(x);

    // Sum the shorter tail in log space; the CDF near 1 is recovered through
    // the complement so both tails keep absolute precision.
    double cdf;
    if (2 * x <= n) {
        double acc = kNegInf;
        for (int64_t k = 0; k <= x; ++k) acc = log_sum_exp(acc, log_pmf(k));
        cdf = std::exp(acc);
    } else {
        double acc = kNegInf;
        for (int64_t k = x + 1; k <= n; ++k) acc = log_sum_exp(acc, log_pmf(k));
        cdf = -std::expm1(acc);
    }
    cdf = std::clamp(cdf, 0.0, 1.0);
    return {std::exp(lf_x), cdf};
}

double gaussian_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

Pmf Pmf::delta(int64_t at) {
    Pmf d;
    d.offset = at;
    d.mass = {1.0};
    return d;
}

double Pmf::at(int64_t value) const {
    const int64_t i = value - offset;
    if (i < 0 || i >= static_cast<int64_t>(mass.size())) return 0.0;
    return mass[static_cast<size_t>(i)];
}

double Pmf::total() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

double Pmf::tail_at_or_above(int64_t s) const {
    double acc = 0.0;
    const int64_t lo = std::max(s, offset);
    // Sum from the far end so the smallest terms accumulate first.
    for (int64_t v = last(); v >= lo; --v) acc += mass[static_cast<size_t>(v - offset)];
    return acc;
}

void Pmf::trim(double tail_eps) {
    size_t lo = 0;
    double dropped = 0.0;
    double acc = 0.0;
    while (lo < mass.size() && acc + mass[lo] < tail_eps) {
        acc += mass[lo];
        ++lo;
    }
    dropped += acc;
    size_t hi = mass.size();
    acc = 0.0;
    while (hi > lo && acc + mass[hi - 1] < tail_eps) {
        acc += mass[hi - 1];
        --hi;
    }
    dropped += acc;
    if (lo == 0 && hi == mass.size()) return;
    mass = std::vector<double>(mass.begin() + static_cast<ptrdiff_t>(lo),
                               mass.begin() + static_cast<ptrdiff_t>(hi));
    if (mass.empty()) {
        mass = {0.0};
    }
    offset += static_cast<int64_t>(lo);
    lost += dropped;
    truncated = true;
}

Pmf convolve(const Pmf& a, const Pmf& b) {
    Pmf out;
    out.offset = a.offset + b.offset;
    out.mass.assign(a.mass.size() + b.mass.size() - 1, 0.0);
    // Iterate the shorter operand in the outer loop to keep the inner loop
    // streaming over contiguous memory.
    const Pmf& small = a.mass.size() <= b.mass.size() ? a : b;
    const Pmf& big = a.mass.size() <= b.mass.size() ? b : a;
    for (size_t i = 0; i < small.mass.size(); ++i) {
        const double w = small.mass[i];
        if (w == 0.0) continue;
        for (size_t j = 0; j < big.mass.size(); ++j) {
            out.mass[i + j] += w * big.mass[j];
        }
    }
    out.truncated = a.truncated || b.truncated;
    out.lost = a.lost + b.lost;
    return out;
}

}  // namespace mdsrel
