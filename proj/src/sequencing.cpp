#include "mdsrel/sequencing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mdsrel {

namespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream_id) {
    uint64_t mix = seed;
    (void)splitmix64(mix);
    mix ^= stream_id * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL;
    for (auto& word : state_) word = splitmix64(mix);
}

uint64_t Rng::next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gauss() {
    for (;;) {
        const double u = 2.0 * next_double() - 1.0;
        const double v = 2.0 * next_double() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double Rng::next_gamma(double shape) {
    if (!(shape > 0.0)) throw std::domain_error("next_gamma: shape must be positive");
    if (shape < 1.0) {
        // Boost from shape + 1 (Marsaglia-Tsang).
        const double u = next_double();
        return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = next_gauss();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_double();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

int64_t Rng::next_poisson(double mean) {
    if (!(mean >= 0.0)) throw std::domain_error("next_poisson: negative mean");
    if (mean == 0.0) return 0;
    // Halve until exp(-mean) stays representable; the split is exact.
    if (mean > 500.0) {
        const double half = mean / 2.0;
        return next_poisson(half) + next_poisson(mean - half);
    }
    const double u = next_double();
    double pmf = std::exp(-mean);
    double cdf = pmf;
    int64_t k = 0;
    while (u >= cdf) {
        ++k;
        pmf *= mean / static_cast<double>(k);
        cdf += pmf;
        if (pmf == 0.0) break;  // beyond double resolution of the far tail
    }
    return k;
}

int64_t Rng::next_binomial(int64_t n, double p) {
    if (n < 0) throw std::domain_error("next_binomial: negative n");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("next_binomial: p outside [0, 1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p > 0.5) return n - next_binomial(n, 1.0 - p);
    // Keep the inversion start point exp(n log(1-p)) representable.
    if (static_cast<double>(n) * (-std::log1p(-p)) > 500.0) {
        const int64_t half = n / 2;
        return next_binomial(half, p) + next_binomial(n - half, p);
    }
    const double u = next_double();
    const double odds = p / (1.0 - p);
    double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
    double cdf = pmf;
    int64_t k = 0;
    while (u >= cdf && k < n) {
        ++k;
        pmf *= odds * static_cast<double>(n - k + 1) / static_cast<double>(k);
        cdf += pmf;
        if (pmf == 0.0) break;
    }
    return k;
}

void SamplingSpec::validate() const {
    if (probs.empty()) throw std::domain_error("SamplingSpec: empty probability vector");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::domain_error("SamplingSpec: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::domain_error("SamplingSpec: probabilities must sum to 1 within 1e-12");
    }
    if (model == SamplingModel::kMultinomial && r_all < 0) {
        throw std::domain_error("SamplingSpec: negative read total");
    }
    if (model == SamplingModel::kPoisson && !(lambda >= 0.0)) {
        throw std::domain_error("SamplingSpec: negative lambda");
    }
}

std::vector<double> sample_dirichlet(int64_t n, double xi, uint64_t seed) {
    if (n < 1) throw std::domain_error("sample_dirichlet: n must be >= 1");
    if (!(xi > 0.0)) throw std::domain_error("sample_dirichlet: concentration must be positive");
    Rng rng(seed, 0xD19'1C4E7ULL);
    std::vector<double> p(static_cast<size_t>(n));
    double sum = 0.0;
    for (auto& v : p) {
        v = rng.next_gamma(xi);
        sum += v;
    }
    for (auto& v : p) v /= sum;
    // Make the simplex constraint exact so downstream validation at 1e-12
    // never trips on rounding.
    double total = 0.0;
    for (double v : p) total += v;
    const double correction = 1.0 - total;
    p.back() += correction;
    if (p.back() < 0.0) p.back() = 0.0;
    return p;
}

std::vector<int> sample_profile(const SamplingSpec& spec, uint64_t trial_index) {
    spec.validate();
    Rng rng(spec.seed, trial_index);
    const size_t n = spec.probs.size();
    std::vector<int> profile(n, 0);
    if (spec.model == SamplingModel::kPoisson) {
        for (size_t j = 0; j < n; ++j) {
            profile[j] = static_cast<int>(rng.next_poisson(spec.lambda * spec.probs[j]));
        }
        return profile;
    }
    // Conditional-binomial cascade: strand j receives Bin(remaining,
    // p_j / tail_j) reads, so the total matches r_all exactly.
    std::vector<double> tail(n + 1, 0.0);
    for (size_t j = n; j-- > 0;) tail[j] = tail[j + 1] + spec.probs[j];
    int64_t remaining = spec.r_all;
    for (size_t j = 0; j + 1 < n && remaining > 0; ++j) {
        const double denom = tail[j];
        if (denom <= 0.0) break;
        const double q = std::clamp(spec.probs[j] / denom, 0.0, 1.0);
        const int64_t draws = rng.next_binomial(remaining, q);
        profile[j] = static_cast<int>(draws);
        remaining -= draws;
    }
    if (remaining > 0) profile[n - 1] = static_cast<int>(remaining);
    return profile;
}

ReadFrequency read_frequency(std::span<const int> profile) {
    int max_r = 0;
    for (int r : profile) {
        if (r < 0) throw std::domain_error("read_frequency: negative read count");
        max_r = std::max(max_r, r);
    }
    ReadFrequency out;
    out.h.assign(static_cast<size_t>(max_r) + 1, 0);
    for (int r : profile) ++out.h[static_cast<size_t>(r)];
    out.h_cum.resize(out.h.size());
    int64_t acc = 0;
    for (size_t i = 0; i < out.h.size(); ++i) {
        acc += out.h[i];
        out.h_cum[i] = acc;
    }
    return out;
}

std::vector<double> load_probability_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open probability file: " + path);
    std::vector<double> probs;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        probs.push_back(std::stod(line.substr(first, last - first + 1)));
    }
    SamplingSpec check;
    check.probs = probs;
    check.validate();
    return probs;
}

}  // namespace mdsrel
