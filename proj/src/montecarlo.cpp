#include "mdsrel/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "mdsrel/bounds.hpp"
#include "mdsrel/consensus.hpp"
#include "mdsrel/parallel.hpp"

namespace mdsrel {

namespace {

bool is_prime(long long q) {
    if (q < 2) return false;
    for (long long d = 2; d * d <= q; ++d) {
        if (q % d == 0) return false;
    }
    return true;
}

double sample_stderr(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    return std::sqrt(var / static_cast<double>(values.size()));
}

}  // namespace

SweepPointStats mc_sweep_point(const SamplingSpec& spec, const OuterCode& outer,
                               OutcomeTable& table, int64_t trials, uint64_t seed) {
    if (trials < 1) throw std::domain_error("mc_sweep_point: trials must be >= 1");
    outer.validate();
    SamplingSpec local = spec;
    local.seed = seed;
    std::vector<double> values(static_cast<size_t>(trials), 0.0);
    std::vector<double> clt_values(static_cast<size_t>(trials), 0.0);
    std::vector<double> clt_bounds(static_cast<size_t>(trials), 0.0);

    // Profiles are sampled serially per batch so the table can be extended
    // once to the batch maximum; scoring then runs data-parallel.
    const int64_t batch_size = std::max<int64_t>(
        1, (16LL << 20) / std::max<int64_t>(1, 4 * spec.n()));
    std::vector<std::vector<int>> profiles;
    for (int64_t lo = 0; lo < trials; lo += batch_size) {
        const int64_t hi = std::min(trials, lo + batch_size);
        profiles.assign(static_cast<size_t>(hi - lo), {});
        int max_r = table.r_max();
        for (int64_t trial = lo; trial < hi; ++trial) {
            auto profile = sample_profile(local, static_cast<uint64_t>(trial));
            for (int r : profile) max_r = std::max(max_r, r);
            profiles[static_cast<size_t>(trial - lo)] = std::move(profile);
        }
        extend_outcome_table(table, max_r);
        parallel_for(hi - lo, [&](int64_t i) {
            const auto& profile = profiles[static_cast<size_t>(i)];
            values[static_cast<size_t>(lo + i)] =
                score_pmf(profile, table, outer.K).success_prob;
            const auto clt = clt_success_approx(profile, table, outer.K);
            clt_values[static_cast<size_t>(lo + i)] = clt.approx;
            clt_bounds[static_cast<size_t>(lo + i)] = clt.error_bound;
        });
    }

    double sum = 0.0;
    double clt_sum = 0.0;
    double clt_bound_sum = 0.0;
    for (int64_t i = 0; i < trials; ++i) {
        sum += values[static_cast<size_t>(i)];
        clt_sum += clt_values[static_cast<size_t>(i)];
        clt_bound_sum += clt_bounds[static_cast<size_t>(i)];
    }
    SweepPointStats out;
    out.mc.mean = sum / static_cast<double>(trials);
    out.mc.stderr_ = sample_stderr(values, out.mc.mean);
    out.mc.trials = trials;
    out.mc.seed = seed;
    out.clt_mean = clt_sum / static_cast<double>(trials);
    out.clt_error_bound_mean = clt_bound_sum / static_cast<double>(trials);
    return out;
}

McEstimate mc_success_probability(const SamplingSpec& spec, const OuterCode& outer,
                                  OutcomeTable& table, int64_t trials, uint64_t seed) {
    return mc_sweep_point(spec, outer, table, trials, seed).mc;
}

McEstimate simulate_consensus(double epsilon, int r, int64_t trials, uint64_t seed) {
    if (r < 1) throw std::domain_error("simulate_consensus: r must be >= 1");
    if (trials < 1) throw std::domain_error("simulate_consensus: trials must be >= 1");
    // Batches keep the per-stream setup cost amortized while preserving the
    // (seed, stream) reproducibility contract.
    constexpr int64_t kBatch = 4096;
    const int64_t batches = (trials + kBatch - 1) / kBatch;
    std::vector<int64_t> errors(static_cast<size_t>(batches), 0);
    parallel_for(batches, [&](int64_t batch) {
        const int64_t lo = batch * kBatch;
        const int64_t hi = std::min<int64_t>(trials, lo + kBatch);
        int64_t local_errors = 0;
        for (int64_t trial = lo; trial < hi; ++trial) {
            Rng rng(seed, static_cast<uint64_t>(trial));
            std::array<int, 4> tally{0, 0, 0, 0};
            for (int read = 0; read < r; ++read) {
                const double u = rng.next_double();
                if (u < 1.0 - epsilon) {
                    ++tally[0];
                } else {
                    // Map the residual uniform mass onto the three substitutes.
                    const double v = (u - (1.0 - epsilon)) / epsilon;
                    ++tally[1 + std::min(2, static_cast<int>(v * 3.0))];
                }
            }
            const int top = *std::max_element(tally.begin(), tally.end());
            std::array<int, 4> leaders{};
            int n_leaders = 0;
            for (int b = 0; b < 4; ++b) {
                if (tally[b] == top) leaders[n_leaders++] = b;
            }
            int winner = leaders[0];
            if (n_leaders > 1) {
                winner = leaders[std::min(n_leaders - 1,
                                          static_cast<int>(rng.next_double() * n_leaders))];
            }
            if (winner != 0) ++local_errors;
        }
        errors[static_cast<size_t>(batch)] = local_errors;
    });
    int64_t total_errors = 0;
    for (int64_t e : errors) total_errors += e;
    McEstimate est;
    est.mean = static_cast<double>(total_errors) / static_cast<double>(trials);
    est.stderr_ = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(trials));
    est.trials = trials;
    est.seed = seed;
    return est;
}

BruteForceInnerResult brute_force_inner(const InnerCode& code, double eps_sym) {
    if (!is_prime(code.q)) throw std::domain_error("brute_force_inner: q must be prime");
    const int n = code.n_sym;
    const int k = code.k_sym;
    const long long q = code.q;
    double space = 1.0;
    for (int i = 0; i < n; ++i) space *= static_cast<double>(q);
    if (space > 1e6) throw std::domain_error("brute_force_inner: q^n exceeds the 1e6 cap");
    const int64_t n_words = static_cast<int64_t>(space + 0.5);
    int64_t n_codewords = 1;
    for (int i = 0; i < k; ++i) n_codewords *= q;

    // Vandermonde generator of a generalized Reed-Solomon code: codeword
    // symbols are evaluations of degree-< k message polynomials at n distinct
    // field points, so any k columns are invertible and the code is MDS.
    std::vector<std::vector<int>> codewords;
    codewords.reserve(static_cast<size_t>(n_codewords));
    std::vector<int> message(static_cast<size_t>(k), 0);
    for (int64_t idx = 0; idx < n_codewords; ++idx) {
        int64_t v = idx;
        for (int i = 0; i < k; ++i) {
            message[static_cast<size_t>(i)] = static_cast<int>(v % q);
            v /= q;
        }
        std::vector<int> word(static_cast<size_t>(n), 0);
        for (int j = 0; j < n; ++j) {
            long long acc = 0;
            long long power = 1;
            for (int i = 0; i < k; ++i) {
                acc = (acc + message[static_cast<size_t>(i)] * power) % q;
                power = (power * j) % q;
            }
            word[static_cast<size_t>(j)] = static_cast<int>(acc);
        }
        codewords.push_back(std::move(word));
    }

    // By linearity the zero codeword is transmitted: each length-n word IS an
    // error pattern. Radius-t decoding miscorrects exactly when the pattern
    // lands within distance t of a nonzero codeword.
    BruteForceInnerResult out;
    out.miscorrections.assign(static_cast<size_t>(n) + 1, 0);
    out.patterns.assign(static_cast<size_t>(n) + 1, 0);
    std::vector<uint64_t> failures(static_cast<size_t>(n) + 1, 0);
    std::vector<int> word(static_cast<size_t>(n), 0);
    for (int64_t idx = 0; idx < n_words; ++idx) {
        int64_t v = idx;
        int weight = 0;
        for (int j = 0; j < n; ++j) {
            word[static_cast<size_t>(j)] = static_cast<int>(v % q);
            v /= q;
            if (word[static_cast<size_t>(j)] != 0) ++weight;
        }
        ++out.patterns[static_cast<size_t>(weight)];
        if (weight <= code.t) continue;  // decodes back to the sent word
        bool miscorrected = false;
        for (const auto& cw : codewords) {
            int dist = 0;
            for (int j = 0; j < n && dist <= code.t; ++j) {
                dist += cw[static_cast<size_t>(j)] != word[static_cast<size_t>(j)];
            }
            if (dist <= code.t) {
                miscorrected = true;
                break;
            }
        }
        if (miscorrected) {
            ++out.miscorrections[static_cast<size_t>(weight)];
        } else {
            ++failures[static_cast<size_t>(weight)];
        }
    }

    out.eta.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int i = code.t + 1; i <= n; ++i) {
        out.eta[static_cast<size_t>(i)] =
            static_cast<double>(out.miscorrections[static_cast<size_t>(i)]) /
            static_cast<double>(out.patterns[static_cast<size_t>(i)]);
    }

    // Weight the census by i.i.d. symbol errors, each wrong symbol uniform
    // over the q - 1 alternatives.
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    const double per_error = eps_sym / static_cast<double>(q - 1);
    for (int w = 0; w <= n; ++w) {
        double log_p = 0.0;
        if (w > 0) log_p += w * std::log(per_error);
        if (w < n) log_p += (n - w) * std::log1p(-eps_sym);
        const double pattern_prob = std::exp(log_p);
        if (w <= code.t) {
            alpha += static_cast<double>(out.patterns[static_cast<size_t>(w)]) * pattern_prob;
        } else {
            beta += static_cast<double>(out.miscorrections[static_cast<size_t>(w)]) * pattern_prob;
            gamma += static_cast<double>(failures[static_cast<size_t>(w)]) * pattern_prob;
        }
    }
    out.outcome = {alpha, beta, gamma};
    return out;
}

double brute_force_score(std::span<const Outcome> strands, int64_t K) {
    const size_t n = strands.size();
    if (n > 8) throw std::domain_error("brute_force_score: N must be <= 8");
    std::vector<int> z(n, 0);  // 0 -> +1, 1 -> -1, 2 -> 0
    double success = 0.0;
    for (;;) {
        double p = 1.0;
        int64_t score = 0;
        for (size_t j = 0; j < n; ++j) {
            switch (z[j]) {
                case 0:
                    p *= strands[j].alpha;
                    score += 1;
                    break;
                case 1:
                    p *= strands[j].beta;
                    score -= 1;
                    break;
                default:
                    p *= strands[j].gamma;
            }
        }
        if (score >= K) success += p;
        size_t j = 0;
        while (j < n && ++z[j] == 3) z[j++] = 0;
        if (j == n) break;
    }
    return success;
}

double brute_force_score(std::span<const int> profile, const OutcomeTable& table, int64_t K) {
    std::vector<Outcome> strands;
    strands.reserve(profile.size());
    for (int r : profile) strands.push_back(table.at(r));
    return brute_force_score(std::span<const Outcome>(strands), K);
}

std::vector<std::vector<int64_t>> mc_joint_frequency(const SamplingSpec& spec, int r_prime,
                                                     int64_t trials, uint64_t seed) {
    if (spec.model != SamplingModel::kPoisson) {
        throw std::domain_error("mc_joint_frequency: Poisson model only");
    }
    if (trials < 1) throw std::domain_error("mc_joint_frequency: trials must be >= 1");
    const size_t n = spec.probs.size();
    SamplingSpec local = spec;
    local.seed = seed;
    std::vector<std::vector<int64_t>> counts(n + 1, std::vector<int64_t>(n + 1, 0));
    constexpr int64_t kBatch = 1024;
    const int64_t batches = (trials + kBatch - 1) / kBatch;
    std::vector<std::vector<std::pair<int, int>>> batch_states(static_cast<size_t>(batches));
    parallel_for(batches, [&](int64_t batch) {
        const int64_t lo = batch * kBatch;
        const int64_t hi = std::min<int64_t>(trials, lo + kBatch);
        auto& states = batch_states[static_cast<size_t>(batch)];
        states.reserve(static_cast<size_t>(hi - lo));
        for (int64_t trial = lo; trial < hi; ++trial) {
            const auto profile = sample_profile(local, static_cast<uint64_t>(trial));
            int h0 = 0;
            int h_tilde = 0;
            for (int r : profile) {
                h0 += r == 0;
                h_tilde += r <= r_prime;
            }
            states.emplace_back(h0, h_tilde);
        }
    });
    for (const auto& states : batch_states) {
        for (const auto& [h0, h_tilde] : states) {
            ++counts[static_cast<size_t>(h0)][static_cast<size_t>(h_tilde)];
        }
    }
    return counts;
}

}  // namespace mdsrel
