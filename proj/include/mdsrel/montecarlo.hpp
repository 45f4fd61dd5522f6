#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mdsrel/inner_code.hpp"
#include "mdsrel/retrieval.hpp"
#include "mdsrel/sequencing.hpp"

namespace mdsrel {

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    int64_t trials = 0;
    uint64_t seed = 0;
};

// Empirical mean of the per-profile success probability over sampled read
// profiles. Each trial draws one profile from its own (seed, trial) RNG
// stream and evaluates Pr(score >= K) analytically, which averages out the
// decoding randomness at no extra cost. Trials run data-parallel and are
// reduced in index order, so results are bit-identical for any worker count.
// The table is extended in place when a sampled read count exceeds it.
McEstimate mc_success_probability(const SamplingSpec& spec, const OuterCode& outer,
                                  OutcomeTable& table, int64_t trials, uint64_t seed);

// Same trial loop, additionally averaging the Gaussian tail approximation
// and its certificate over the sampled profiles.
struct SweepPointStats {
    McEstimate mc;
    double clt_mean = 0.0;
    double clt_error_bound_mean = 0.0;
};

SweepPointStats mc_sweep_point(const SamplingSpec& spec, const OuterCode& outer,
                               OutcomeTable& table, int64_t trials, uint64_t seed);

// Direct channel simulation of majority voting on one position: r noisy
// reads, uniform tie break, error tally. Cross-validates the analytical
// consensus error rate.
McEstimate simulate_consensus(double epsilon, int r, int64_t trials, uint64_t seed);

// Exhaustive decoding census of a small generalized Reed-Solomon code over a
// prime field: every error pattern is decoded by nearest-codeword search
// with radius t and classified as success / miscorrection / failure.
struct BruteForceInnerResult {
    Outcome outcome;
    std::vector<double> eta;               // per-weight miscorrection fraction
    std::vector<uint64_t> miscorrections;  // weight-indexed pattern counts
    std::vector<uint64_t> patterns;        // total patterns per weight
};

// Requires prime q and q^n_sym <= 10^6.
BruteForceInnerResult brute_force_inner(const InnerCode& code, double eps_sym);

// Exact Pr(sum of scores >= K) by enumerating all 3^N outcome vectors
// (N <= 8).
double brute_force_score(std::span<const Outcome> strands, int64_t K);
double brute_force_score(std::span<const int> profile, const OutcomeTable& table, int64_t K);

// Empirical joint tallies of (H0, H~) over sampled Poisson profiles;
// counts[h0][h_tilde], both indexed 0..N.
std::vector<std::vector<int64_t>> mc_joint_frequency(const SamplingSpec& spec, int r_prime,
                                                     int64_t trials, uint64_t seed);

// Cross-validation suites pairing every analytical quantity with its
// independent oracle at fixed seeds. Prints one line per suite and
// "ORACLES OK" when everything agrees.
bool run_oracles(std::ostream& os);

}  // namespace mdsrel
