#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "mdsrel/inner_code.hpp"
#include "mdsrel/prob.hpp"
#include "mdsrel/retrieval.hpp"
#include "mdsrel/sequencing.hpp"

namespace mdsrel {

// Truncation policy for the joint read-frequency recursion. States below
// trunc_eps times the current maximum state probability are dropped (their
// mass is accounted, never redistributed), and each dimension of the state
// window is hard-capped at window_cap_factor * sqrt(N log N).
struct BoundConfig {
    int r_prime = 0;  // 0 = auto (largest alpha jump)
    double trunc_eps = 1e-12;
    double window_cap_factor = 8.0;

    void validate() const;
};

// Read-count class threshold: the largest jump alpha_(r+1) - alpha_(r) over
// r in [1, r_max - 1]; ties resolve to the smallest r.
int choose_r_prime(const OutcomeTable& table);

// Joint PMF of (H0, H~) where H0 counts unread strands and H~ counts strands
// with at most r_prime reads, under independent Poisson read counts. Stored
// on a rectangular window in (h0, d = h_tilde - h0) coordinates.
class JointFreqPmf {
  public:
    double prob(int64_t h0, int64_t h_tilde) const;
    void for_each_state(const std::function<void(int64_t h0, int64_t h_tilde, double p)>& fn) const;
    // Marginal of H0 over the retained states, indexed from h0_lo().
    std::vector<double> marginal_h0() const;

    int64_t h0_lo() const { return h0_lo_; }
    int64_t h0_hi() const { return h0_lo_ + n_h0_ - 1; }
    double retained_mass() const { return retained_mass_; }
    double dropped_mass() const { return dropped_mass_; }

  private:
    friend JointFreqPmf joint_freq_pmf(const SamplingSpec&, int, const BoundConfig&);
    int64_t h0_lo_ = 0;
    int64_t d_lo_ = 0;
    int64_t n_h0_ = 0;
    int64_t n_d_ = 0;
    std::vector<double> g_;  // row-major [h0][d]
    double retained_mass_ = 0.0;
    double dropped_mass_ = 0.0;
};

// Forward recursion over strands: a strand contributes (h0+1, h~+1) with the
// probability of zero reads, (h~+1) with the probability of 1..r_prime
// reads, and leaves the pair unchanged otherwise. Poisson model only; the
// multinomial model must be approximated by the caller via lambda = R_all.
JointFreqPmf joint_freq_pmf(const SamplingSpec& spec, int r_prime, const BoundConfig& config);

// Conservative success probability given h0 unread strands and h_prime
// strands read at most r_prime times: the h_prime - h0 lightly-read strands
// are scored as if read once and the N - h_prime remaining strands as if
// read exactly r_prime + 1 times; the two independent score sums are
// convolved and the tail at K taken, optionally restricted to score values
// s_set of the lightly-read class.
double two_class_bound(int64_t h0, int64_t h_prime, int r_prime, int64_t N, int64_t K,
                       const OutcomeTable& table,
                       const std::optional<std::vector<int64_t>>& s_set = std::nullopt);

struct BoundResult {
    double bound = 0.0;         // certified lower bound on retrieval success
    double mass_deficit = 0.0;  // joint-PMF probability outside retained states
    int r_prime = 0;
    double truncation_loss = 0.0;  // score-support mass dropped inside class sums
};

// Caches two-class tail evaluations keyed by the class sizes so that sweeps
// over lambda reuse them; the score-sum families are grown incrementally one
// strand at a time.
class TwoClassEvaluator {
  public:
    TwoClassEvaluator(const OutcomeTable& table, int r_prime, int64_t K,
                      double tail_eps = 1e-15);

    double tail(int64_t n_low, int64_t n_high);
    double truncation_loss() const { return truncation_loss_; }

  private:
    const Pmf& low_pmf(int64_t n);
    const Pmf& high_pmf(int64_t n);

    Outcome low_outcome_;
    Outcome high_outcome_;
    int64_t threshold_;
    double tail_eps_;
    std::vector<Pmf> low_family_;
    std::vector<Pmf> high_family_;
    std::unordered_map<uint64_t, double> cache_;
    double truncation_loss_ = 0.0;
};

// Lower bound on unconditional retrieval success: sum over retained
// (h0, h~) states of the two-class bound weighted by the joint PMF.
// Truncation only discards nonnegative terms, so the result stays a valid
// lower bound; the unaccounted probability is reported as mass_deficit.
BoundResult retrieval_bound(const SamplingSpec& spec, const OuterCode& outer,
                            const OutcomeTable& table, const BoundConfig& config);

// Variant sharing one evaluator across calls (e.g. a sweep over lambda);
// config.r_prime must match the evaluator's threshold.
BoundResult retrieval_bound(const SamplingSpec& spec, const OuterCode& outer,
                            const OutcomeTable& table, const BoundConfig& config,
                            TwoClassEvaluator& eval);

// Same quantity computed without materializing the joint PMF: conditioning
// on the class assignment collapses the double sum into the tail of a single
// sum of per-strand three-point scores, mixing the unread / lightly-read /
// well-read cases with their Poisson probabilities. Linear in N for fixed
// window width; used by the optimizers.
BoundResult retrieval_bound_mixture(const SamplingSpec& spec, const OuterCode& outer,
                                    const OutcomeTable& table, const BoundConfig& config);

}  // namespace mdsrel
