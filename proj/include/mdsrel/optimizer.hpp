#pragma once

#include <cstdint>
#include <vector>

#include "mdsrel/bounds.hpp"
#include "mdsrel/inner_code.hpp"
#include "mdsrel/retrieval.hpp"

namespace mdsrel {

// One inner/outer rate allocation under fixed information size: k_bits of
// information per strand in m-bit symbols (k' = k_bits / m symbols, inner
// length n' = k' + 2t) and K information strands stretched to N = ceil(K /
// rho_out). delta = 2 * rho_in * rho_out is the information density in bits
// per nucleotide.
struct DesignPoint {
    double rho_in = 1.0;
    double rho_out = 1.0;
    InnerCode inner;
    OuterCode outer;
    double delta = 2.0;

    static DesignPoint make(int64_t K, int k_bits, int m, int t, double rho_out);
};

// Channel description shared across design points: substitution rate and the
// sampling-probability prior. With xi > 0 a fresh symmetric Dirichlet vector
// is drawn deterministically from (seed, N) for each strand count N; xi = 0
// means uniform probabilities. An explicit vector overrides both.
struct ChannelModel {
    double epsilon = 0.01;
    double xi = 0.0;
    uint64_t seed = 0;
    std::vector<double> probs_override;

    std::vector<double> resolve_probs(int64_t n) const;
};

struct ReliabilityTarget {
    double delta_th = 1e-6;  // success probability must reach 1 - delta_th

    void validate() const;
};

// Bound evaluation policy for the optimizers. r_prime = 0 selects the class
// threshold adaptively: candidates 1..r_prime_cap are screened by the
// Gaussian proxy of the mixed score sum and the strongest few are evaluated
// exactly; every candidate yields a valid lower bound, so the maximum is
// reported. A fixed r_prime pins the threshold.
//
// The default truncation is tighter than the standalone bound default so
// that truncation noise stays well below the 1e-12 monotonicity tolerance of
// the bisection scan.
struct BoundPolicy {
    int r_prime = 0;
    int r_prime_cap = 10;
    int exact_candidates = 3;
    double trunc_eps = 1e-14;
    // When >= 0: skip the exact evaluation if even the Gaussian value plus
    // its Berry-Esseen certificate stays below this threshold for every
    // candidate. The exact bound can only be smaller, so feasibility
    // decisions against the threshold are unchanged; the returned value is
    // the certified Gaussian lower bound (clamped at 0).
    double skip_if_clt_below = -1.0;
};

// Certified lower bound on retrieval success for one design at Poisson read
// budget lambda. The table must cover r_prime_cap + 1 reads.
double certified_bound(const DesignPoint& design, const std::vector<double>& probs,
                       double lambda, const OutcomeTable& table, const BoundPolicy& policy);

struct MinReadsOptions {
    double lambda_lo = 0.0;  // 0 = start at K (read depth 1)
    double lambda_hi = 0.0;  // 0 = auto-widen from 8K
    int max_widenings = 10;
    int scan_points = 16;
    double rel_tol = 1e-3;
    BoundPolicy policy;
};

struct MinReadsResult {
    double lambda_star = 0.0;
    double depth_star = 0.0;  // lambda_star / K
    bool monotone_scan = true;
    double bound_at_star = 0.0;
};

// Smallest lambda (relative resolution rel_tol) whose certified bound meets
// the target. The bracket is widened geometrically if needed, a coarse scan
// checks that the bound is monotone across it (falling back to a fine
// geometric scan on any inversion beyond 1e-12), and bisection finishes.
// Throws std::runtime_error with both endpoint values if no bracket exists.
MinReadsResult min_reads(const DesignPoint& design, const ChannelModel& channel,
                         const ReliabilityTarget& target, const MinReadsOptions& options);

struct OptDensityGrids {
    int t_max = 20;
    double rho_out_lo = 0.10;
    double rho_out_hi = 0.995;
    double rho_out_step = 0.005;
};

struct OptDensityResult {
    bool feasible = false;
    double delta_star = 0.0;
    double rho_in_star = 0.0;
    double rho_out_star = 0.0;
    int t_star = -1;
    int64_t n_star = 0;
    double bound_at_star = 0.0;
};

// Exhaustive grid search for the densest feasible allocation at read budget
// lambda = depth * K. Rows (inner rates, by integer t) are scanned in
// decreasing rho_out order, and points that cannot beat the incumbent
// density are skipped; this prunes work without changing the argmax. Ties
// break toward larger rho_out, then larger rho_in. An empty feasible set is
// reported, not thrown.
OptDensityResult opt_density(int64_t K, int k_bits, int m, const ChannelModel& channel,
                             double depth, const ReliabilityTarget& target,
                             const OptDensityGrids& grids, const BoundPolicy& policy);

}  // namespace mdsrel
