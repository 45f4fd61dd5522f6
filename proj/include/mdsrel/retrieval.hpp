#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdsrel/inner_code.hpp"
#include "mdsrel/prob.hpp"

namespace mdsrel {

// Outer (N, K) MDS code over 2^M-ary symbols; N - K redundant strands.
struct OuterCode {
    int64_t N = 0;
    int64_t K = 0;
    int M = 0;

    void validate() const;
};

// True iff an (N, K) MDS code recovers from e_era erasures plus e_sub
// substitutions: e_era + 2 e_sub <= N - K.
bool success_condition_check(int64_t e_era, int64_t e_sub, const OuterCode& outer);

// Distribution of the decoding score: (+1) per correct strand, (-1) per
// miscorrected strand, 0 per erasure. Retrieval succeeds when the score over
// all strands reaches K.
struct ScoreDistribution {
    Pmf pmf;
    double success_prob = 0.0;   // Pr(score >= K) over the retained support
    double truncation_loss = 0.0;
};

// Truncation policy for score DP / convolution supports. `abs_tail` drops
// cumulative tail mass below the threshold per side; `rel` additionally drops
// edge points below rel * max entry. Dropped mass is tracked in Pmf::lost, so
// tail sums stay certified lower bounds.
struct ScoreTrunc {
    double abs_tail = 1e-15;
    double rel = 0.0;
};

// Score PMF for n strands sharing one outcome triple (the uniform-profile
// closed form): Pr(S = s) = sum_i multinomial(n; i+s, i, n-2i-s)
// alpha^{i+s} beta^i gamma^{n-2i-s}. Evaluated pointwise in log space over a
// window that keeps the discarded tail below trunc.abs_tail per side.
Pmf trinomial_score_pmf(int64_t n, const Outcome& o, const ScoreTrunc& trunc = {});

// Exact score PMF for a read profile. Strands are grouped by read count,
// each group's PMF comes from the closed form above, and groups are
// convolved in ascending read-count order; identical to the strand-by-strand
// recurrence up to the tracked truncation.
ScoreDistribution score_pmf(std::span<const int> profile, const OutcomeTable& table, int64_t K,
                            const ScoreTrunc& trunc = {});

// Uniform profile: every strand read exactly r times.
ScoreDistribution score_pmf_uniform(int64_t n, int r, const OutcomeTable& table, int64_t K,
                                    const ScoreTrunc& trunc = {});

// Reference strand-by-strand recurrence over the full support [-N, N];
// O(N^2), used to cross-check the grouped path.
Pmf score_pmf_naive(std::span<const Outcome> strands);

// Windowed strand-by-strand recurrence over arbitrary per-strand triples.
Pmf score_dp_window(std::span<const Outcome> strands, const ScoreTrunc& trunc);

struct CltApprox {
    double approx = 0.0;       // Phi((mu - K + 0.5) / sigma)
    double error_bound = 0.0;  // Berry-Esseen style certificate
    double mu = 0.0;
    double sigma = 0.0;
};

// Gaussian approximation of Pr(score >= K) with a computable error bound
// C * zeta / (sqrt(N) * sigma^{3/2}), C = 0.5606, where zeta sums the third
// absolute central moments of the per-strand scores. A zero-variance profile
// is resolved by direct comparison with error bound 0.
CltApprox clt_success_approx(std::span<const int> profile, const OutcomeTable& table, int64_t K);
CltApprox clt_success_approx(std::span<const Outcome> strands, int64_t K);

}  // namespace mdsrel
