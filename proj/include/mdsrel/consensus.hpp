#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mdsrel {

// Exact post-consensus error rates for base-by-base majority voting over the
// quaternary alphabet, ties broken uniformly at random.
//
// A tally vector (k1, k2, k3, k4) counts, across r reads of one position, how
// many reads kept the transmitted base (k1) and how many carried each of the
// three substitutes. Majority voting recovers the base iff k1 ties or beats
// every other count; a tie among `weight` leaders is won with probability
// 1/weight.

struct TallyVector {
    std::array<int, 4> kappa;
    int weight;  // number of counts equal to kappa[0], including itself
};

// All tally vectors with sum r and kappa[0] >= kappa[1], kappa[2], kappa[3]
// (the vote outcomes in which the correct base can win). r = 0 yields an
// empty set. Materializes O(r^3) entries; intended for small r.
std::vector<TallyVector> enumerate_tally_vectors(int r);

// Enumeration cap: beyond this read count the error rate is clamped to the
// cap value, which is already far below 1e-15 for any epsilon <= 0.1.
inline constexpr int kConsensusEnumCap = 512;

// Post-consensus nucleotide error rate for r >= 1 reads under substitution
// probability epsilon in (0, 1). Evaluated by exact enumeration in log space
// and memoized on (epsilon, r); thread safe.
double consensus_error_rate(double epsilon, int r);

// Per-symbol error rate for symbols of m bits (m even, >= 2), i.e. m/2
// nucleotides per symbol: 1 - (1 - eps_r)^(m/2), computed at full precision
// for tiny eps_r.
double symbol_error_rate(double eps_r, int m);

struct ConsensusRates {
    int r = 0;
    double epsilon = 0.0;
    double eps_r = 0.0;      // nucleotide error rate after voting
    double eps_sym_r = 0.0;  // symbol error rate for m-bit symbols
    int m = 2;
};

ConsensusRates consensus_rates(double epsilon, int r, int m);

// Rates for r = 1..r_max computed sequentially; once two consecutive read
// counts underflow to exactly zero the remaining entries are zero without
// further enumeration.
std::vector<ConsensusRates> consensus_rates_upto(double epsilon, int r_max, int m);

}  // namespace mdsrel
