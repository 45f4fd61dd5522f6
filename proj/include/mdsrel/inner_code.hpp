#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace mdsrel {

// Parameters of an (n_sym, k_sym) MDS code over an alphabet of size q with
// bounded-distance decoding of radius t = (n_sym - k_sym) / 2.
//
// Production codes live over q = 2^m (m bits per symbol, m/2 nucleotides);
// the brute-force oracle uses small prime-field generalized Reed-Solomon
// codes, for which m is left at 0.
struct InnerCode {
    int n_sym = 0;
    int k_sym = 0;
    long long q = 0;
    int m = 0;  // bits per symbol; 0 for oracle codes over prime fields
    int t = 0;

    int d_min() const { return n_sym - k_sym + 1; }

    // q = 2^m code; requires n_sym - k_sym even and 2^m >= n_sym.
    static InnerCode from_bits(int n_sym, int k_sym, int m);
    // Explicit alphabet (used by the prime-field oracle codes).
    static InnerCode with_alphabet(int n_sym, int k_sym, long long q);
};

// MDS weight distribution A_0..A_n computed with exact integer arithmetic:
// A_0 = 1, A_h = 0 for 0 < h < d_min, and for h >= d_min
//   A_h = C(n,h) * sum_{j=0}^{h-d_min} (-1)^j C(h,j) (q^{h-d_min+1-j} - 1).
// The entries sum to q^k.
std::vector<mpz_class> mds_weight_distribution(const InnerCode& code);

// Fraction of weight-i error patterns that decode to a wrong codeword under
// radius-t bounded-distance decoding, for i in [t+1, n]. Counted exactly by
// intersecting each radius-t sphere with the weight-i shell; spheres around
// distinct codewords are disjoint for i <= n since t < d_min / 2.
// Requires t >= 1 and t + 1 <= i <= n.
double miscorrection_fraction(const InnerCode& code, int i);

// All fractions at once (index i, entries for i < t + 1 are zero); cached per
// (n_sym, k_sym, q) and safe for concurrent use.
std::vector<double> miscorrection_fractions(const InnerCode& code);

struct Outcome {
    double alpha = 0.0;  // correct decoding
    double beta = 0.0;   // undetected miscorrection
    double gamma = 1.0;  // declared failure (erasure for the outer code)
};

// Decoding-outcome probabilities at symbol error rate eps_sym:
//   alpha = F(t; n, eps_sym),  beta = sum eta_i f(i; n, eps_sym),
//   gamma = sum (1 - eta_i) f(i; n, eps_sym).
// For t = 0 every word is a codeword, so gamma = 0 and beta = 1 - alpha.
Outcome outcome_probs(const InnerCode& code, double eps_sym);

// Per-read-count decoding outcomes: consensus error rate -> symbol error
// rate -> outcome probabilities. Entry r = 0 is (0, 0, 1): an unread strand
// is an erasure.
struct OutcomeTable {
    InnerCode code;
    double epsilon = 0.0;
    std::vector<Outcome> entries;    // index r = 0..r_max
    std::vector<double> eps_r;       // nucleotide error rate per r (index 0 unused)
    std::vector<double> eps_sym_r;   // symbol error rate per r

    int r_max() const { return static_cast<int>(entries.size()) - 1; }
    const Outcome& at(int r) const { return entries.at(static_cast<size_t>(r)); }
};

OutcomeTable build_outcome_table(const InnerCode& code, double epsilon, int r_max);

// Extend an existing table in place up to r_max (no-op if already large
// enough). Entries already present are untouched.
void extend_outcome_table(OutcomeTable& table, int r_max);

}  // namespace mdsrel
