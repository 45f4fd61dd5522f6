#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mdsrel {

// Deterministic 64-bit generator: xoshiro256** state seeded through
// splitmix64. Substreams are derived from (seed, stream_id), so trial-level
// parallelism reproduces bit-for-bit regardless of scheduling. All sampling
// transforms below are implemented locally (no std::distributions), which
// pins the output across standard libraries and platforms.
class Rng {
  public:
    explicit Rng(uint64_t seed) : Rng(seed, 0) {}
    Rng(uint64_t seed, uint64_t stream_id);

    static constexpr const char* kAlgorithm =
        "xoshiro256** with splitmix64 (seed, stream) derivation";

    uint64_t next_u64();
    double next_double();                       // uniform [0, 1)
    double next_gauss();                        // standard normal, polar method
    double next_gamma(double shape);            // unit-scale gamma, shape > 0
    int64_t next_poisson(double mean);          // exact inversion with halving
    int64_t next_binomial(int64_t n, double p); // exact inversion with halving

  private:
    uint64_t state_[4];
};

enum class SamplingModel { kMultinomial, kPoisson };

// Read-sampling model: R_all draws with replacement from probs (multinomial)
// or independent per-strand Poisson counts with means lambda * probs[j].
struct SamplingSpec {
    SamplingModel model = SamplingModel::kMultinomial;
    int64_t r_all = 0;    // multinomial total
    double lambda = 0.0;  // Poisson mean of the total
    std::vector<double> probs;
    uint64_t seed = 0;

    int64_t n() const { return static_cast<int64_t>(probs.size()); }
    void validate() const;
};

// Symmetric Dirichlet draw: n independent Gamma(xi, 1) variates, normalized.
std::vector<double> sample_dirichlet(int64_t n, double xi, uint64_t seed);

// One read profile; trial_index selects the RNG substream.
std::vector<int> sample_profile(const SamplingSpec& spec, uint64_t trial_index = 0);

// Tallies h[i] = number of strands read exactly i times, with cumulative
// sums; h_cum.back() equals the strand count.
struct ReadFrequency {
    std::vector<int64_t> h;
    std::vector<int64_t> h_cum;
};

ReadFrequency read_frequency(std::span<const int> profile);

// One probability per line; '#' comments and blank lines ignored. Entries
// must be nonnegative and sum to 1 within 1e-12.
std::vector<double> load_probability_file(const std::string& path);

}  // namespace mdsrel
