#include "mdsrel/consensus.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "mdsrel/prob.hpp"

namespace mdsrel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double>& log_factorial_table() {
    static std::vector<double> table = [] {
        std::vector<double> t(kConsensusEnumCap + 2);
        t[0] = 0.0;
        for (size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
        return t;
    }();
    return table;
}

// Streaming log-sum-exp accumulator: tracks the running maximum and a scaled
// linear sum so that sums of 1e7+ log-space terms stay stable.
struct LogAccumulator {
    double max_log = kNegInf;
    double scaled_sum = 0.0;

    void add(double log_term) {
        if (log_term == kNegInf) return;
        if (log_term <= max_log) {
            scaled_sum += std::exp(log_term - max_log);
        } else {
            scaled_sum = scaled_sum * std::exp(max_log - log_term) + 1.0;
            max_log = log_term;
        }
    }
    double value() const { return max_log == kNegInf ? 0.0 : std::exp(max_log) * scaled_sum; }
};

struct ConsensusSplit {
    double success;  // probability the vote recovers the base
    double failure;  // complement, accumulated directly for full precision
};

// Enumerates all compositions of r into four counts, grouping the three
// substitute counts as a sorted multiset (b >= c >= d) with permutation
// multiplicity. Both the win mass and the loss mass are accumulated, so the
// error rate does not suffer the 1 - (1 - tiny) cancellation.
ConsensusSplit consensus_split(double epsilon, int r) {
    const auto& lf = log_factorial_table();
    const double log_keep = std::log1p(-epsilon);
    const double log_sub = std::log(epsilon) - std::log(3.0);

    LogAccumulator win;
    LogAccumulator loss;
    for (int k1 = 0; k1 <= r; ++k1) {
        const int rest = r - k1;
        const double log_prefix = lf[r] - lf[k1] + k1 * log_keep + rest * log_sub;
        for (int b = (rest + 2) / 3; b <= rest; ++b) {
            for (int c = std::max(0, ((rest - b) + 1) / 2); c <= std::min(b, rest - b); ++c) {
                const int d = rest - b - c;
                if (d > c) continue;
                int perms = 6;
                if (b == c && c == d) {
                    perms = 1;
                } else if (b == c || c == d) {
                    perms = 3;
                }
                const double log_term =
                    log_prefix - lf[b] - lf[c] - lf[d] + std::log(static_cast<double>(perms));
                if (k1 > b) {
                    win.add(log_term);
                } else if (k1 == b) {
                    const int weight = 1 + (b == k1) + (c == k1) + (d == k1);
                    win.add(log_term - std::log(static_cast<double>(weight)));
                    loss.add(log_term + std::log((weight - 1) / static_cast<double>(weight)));
                } else {
                    loss.add(log_term);
                }
            }
        }
    }
    return {win.value(), loss.value()};
}

std::mutex g_cache_mutex;
std::map<std::pair<double, int>, double>& rate_cache() {
    static std::map<std::pair<double, int>, double> cache;
    return cache;
}

}  // namespace

std::vector<TallyVector> enumerate_tally_vectors(int r) {
    std::vector<TallyVector> out;
    if (r <= 0) return out;
    for (int k1 = r; k1 >= (r + 3) / 4; --k1) {
        for (int k2 = 0; k2 <= std::min(k1, r - k1); ++k2) {
            for (int k3 = 0; k3 <= std::min(k1, r - k1 - k2); ++k3) {
                const int k4 = r - k1 - k2 - k3;
                if (k4 < 0 || k4 > k1) continue;
                const int weight = 1 + (k2 == k1) + (k3 == k1) + (k4 == k1);
                out.push_back({{k1, k2, k3, k4}, weight});
            }
        }
    }
    return out;
}

double consensus_error_rate(double epsilon, int r) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::domain_error("consensus_error_rate: epsilon outside (0, 1)");
    }
    if (r < 1) throw std::domain_error("consensus_error_rate: r must be >= 1");
    const int r_eff = std::min(r, kConsensusEnumCap);

    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = rate_cache().find({epsilon, r_eff});
        if (it != rate_cache().end()) return it->second;
    }
    const double rate = consensus_split(epsilon, r_eff).failure;
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        rate_cache().emplace(std::make_pair(epsilon, r_eff), rate);
    }
    return rate;
}

double symbol_error_rate(double eps_r, int m) {
    if (m < 2 || m % 2 != 0) throw std::domain_error("symbol_error_rate: m must be even and >= 2");
    if (!(eps_r >= 0.0 && eps_r <= 1.0)) {
        throw std::domain_error("symbol_error_rate: eps_r outside [0, 1]");
    }
    if (m == 2) return eps_r;
    return -std::expm1(0.5 * m * std::log1p(-eps_r));
}

ConsensusRates consensus_rates(double epsilon, int r, int m) {
    const double eps_r = consensus_error_rate(epsilon, r);
    return {r, epsilon, eps_r, symbol_error_rate(eps_r, m), m};
}

std::vector<ConsensusRates> consensus_rates_upto(double epsilon, int r_max, int m) {
    std::vector<ConsensusRates> out;
    out.reserve(static_cast<size_t>(r_max));
    int zero_streak = 0;
    for (int r = 1; r <= r_max; ++r) {
        double eps_r;
        if (zero_streak >= 2) {
            eps_r = 0.0;
        } else {
            eps_r = consensus_error_rate(epsilon, r);
            zero_streak = (eps_r == 0.0) ? zero_streak + 1 : 0;
        }
        out.push_back({r, epsilon, eps_r, symbol_error_rate(eps_r, m), m});
    }
    return out;
}

}  // namespace mdsrel
