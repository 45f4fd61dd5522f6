#include "mdsrel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdsrel {

namespace {

double light_class_prob(double mean, int r_prime) {
    // Pr(1 <= Pois(mean) <= r_prime), summed in increasing-term order.
    const double q0 = std::exp(-mean);
    double term = q0;
    double sum = 0.0;
    for (int l = 1; l <= r_prime; ++l) {
        term *= mean / static_cast<double>(l);
        sum += term;
    }
    return sum;
}

uint64_t pack_pair(int64_t a, int64_t b) {
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b & 0xFFFFFFFF);
}

// One strand-by-strand extension step of a score-sum PMF (3-point kernel).
Pmf extend_by_strand(const Pmf& pmf, const Outcome& o, double tail_eps) {
    Pmf out;
    out.offset = pmf.offset - (o.beta > 0.0 ? 1 : 0);
    const int64_t hi = pmf.last() + (o.alpha > 0.0 ? 1 : 0);
    out.mass.assign(static_cast<size_t>(hi - out.offset + 1), 0.0);
    for (int64_t s = out.offset; s <= hi; ++s) {
        double v = o.gamma * pmf.at(s);
        if (o.alpha > 0.0) v += o.alpha * pmf.at(s - 1);
        if (o.beta > 0.0) v += o.beta * pmf.at(s + 1);
        out.mass[static_cast<size_t>(s - out.offset)] = v;
    }
    out.truncated = pmf.truncated;
    out.lost = pmf.lost;
    out.trim(tail_eps);
    return out;
}

}  // namespace

void BoundConfig::validate() const {
    if (r_prime < 0) throw std::domain_error("BoundConfig: r_prime must be >= 0");
    if (!(trunc_eps > 0.0 && trunc_eps <= 1e-6)) {
        throw std::domain_error("BoundConfig: trunc_eps outside (0, 1e-6]");
    }
    if (!(window_cap_factor > 0.0)) {
        throw std::domain_error("BoundConfig: window_cap_factor must be positive");
    }
}

int choose_r_prime(const OutcomeTable& table) {
    if (table.r_max() < 2) throw std::domain_error("choose_r_prime: table needs r_max >= 2");
    int best_r = 1;
    double best_jump = -1.0;
    for (int r = 1; r + 1 <= table.r_max(); ++r) {
        const double jump = table.at(r + 1).alpha - table.at(r).alpha;
        if (jump > best_jump) {
            best_jump = jump;
            best_r = r;
        }
    }
    return best_r;
}

double JointFreqPmf::prob(int64_t h0, int64_t h_tilde) const {
    const int64_t d = h_tilde - h0;
    const int64_t i = h0 - h0_lo_;
    const int64_t j = d - d_lo_;
    if (i < 0 || i >= n_h0_ || j < 0 || j >= n_d_) return 0.0;
    return g_[static_cast<size_t>(i * n_d_ + j)];
}

void JointFreqPmf::for_each_state(
    const std::function<void(int64_t, int64_t, double)>& fn) const {
    for (int64_t i = 0; i < n_h0_; ++i) {
        const int64_t h0 = h0_lo_ + i;
        for (int64_t j = 0; j < n_d_; ++j) {
            const double p = g_[static_cast<size_t>(i * n_d_ + j)];
            if (p > 0.0) fn(h0, h0 + d_lo_ + j, p);
        }
    }
}

std::vector<double> JointFreqPmf::marginal_h0() const {
    std::vector<double> out(static_cast<size_t>(n_h0_), 0.0);
    for (int64_t i = 0; i < n_h0_; ++i) {
        double acc = 0.0;
        for (int64_t j = 0; j < n_d_; ++j) acc += g_[static_cast<size_t>(i * n_d_ + j)];
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

JointFreqPmf joint_freq_pmf(const SamplingSpec& spec, int r_prime, const BoundConfig& config) {
    spec.validate();
    config.validate();
    if (spec.model != SamplingModel::kPoisson) {
        throw std::domain_error(
            "joint_freq_pmf: supported for the Poisson model only; approximate the "
            "multinomial model by substituting lambda = R_all");
    }
    if (r_prime < 1) throw std::domain_error("joint_freq_pmf: r_prime must be >= 1");

    const int64_t n = spec.n();
    const double ln_n = std::log(static_cast<double>(std::max<int64_t>(n, 2)));
    const int64_t cap = std::max<int64_t>(
        8, static_cast<int64_t>(std::ceil(config.window_cap_factor *
                                          std::sqrt(static_cast<double>(n) * ln_n))));

    JointFreqPmf out;
    out.g_ = {1.0};
    out.n_h0_ = 1;
    out.n_d_ = 1;
    std::vector<double> next;
    double dropped = 0.0;

    for (int64_t j = 0; j < n; ++j) {
        const double mean = spec.lambda * spec.probs[static_cast<size_t>(j)];
        const double q0 = std::exp(-mean);
        const double qr = light_class_prob(mean, r_prime);
        if (q0 == 1.0) {
            // Strand is never read: both counters advance deterministically.
            out.h0_lo_ += 1;
            continue;
        }
        if (q0 == 0.0 && qr == 0.0) continue;  // strand is surely well-read
        const double stay = 1.0 - q0 - qr;

        const int64_t new_h0 = out.n_h0_ + (q0 > 0.0 ? 1 : 0);
        const int64_t new_d = out.n_d_ + (qr > 0.0 ? 1 : 0);
        next.assign(static_cast<size_t>(new_h0 * new_d), 0.0);
        double maxv = 0.0;
        for (int64_t i = 0; i < new_h0; ++i) {
            double* row = next.data() + i * new_d;
            const double* old_row =
                (i < out.n_h0_) ? out.g_.data() + i * out.n_d_ : nullptr;
            const double* old_prev =
                (i > 0 && i - 1 < out.n_h0_) ? out.g_.data() + (i - 1) * out.n_d_ : nullptr;
            for (int64_t d = 0; d < new_d; ++d) {
                double v = 0.0;
                if (old_row && d < out.n_d_) v += stay * old_row[d];
                if (old_row && d - 1 >= 0 && d - 1 < out.n_d_) v += qr * old_row[d - 1];
                if (old_prev && d < out.n_d_) v += q0 * old_prev[d];
                row[d] = v;
                if (v > maxv) maxv = v;
            }
        }
        out.g_.swap(next);
        out.n_h0_ = new_h0;
        out.n_d_ = new_d;

        // Trim edge rows/columns below the relative threshold, then enforce
        // the hard window cap by shedding the lighter edge.
        const double floor_v = config.trunc_eps * maxv;
        auto row_sum_max = [&](int64_t i, double& sum) {
            double mx = 0.0;
            sum = 0.0;
            const double* row = out.g_.data() + i * out.n_d_;
            for (int64_t d = 0; d < out.n_d_; ++d) {
                sum += row[d];
                mx = std::max(mx, row[d]);
            }
            return mx;
        };
        auto col_sum_max = [&](int64_t d, double& sum) {
            double mx = 0.0;
            sum = 0.0;
            for (int64_t i = 0; i < out.n_h0_; ++i) {
                const double v = out.g_[static_cast<size_t>(i * out.n_d_ + d)];
                sum += v;
                mx = std::max(mx, v);
            }
            return mx;
        };
        int64_t lo_i = 0, hi_i = out.n_h0_ - 1, lo_d = 0, hi_d = out.n_d_ - 1;
        for (;;) {
            bool changed = false;
            double sum;
            while (lo_i < hi_i && row_sum_max(lo_i, sum) < floor_v) {
                dropped += sum;
                ++lo_i;
                changed = true;
            }
            while (hi_i > lo_i && row_sum_max(hi_i, sum) < floor_v) {
                dropped += sum;
                --hi_i;
                changed = true;
            }
            while (lo_d < hi_d && col_sum_max(lo_d, sum) < floor_v) {
                dropped += sum;
                ++lo_d;
                changed = true;
            }
            while (hi_d > lo_d && col_sum_max(hi_d, sum) < floor_v) {
                dropped += sum;
                --hi_d;
                changed = true;
            }
            while (hi_i - lo_i + 1 > cap) {
                double sum_lo, sum_hi;
                row_sum_max(lo_i, sum_lo);
                row_sum_max(hi_i, sum_hi);
                if (sum_lo <= sum_hi) {
                    dropped += sum_lo;
                    ++lo_i;
                } else {
                    dropped += sum_hi;
                    --hi_i;
                }
                changed = true;
            }
            while (hi_d - lo_d + 1 > cap) {
                double sum_lo, sum_hi;
                col_sum_max(lo_d, sum_lo);
                col_sum_max(hi_d, sum_hi);
                if (sum_lo <= sum_hi) {
                    dropped += sum_lo;
                    ++lo_d;
                } else {
                    dropped += sum_hi;
                    --hi_d;
                }
                changed = true;
            }
            if (!changed) break;
        }
        if (lo_i != 0 || hi_i != out.n_h0_ - 1 || lo_d != 0 || hi_d != out.n_d_ - 1) {
            const int64_t kept_h0 = hi_i - lo_i + 1;
            const int64_t kept_d = hi_d - lo_d + 1;
            std::vector<double> compact(static_cast<size_t>(kept_h0 * kept_d));
            for (int64_t i = 0; i < kept_h0; ++i) {
                std::copy_n(out.g_.data() + (lo_i + i) * out.n_d_ + lo_d, kept_d,
                            compact.data() + i * kept_d);
            }
            out.g_.swap(compact);
            out.h0_lo_ += lo_i;
            out.d_lo_ += lo_d;
            out.n_h0_ = kept_h0;
            out.n_d_ = kept_d;
        }
    }

    double retained = 0.0;
    for (double v : out.g_) retained += v;
    out.retained_mass_ = retained;
    out.dropped_mass_ = dropped;
    return out;
}

TwoClassEvaluator::TwoClassEvaluator(const OutcomeTable& table, int r_prime, int64_t K,
                                     double tail_eps)
    : threshold_(K), tail_eps_(tail_eps) {
    if (r_prime < 1 || r_prime + 1 > table.r_max()) {
        throw std::domain_error("TwoClassEvaluator: table must cover r_prime + 1 reads");
    }
    low_outcome_ = table.at(1);
    high_outcome_ = table.at(r_prime + 1);
    low_family_.push_back(Pmf::delta(0));
    high_family_.push_back(Pmf::delta(0));
}

const Pmf& TwoClassEvaluator::low_pmf(int64_t n) {
    while (static_cast<int64_t>(low_family_.size()) <= n) {
        low_family_.push_back(extend_by_strand(low_family_.back(), low_outcome_, tail_eps_));
    }
    return low_family_[static_cast<size_t>(n)];
}

const Pmf& TwoClassEvaluator::high_pmf(int64_t n) {
    while (static_cast<int64_t>(high_family_.size()) <= n) {
        high_family_.push_back(extend_by_strand(high_family_.back(), high_outcome_, tail_eps_));
    }
    return high_family_[static_cast<size_t>(n)];
}

double TwoClassEvaluator::tail(int64_t n_low, int64_t n_high) {
    const uint64_t key = pack_pair(n_low, n_high);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const Pmf& low = low_pmf(n_low);
    const Pmf& high = high_pmf(n_high);
    double acc = 0.0;
    for (int64_t s = low.last(); s >= low.first(); --s) {
        const double w = low.at(s);
        if (w == 0.0) continue;
        acc += w * high.tail_at_or_above(threshold_ - s);
    }
    truncation_loss_ = low.lost + high.lost;
    cache_.emplace(key, acc);
    return acc;
}

double two_class_bound(int64_t h0, int64_t h_prime, int r_prime, int64_t N, int64_t K,
                       const OutcomeTable& table,
                       const std::optional<std::vector<int64_t>>& s_set) {
    if (!(0 <= h0 && h0 <= h_prime && h_prime <= N)) {
        throw std::domain_error("two_class_bound: need 0 <= h0 <= h_prime <= N");
    }
    const int64_t n_low = h_prime - h0;
    const int64_t n_high = N - h_prime;
    if (!s_set) {
        TwoClassEvaluator eval(table, r_prime, K);
        return eval.tail(n_low, n_high);
    }
    const Pmf low = trinomial_score_pmf(n_low, table.at(1));
    const Pmf high = trinomial_score_pmf(n_high, table.at(r_prime + 1));
    double acc = 0.0;
    for (int64_t s : *s_set) {
        acc += low.at(s) * high.tail_at_or_above(K - s);
    }
    return acc;
}

BoundResult retrieval_bound(const SamplingSpec& spec, const OuterCode& outer,
                            const OutcomeTable& table, const BoundConfig& config) {
    const int r_prime = config.r_prime > 0 ? config.r_prime : choose_r_prime(table);
    TwoClassEvaluator eval(table, r_prime, outer.K);
    BoundConfig pinned = config;
    pinned.r_prime = r_prime;
    return retrieval_bound(spec, outer, table, pinned, eval);
}

BoundResult retrieval_bound(const SamplingSpec& spec, const OuterCode& outer,
                            const OutcomeTable& table, const BoundConfig& config,
                            TwoClassEvaluator& eval) {
    outer.validate();
    const int r_prime = config.r_prime > 0 ? config.r_prime : choose_r_prime(table);
    const JointFreqPmf joint = joint_freq_pmf(spec, r_prime, config);
    const int64_t n = spec.n();
    double bound = 0.0;
    joint.for_each_state([&](int64_t h0, int64_t h_tilde, double p) {
        bound += p * eval.tail(h_tilde - h0, n - h_tilde);
    });
    BoundResult out;
    out.bound = bound;
    out.mass_deficit = 1.0 - joint.retained_mass();
    out.r_prime = r_prime;
    out.truncation_loss = eval.truncation_loss();
    return out;
}

BoundResult retrieval_bound_mixture(const SamplingSpec& spec, const OuterCode& outer,
                                    const OutcomeTable& table, const BoundConfig& config) {
    spec.validate();
    config.validate();
    outer.validate();
    if (spec.model != SamplingModel::kPoisson) {
        throw std::domain_error(
            "retrieval_bound_mixture: supported for the Poisson model only; approximate "
            "the multinomial model by substituting lambda = R_all");
    }
    const int r_prime = config.r_prime > 0 ? config.r_prime : choose_r_prime(table);
    if (r_prime + 1 > table.r_max()) {
        throw std::domain_error("retrieval_bound_mixture: table must cover r_prime + 1 reads");
    }
    const Outcome low = table.at(1);
    const Outcome high = table.at(r_prime + 1);
    std::vector<Outcome> mixed(spec.probs.size());
    for (size_t j = 0; j < spec.probs.size(); ++j) {
        const double mean = spec.lambda * spec.probs[j];
        const double q0 = std::exp(-mean);
        const double qr = light_class_prob(mean, r_prime);
        const double q2 = std::max(0.0, 1.0 - q0 - qr);
        Outcome& w = mixed[j];
        w.alpha = qr * low.alpha + q2 * high.alpha;
        w.beta = qr * low.beta + q2 * high.beta;
        w.gamma = 1.0 - w.alpha - w.beta;
    }
    ScoreTrunc trunc;
    trunc.abs_tail = 1e-15;
    trunc.rel = config.trunc_eps;
    const Pmf pmf = score_dp_window(mixed, trunc);
    BoundResult out;
    out.bound = pmf.tail_at_or_above(outer.K);
    out.mass_deficit = pmf.lost;
    out.r_prime = r_prime;
    out.truncation_loss = pmf.lost;
    return out;
}

}  // namespace mdsrel
