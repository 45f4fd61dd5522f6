#include "mdsrel/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mdsrel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kBerryEsseenC = 0.5606;

double xlogy(int64_t x, double log_y) {
    return x == 0 ? 0.0 : static_cast<double>(x) * log_y;
}

double log_factorial(int64_t n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

// One point of the uniform-group score PMF, summed over the miscorrection
// count i in log space. Terms are unimodal in i; the walk stops once they
// fall 60 nats below the running peak on the decreasing side.
double trinomial_point(int64_t n, int64_t s, double a, double b, double g) {
    if (s < -n || s > n) return 0.0;
    const int64_t i_lo = std::max<int64_t>(-s, 0);
    const int64_t i_hi = (n - s) / 2;
    if (i_lo > i_hi) return 0.0;

    const double la = a > 0.0 ? std::log(a) : kNegInf;
    const double lb = b > 0.0 ? std::log(b) : kNegInf;
    const double lg = g > 0.0 ? std::log(g) : kNegInf;

    auto term_log = [&](int64_t i) {
        const int64_t ea = i + s;
        const int64_t eb = i;
        const int64_t eg = n - 2 * i - s;
        return log_factorial(n) - log_factorial(ea) - log_factorial(eb) - log_factorial(eg) +
               xlogy(ea, la) + xlogy(eb, lb) + xlogy(eg, lg);
    };

    if (g == 0.0) {
        // No erasures: only successes and miscorrections, n - 2i - s == 0.
        if ((n - s) % 2 != 0) return 0.0;
        const int64_t i = (n - s) / 2;
        if (i < i_lo || i > i_hi) return 0.0;
        return std::exp(term_log(i));
    }
    if (b == 0.0) {
        if (s < 0) return 0.0;
        return std::exp(term_log(0));
    }
    if (a == 0.0) {
        if (s > 0) return 0.0;
        return std::exp(term_log(-s));
    }

    const double log_ab_over_g2 = la + lb - 2.0 * lg;
    double log_t = term_log(i_lo);
    double max_log = log_t;
    double scaled = 1.0;
    for (int64_t i = i_lo; i < i_hi; ++i) {
        const double num = static_cast<double>(n - 2 * i - s) * static_cast<double>(n - 2 * i - s - 1);
        if (num <= 0.0) break;
        const double den = static_cast<double>(i + 1 + s) * static_cast<double>(i + 1);
        const double log_ratio = std::log(num) - std::log(den) + log_ab_over_g2;
        log_t += log_ratio;
        if (log_t > max_log) {
            scaled = scaled * std::exp(max_log - log_t) + 1.0;
            max_log = log_t;
        } else {
            scaled += std::exp(log_t - max_log);
            if (log_ratio < 0.0 && log_t < max_log - 60.0) break;
        }
    }
    return max_log == kNegInf ? 0.0 : std::exp(max_log) * scaled;
}

}  // namespace

void OuterCode::validate() const {
    if (K < 1 || K > N) throw std::domain_error("OuterCode: need 1 <= K <= N");
    if (M < 1) throw std::domain_error("OuterCode: need M >= 1");
    if (M < 63 && (int64_t{1} << M) < N) {
        throw std::domain_error("OuterCode: alphabet 2^M must cover N strands");
    }
}

bool success_condition_check(int64_t e_era, int64_t e_sub, const OuterCode& outer) {
    if (e_era < 0 || e_sub < 0 || e_era + e_sub > outer.N) {
        throw std::domain_error("success_condition_check: invalid error counts");
    }
    return e_era + 2 * e_sub <= outer.N - outer.K;
}

Pmf trinomial_score_pmf(int64_t n, const Outcome& o, const ScoreTrunc& trunc) {
    if (n < 0) throw std::domain_error("trinomial_score_pmf: negative group size");
    if (n == 0) return Pmf::delta(0);
    const double a = o.alpha;
    const double b = o.beta;
    const double g = o.gamma;

    int64_t lo = -n;
    int64_t hi = n;
    const bool windowed = n > 64;
    double half_width = 0.0;
    const double mu = static_cast<double>(n) * (a - b);
    if (windowed) {
        const double var = static_cast<double>(n) * (a + b - (a - b) * (a - b));
        half_width = 9.0 * std::sqrt(std::max(var, 0.0)) + 40.0;
    }

    Pmf out;
    for (;;) {
        if (windowed) {
            lo = std::max<int64_t>(-n, static_cast<int64_t>(std::floor(mu - half_width)));
            hi = std::min<int64_t>(n, static_cast<int64_t>(std::ceil(mu + half_width)));
        }
        out.offset = lo;
        out.mass.assign(static_cast<size_t>(hi - lo + 1), 0.0);
        for (int64_t s = lo; s <= hi; ++s) {
            out.mass[static_cast<size_t>(s - lo)] = trinomial_point(n, s, a, b, g);
        }
        const double missing = std::max(0.0, 1.0 - out.total());
        if (!windowed || (lo == -n && hi == n) || missing <= 2.0 * trunc.abs_tail) {
            out.lost = (lo == -n && hi == n) ? 0.0 : missing;
            out.truncated = out.lost > 0.0;
            break;
        }
        half_width = half_width * 1.6 + 40.0;
    }
    out.trim(trunc.abs_tail);
    return out;
}

ScoreDistribution score_pmf(std::span<const int> profile, const OutcomeTable& table, int64_t K,
                            const ScoreTrunc& trunc) {
    if (profile.empty()) throw std::domain_error("score_pmf: empty profile");
    std::map<int, int64_t> groups;
    for (int r : profile) {
        if (r < 0) throw std::domain_error("score_pmf: negative read count");
        if (r > table.r_max()) {
            throw std::domain_error("score_pmf: profile entry exceeds table r_max");
        }
        ++groups[r];
    }
    Pmf acc = Pmf::delta(0);
    for (const auto& [r, count] : groups) {
        Pmf group = trinomial_score_pmf(count, table.at(r), trunc);
        acc = convolve(acc, group);
        acc.trim(trunc.abs_tail);
    }
    ScoreDistribution out;
    out.success_prob = acc.tail_at_or_above(K);
    out.truncation_loss = acc.lost;
    out.pmf = std::move(acc);
    return out;
}

ScoreDistribution score_pmf_uniform(int64_t n, int r, const OutcomeTable& table, int64_t K,
                                    const ScoreTrunc& trunc) {
    if (r < 0 || r > table.r_max()) {
        throw std::domain_error("score_pmf_uniform: r outside table range");
    }
    ScoreDistribution out;
    out.pmf = trinomial_score_pmf(n, table.at(r), trunc);
    out.success_prob = out.pmf.tail_at_or_above(K);
    out.truncation_loss = out.pmf.lost;
    return out;
}

Pmf score_pmf_naive(std::span<const Outcome> strands) {
    const int64_t n = static_cast<int64_t>(strands.size());
    std::vector<double> cur(static_cast<size_t>(2 * n + 1), 0.0);
    std::vector<double> next(cur.size(), 0.0);
    cur[static_cast<size_t>(n)] = 1.0;  // score 0 at index n
    int64_t done = 0;
    for (const Outcome& o : strands) {
        ++done;
        std::fill(next.begin(), next.end(), 0.0);
        for (int64_t s = -done; s <= done; ++s) {
            const size_t i = static_cast<size_t>(s + n);
            double v = o.gamma * cur[i];
            if (s - 1 >= -n) v += o.alpha * cur[i - 1];
            if (s + 1 <= n) v += o.beta * cur[i + 1];
            next[i] = v;
        }
        std::swap(cur, next);
    }
    Pmf out;
    out.offset = -n;
    out.mass = std::move(cur);
    return out;
}

Pmf score_dp_window(std::span<const Outcome> strands, const ScoreTrunc& trunc) {
    Pmf acc = Pmf::delta(0);
    std::vector<double> next;
    for (const Outcome& o : strands) {
        const int64_t lo = acc.offset - (o.beta > 0.0 ? 1 : 0);
        const int64_t hi = acc.last() + (o.alpha > 0.0 ? 1 : 0);
        next.assign(static_cast<size_t>(hi - lo + 1), 0.0);
        double maxv = 0.0;
        for (int64_t s = lo; s <= hi; ++s) {
            double v = o.gamma * acc.at(s);
            if (o.alpha > 0.0) v += o.alpha * acc.at(s - 1);
            if (o.beta > 0.0) v += o.beta * acc.at(s + 1);
            next[static_cast<size_t>(s - lo)] = v;
            maxv = std::max(maxv, v);
        }
        acc.offset = lo;
        acc.mass.swap(next);
        // Trim both edges against the absolute-tail and relative thresholds.
        const double rel_floor = trunc.rel * maxv;
        size_t drop_lo = 0;
        double cum = 0.0;
        while (drop_lo < acc.mass.size() &&
               (cum + acc.mass[drop_lo] < trunc.abs_tail || acc.mass[drop_lo] < rel_floor)) {
            cum += acc.mass[drop_lo];
            ++drop_lo;
        }
        size_t keep_hi = acc.mass.size();
        double cum_hi = 0.0;
        while (keep_hi > drop_lo &&
               (cum_hi + acc.mass[keep_hi - 1] < trunc.abs_tail ||
                acc.mass[keep_hi - 1] < rel_floor)) {
            cum_hi += acc.mass[keep_hi - 1];
            --keep_hi;
        }
        if (drop_lo > 0 || keep_hi < acc.mass.size()) {
            acc.mass = std::vector<double>(acc.mass.begin() + static_cast<ptrdiff_t>(drop_lo),
                                           acc.mass.begin() + static_cast<ptrdiff_t>(keep_hi));
            if (acc.mass.empty()) acc.mass = {0.0};
            acc.offset += static_cast<int64_t>(drop_lo);
            acc.lost += cum + cum_hi;
            acc.truncated = true;
        }
    }
    return acc;
}

CltApprox clt_success_approx(std::span<const Outcome> strands, int64_t K) {
    double mu = 0.0;
    double var = 0.0;
    double zeta = 0.0;
    for (const Outcome& o : strands) {
        const double m = o.alpha - o.beta;
        mu += m;
        var += o.alpha + o.beta - m * m;
        zeta += o.alpha * std::pow(std::abs(1.0 - m), 3.0) +
                o.beta * std::pow(std::abs(1.0 + m), 3.0) +
                o.gamma * std::pow(std::abs(m), 3.0);
    }
    CltApprox out;
    out.mu = mu;
    out.sigma = std::sqrt(std::max(var, 0.0));
    if (out.sigma == 0.0) {
        // Degenerate profile: the score is deterministic.
        out.approx = mu >= static_cast<double>(K) ? 1.0 : 0.0;
        out.error_bound = 0.0;
        return out;
    }
    out.approx = gaussian_cdf((mu - static_cast<double>(K) + 0.5) / out.sigma);
    const double n = static_cast<double>(strands.size());
    out.error_bound = kBerryEsseenC * zeta / (std::sqrt(n) * std::pow(out.sigma, 1.5));
    return out;
}

CltApprox clt_success_approx(std::span<const int> profile, const OutcomeTable& table, int64_t K) {
    std::vector<Outcome> strands;
    strands.reserve(profile.size());
    for (int r : profile) {
        if (r < 0 || r > table.r_max()) {
            throw std::domain_error("clt_success_approx: profile entry outside table range");
        }
        strands.push_back(table.at(r));
    }
    return clt_success_approx(std::span<const Outcome>(strands), K);
}

}  // namespace mdsrel
