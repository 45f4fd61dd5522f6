#include "mdsrel/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mdsrel/parallel.hpp"

namespace mdsrel {

namespace {

int min_symbol_bits(int64_t n_strands) {
    const auto width = std::bit_width(static_cast<uint64_t>(std::max<int64_t>(n_strands - 1, 1)));
    return std::max(1, static_cast<int>(width));
}

SamplingSpec poisson_spec(const std::vector<double>& probs, double lambda) {
    SamplingSpec spec;
    spec.model = SamplingModel::kPoisson;
    spec.lambda = lambda;
    spec.probs = probs;
    return spec;
}

struct ScreenValue {
    double proxy = 0.0;        // Gaussian tail estimate used for ranking
    double be_certificate = 0.0;  // 0.5606 * zeta / sigma^3 (exact, non-iid form)
};

// Gaussian proxy of the mixed-score tail used to rank r' candidates and, via
// its Berry-Esseen certificate, to skip certainly-infeasible evaluations.
ScreenValue screen_value(const std::vector<double>& probs, double lambda,
                         const OutcomeTable& table, int r_prime, int64_t K) {
    const Outcome low = table.at(1);
    const Outcome high = table.at(r_prime + 1);
    double mu = 0.0;
    double var = 0.0;
    double zeta = 0.0;
    for (double p : probs) {
        const double mean = lambda * p;
        const double q0 = std::exp(-mean);
        double term = q0;
        double qr = 0.0;
        for (int l = 1; l <= r_prime; ++l) {
            term *= mean / static_cast<double>(l);
            qr += term;
        }
        const double q2 = std::max(0.0, 1.0 - q0 - qr);
        const double a = qr * low.alpha + q2 * high.alpha;
        const double b = qr * low.beta + q2 * high.beta;
        const double g = 1.0 - a - b;
        const double m = a - b;
        mu += m;
        var += a + b - m * m;
        zeta += a * std::pow(std::abs(1.0 - m), 3.0) + b * std::pow(std::abs(1.0 + m), 3.0) +
                g * std::pow(std::abs(m), 3.0);
    }
    ScreenValue out;
    if (var <= 0.0) {
        out.proxy = mu >= static_cast<double>(K) ? 1.0 : 0.0;
        return out;
    }
    const double sigma = std::sqrt(var);
    // Evaluated at K - 1 (the score is integer valued), so the certificate
    // brackets Pr(S >= K) on both sides.
    out.proxy = gaussian_cdf((mu - static_cast<double>(K) + 1.0) / sigma);
    out.be_certificate = 0.5606 * zeta / (sigma * sigma * sigma);
    return out;
}

}  // namespace

DesignPoint DesignPoint::make(int64_t K, int k_bits, int m, int t, double rho_out) {
    if (k_bits <= 0 || m <= 0 || k_bits % m != 0) {
        throw std::domain_error("DesignPoint: k_bits must be a positive multiple of m");
    }
    if (t < 0) throw std::domain_error("DesignPoint: t must be >= 0");
    if (!(rho_out > 0.0 && rho_out <= 1.0)) {
        throw std::domain_error("DesignPoint: rho_out outside (0, 1]");
    }
    const int k_sym = k_bits / m;
    const int n_sym = k_sym + 2 * t;
    DesignPoint d;
    d.inner = InnerCode::from_bits(n_sym, k_sym, m);
    const int64_t n_strands = static_cast<int64_t>(std::ceil(static_cast<double>(K) / rho_out - 1e-9));
    d.outer = OuterCode{n_strands, K, min_symbol_bits(n_strands)};
    d.outer.validate();
    d.rho_in = static_cast<double>(k_sym) / static_cast<double>(n_sym);
    d.rho_out = rho_out;
    d.delta = 2.0 * d.rho_in * d.rho_out;
    return d;
}

std::vector<double> ChannelModel::resolve_probs(int64_t n) const {
    if (!probs_override.empty()) {
        if (static_cast<int64_t>(probs_override.size()) != n) {
            throw std::domain_error("ChannelModel: probability override has wrong length");
        }
        return probs_override;
    }
    if (xi > 0.0) return sample_dirichlet(n, xi, seed);
    std::vector<double> p(static_cast<size_t>(n), 1.0 / static_cast<double>(n));
    double total = 0.0;
    for (double v : p) total += v;
    p.back() += 1.0 - total;
    return p;
}

void ReliabilityTarget::validate() const {
    if (!(delta_th > 0.0 && delta_th < 1.0)) {
        throw std::domain_error("ReliabilityTarget: delta_th outside (0, 1)");
    }
}

double certified_bound(const DesignPoint& design, const std::vector<double>& probs,
                       double lambda, const OutcomeTable& table, const BoundPolicy& policy) {
    BoundConfig config;
    config.trunc_eps = policy.trunc_eps;
    const SamplingSpec spec = poisson_spec(probs, lambda);
    if (policy.r_prime > 0) {
        config.r_prime = policy.r_prime;
        return retrieval_bound_mixture(spec, design.outer, table, config).bound;
    }
    const int cap = std::min(policy.r_prime_cap, table.r_max() - 1);
    if (cap < 1) throw std::domain_error("certified_bound: table too small for any r_prime");
    std::vector<std::pair<ScreenValue, int>> ranked;
    ranked.reserve(static_cast<size_t>(cap));
    for (int r = 1; r <= cap; ++r) {
        ranked.emplace_back(screen_value(probs, lambda, table, r, design.outer.K), r);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first.proxy > b.first.proxy;
    });
    if (policy.skip_if_clt_below >= 0.0) {
        bool certainly_below = true;
        double fallback = 0.0;
        for (const auto& [screen, r] : ranked) {
            if (screen.proxy + screen.be_certificate >= policy.skip_if_clt_below) {
                certainly_below = false;
                break;
            }
            fallback = std::max(fallback, screen.proxy - screen.be_certificate);
        }
        if (certainly_below) return std::max(fallback, 0.0);
    }
    const int exact = std::max(1, std::min<int>(policy.exact_candidates, cap));
    double best = 0.0;
    for (int i = 0; i < exact; ++i) {
        config.r_prime = ranked[static_cast<size_t>(i)].second;
        best = std::max(best, retrieval_bound_mixture(spec, design.outer, table, config).bound);
    }
    return best;
}

MinReadsResult min_reads(const DesignPoint& design, const ChannelModel& channel,
                         const ReliabilityTarget& target, const MinReadsOptions& options) {
    target.validate();
    const double goal = 1.0 - target.delta_th;
    const auto probs = channel.resolve_probs(design.outer.N);
    OutcomeTable table = build_outcome_table(
        design.inner, channel.epsilon,
        std::max(2, (options.policy.r_prime > 0 ? options.policy.r_prime
                                                : options.policy.r_prime_cap) + 1));
    auto eval = [&](double lambda) {
        return certified_bound(design, probs, lambda, table, options.policy);
    };

    const double k = static_cast<double>(design.outer.K);
    double lo = options.lambda_lo > 0.0 ? options.lambda_lo : k;
    double hi = options.lambda_hi > 0.0 ? options.lambda_hi : 8.0 * k;
    double bound_lo = eval(lo);
    double bound_hi = eval(hi);
    int widenings = 0;
    while (bound_hi < goal && widenings < options.max_widenings) {
        hi *= 2.0;
        bound_hi = eval(hi);
        ++widenings;
    }
    while (bound_lo >= goal && widenings < options.max_widenings) {
        lo *= 0.5;
        bound_lo = eval(lo);
        ++widenings;
    }
    if (!(bound_lo < goal && goal <= bound_hi)) {
        std::ostringstream msg;
        msg << "min_reads: no bracket: bound(" << lo << ") = " << bound_lo << ", bound(" << hi
            << ") = " << bound_hi << ", target " << goal;
        throw std::runtime_error(msg.str());
    }

    // Coarse scan: verifies the bound rises monotonically across the bracket
    // before trusting bisection.
    const int points = std::max(2, options.scan_points);
    std::vector<double> lambdas(static_cast<size_t>(points));
    std::vector<double> values(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        lambdas[static_cast<size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    parallel_for(points, [&](int64_t i) {
        values[static_cast<size_t>(i)] = eval(lambdas[static_cast<size_t>(i)]);
    });

    MinReadsResult out;
    out.monotone_scan = true;
    for (int i = 0; i + 1 < points; ++i) {
        if (values[static_cast<size_t>(i + 1)] < values[static_cast<size_t>(i)] - 1e-12) {
            out.monotone_scan = false;
            break;
        }
    }

    double star = hi;
    if (out.monotone_scan) {
        double b_lo = lo;
        double b_hi = hi;
        for (int i = 0; i < points; ++i) {
            if (values[static_cast<size_t>(i)] >= goal) {
                b_hi = lambdas[static_cast<size_t>(i)];
                b_lo = i > 0 ? lambdas[static_cast<size_t>(i - 1)] : lo;
                break;
            }
        }
        while ((b_hi - b_lo) / b_hi > options.rel_tol) {
            const double mid = 0.5 * (b_lo + b_hi);
            if (eval(mid) >= goal) {
                b_hi = mid;
            } else {
                b_lo = mid;
            }
        }
        star = b_hi;
    } else {
        // Fine geometric scan; the bracket guarantees a crossing exists.
        double lambda = lo;
        while (lambda < hi && eval(lambda) < goal) lambda *= 1.0 + options.rel_tol;
        star = std::min(lambda, hi);
    }
    out.lambda_star = star;
    out.depth_star = star / k;
    out.bound_at_star = eval(star);
    return out;
}

OptDensityResult opt_density(int64_t K, int k_bits, int m, const ChannelModel& channel,
                             double depth, const ReliabilityTarget& target,
                             const OptDensityGrids& grids, const BoundPolicy& policy) {
    target.validate();
    if (!(depth > 0.0)) throw std::domain_error("opt_density: depth must be positive");
    if (grids.t_max < 0 || !(grids.rho_out_step > 0.0) ||
        !(grids.rho_out_lo > 0.0 && grids.rho_out_hi <= 1.0 &&
          grids.rho_out_lo <= grids.rho_out_hi)) {
        throw std::domain_error("opt_density: invalid grids");
    }
    const double goal = 1.0 - target.delta_th;
    const double lambda = depth * static_cast<double>(K);
    BoundPolicy scan_policy = policy;
    if (scan_policy.skip_if_clt_below < 0.0) scan_policy.skip_if_clt_below = goal;

    // Integer-scaled grid so that repeated runs enumerate identical rates.
    const int64_t micro_step = std::llround(grids.rho_out_step * 1e6);
    const int64_t micro_hi = std::llround(grids.rho_out_hi * 1e6);
    const int64_t micro_lo = std::llround(grids.rho_out_lo * 1e6);
    if (micro_step <= 0) throw std::domain_error("opt_density: step too small");

    OptDensityResult best;
    for (int t = 0; t <= grids.t_max; ++t) {
        const int k_sym = k_bits / m;
        const double rho_in =
            static_cast<double>(k_sym) / static_cast<double>(k_sym + 2 * t);
        if (best.feasible) {
            const double row_cap = 2.0 * rho_in * static_cast<double>(micro_hi) * 1e-6;
            if (row_cap < best.delta_star ||
                (row_cap == best.delta_star && grids.rho_out_hi <= best.rho_out_star)) {
                break;  // no remaining row can beat or out-tie the incumbent
            }
        }
        OutcomeTable table = build_outcome_table(
            InnerCode::from_bits(k_sym + 2 * t, k_sym, m), channel.epsilon,
            std::max(2, (policy.r_prime > 0 ? policy.r_prime : policy.r_prime_cap) + 1));
        for (int64_t micro = micro_hi; micro >= micro_lo; micro -= micro_step) {
            const double rho_out = static_cast<double>(micro) * 1e-6;
            const double delta = 2.0 * rho_in * rho_out;
            if (best.feasible) {
                if (delta < best.delta_star) break;
                if (delta == best.delta_star && rho_out <= best.rho_out_star) break;
            }
            const DesignPoint design = DesignPoint::make(K, k_bits, m, t, rho_out);
            const auto probs = channel.resolve_probs(design.outer.N);
            const double bound = certified_bound(design, probs, lambda, table, policy);
            if (bound >= goal) {
                best.feasible = true;
                best.delta_star = delta;
                best.rho_in_star = rho_in;
                best.rho_out_star = rho_out;
                best.t_star = t;
                best.n_star = design.outer.N;
                best.bound_at_star = bound;
                break;  // lower rho_out in this row only lowers delta
            }
        }
    }
    return best;
}

}  // namespace mdsrel
