#include <cmath>
#include <ostream>
#include <vector>

#include "mdsrel/bounds.hpp"
#include "mdsrel/consensus.hpp"
#include "mdsrel/inner_code.hpp"
#include "mdsrel/montecarlo.hpp"
#include "mdsrel/retrieval.hpp"
#include "mdsrel/sequencing.hpp"

namespace mdsrel {

namespace {

struct OracleReport {
    std::ostream& os;
    bool all_ok = true;

    void check(const char* name, bool ok, double observed = 0.0, double reference = 0.0) {
        if (ok) {
            os << "ok - " << name << "\n";
        } else {
            os << "FAIL - " << name << " (observed " << observed << ", reference " << reference
               << ")\n";
            all_ok = false;
        }
    }
};

Outcome random_outcome(Rng& rng) {
    const double a = rng.next_double();
    const double b = rng.next_double();
    const double g = rng.next_double();
    const double sum = a + b + g;
    return {a / sum, b / sum, 1.0 - a / sum - b / sum};
}

OutcomeTable synthetic_table(Rng& rng, int r_max) {
    OutcomeTable table;
    table.entries.push_back({0.0, 0.0, 1.0});
    table.eps_r.push_back(0.0);
    table.eps_sym_r.push_back(0.0);
    for (int r = 1; r <= r_max; ++r) {
        table.entries.push_back(random_outcome(rng));
        table.eps_r.push_back(0.0);
        table.eps_sym_r.push_back(0.0);
    }
    return table;
}

}  // namespace

bool run_oracles(std::ostream& os) {
    OracleReport report{os};

    {
        // Majority voting with one or two reads passes the channel through;
        // three reads follow the closed 7-term enumeration.
        const double eps = 0.01;
        const double e1 = consensus_error_rate(eps, 1);
        const double e2 = consensus_error_rate(eps, 2);
        const double e3 = consensus_error_rate(eps, 3);
        const double e3_ref =
            1.0 - (std::pow(1.0 - eps, 3) + 3.0 * eps * std::pow(1.0 - eps, 2) +
                   (2.0 / 3.0) * eps * eps * (1.0 - eps));
        report.check("consensus single read passthrough", std::abs(e1 - eps) < 1e-12, e1, eps);
        report.check("consensus two-read tie neutrality", std::abs(e2 - eps) < 1e-12, e2, eps);
        report.check("consensus three-read closed form", std::abs(e3 - e3_ref) < 1e-12, e3, e3_ref);
    }

    {
        const double eps = 0.05;
        const int r = 5;
        const auto mc = simulate_consensus(eps, r, 200000, 7);
        const double exact = consensus_error_rate(eps, r);
        report.check("consensus vs channel simulation",
                     std::abs(mc.mean - exact) <= 4.0 * mc.stderr_, mc.mean, exact);
    }

    {
        const auto code = InnerCode::with_alphabet(4, 2, 5);
        const auto weights = mds_weight_distribution(code);
        mpz_class total = 0;
        for (const auto& w : weights) total += w;
        report.check("weight distribution sums to q^k", total == 25);

        const auto brute = brute_force_inner(code, 0.2);
        const auto analytic = outcome_probs(code, 0.2);
        bool etas_match = true;
        for (int i = code.t + 1; i <= code.n_sym; ++i) {
            const double eta = miscorrection_fraction(code, i);
            if (std::abs(eta - brute.eta[static_cast<size_t>(i)]) > 1e-12) etas_match = false;
            if (!(eta > 0.0 && eta < 1.0)) etas_match = false;
        }
        report.check("miscorrection fractions vs exhaustive census", etas_match);
        report.check("decoding outcomes vs exhaustive census",
                     std::abs(analytic.alpha - brute.outcome.alpha) < 1e-12 &&
                         std::abs(analytic.beta - brute.outcome.beta) < 1e-12 &&
                         std::abs(analytic.gamma - brute.outcome.gamma) < 1e-12);
    }

    {
        Rng rng(41);
        const auto table = synthetic_table(rng, 6);
        std::vector<int> profile = {3, 1, 6, 2, 2, 5, 0, 4};
        bool ok = true;
        for (int64_t k = -8; k <= 8; ++k) {
            const double dp = score_pmf(profile, table, k).success_prob;
            const double brute = brute_force_score(profile, table, k);
            if (std::abs(dp - brute) > 1e-12) ok = false;
        }
        report.check("score recursion vs outcome enumeration", ok);
    }

    {
        Rng rng(43);
        const auto table = synthetic_table(rng, 3);
        const int64_t n = 40;
        const Pmf closed = trinomial_score_pmf(n, table.at(2));
        std::vector<Outcome> strands(static_cast<size_t>(n), table.at(2));
        const Pmf naive = score_pmf_naive(strands);
        bool ok = true;
        for (int64_t s = -n; s <= n; ++s) {
            if (std::abs(closed.at(s) - naive.at(s)) > 1e-12) ok = false;
        }
        report.check("uniform-profile closed form vs recursion", ok);
    }

    {
        Rng rng(47);
        const auto table = synthetic_table(rng, 4);
        std::vector<int> profile(500);
        for (auto& r : profile) r = static_cast<int>(rng.next_double() * 5.0);
        const int64_t k = 120;
        const double exact = score_pmf(profile, table, k).success_prob;
        const auto clt = clt_success_approx(profile, table, k);
        report.check("gaussian tail certificate", std::abs(exact - clt.approx) <= clt.error_bound,
                     std::abs(exact - clt.approx), clt.error_bound);
    }

    {
        Rng rng(53);
        const auto table = synthetic_table(rng, 4);
        const int64_t n = 6;
        const int64_t k = 3;
        const int64_t h0 = 1;
        const int64_t h_prime = 3;
        const int r_prime = 2;
        const double bound = two_class_bound(h0, h_prime, r_prime, n, k, table);
        std::vector<Outcome> strands;
        for (int64_t j = 0; j < h_prime - h0; ++j) strands.push_back(table.at(1));
        for (int64_t j = 0; j < n - h_prime; ++j) strands.push_back(table.at(r_prime + 1));
        const double brute = brute_force_score(strands, k);
        report.check("two-class split vs enumeration", std::abs(bound - brute) < 1e-12, bound,
                     brute);
    }

    {
        SamplingSpec spec;
        spec.model = SamplingModel::kPoisson;
        spec.lambda = 8.0;
        spec.probs.assign(4, 0.25);
        spec.seed = 11;
        BoundConfig config;
        const auto joint = joint_freq_pmf(spec, 1, config);
        const auto counts = mc_joint_frequency(spec, 1, 200000, 11);
        bool ok = true;
        for (int64_t h0 = 0; h0 <= 4; ++h0) {
            for (int64_t ht = h0; ht <= 4; ++ht) {
                const double p = joint.prob(h0, ht);
                const double emp =
                    static_cast<double>(counts[static_cast<size_t>(h0)][static_cast<size_t>(ht)]) /
                    200000.0;
                const double se = std::sqrt(std::max(p * (1.0 - p) / 200000.0, 1e-12));
                if (std::abs(emp - p) > 4.0 * se) ok = false;
            }
        }
        report.check("joint read-frequency recursion vs sampling", ok);
    }

    {
        // The state-sum and mixed-score forms of the retrieval bound compute
        // the same quantity up to truncation.
        const auto inner = InnerCode::from_bits(9, 5, 4);
        OutcomeTable table = build_outcome_table(inner, 0.02, 4);
        SamplingSpec spec;
        spec.model = SamplingModel::kPoisson;
        spec.lambda = 900.0;
        spec.probs = sample_dirichlet(300, 3.0, 29);
        OuterCode outer{300, 220, 9};
        BoundConfig config;
        config.r_prime = 2;
        const auto two_dim = retrieval_bound(spec, outer, table, config);
        const auto one_dim = retrieval_bound_mixture(spec, outer, table, config);
        report.check("state-sum bound vs mixed-score bound",
                     std::abs(two_dim.bound - one_dim.bound) < 1e-9, two_dim.bound,
                     one_dim.bound);
    }

    if (report.all_ok) os << "ORACLES OK\n";
    return report.all_ok;
}

}  // namespace mdsrel
