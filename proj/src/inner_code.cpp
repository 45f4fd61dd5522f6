#include "mdsrel/inner_code.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "mdsrel/consensus.hpp"
#include "mdsrel/prob.hpp"

namespace mdsrel {

namespace {

void validate(const InnerCode& code) {
    if (code.n_sym < 1 || code.k_sym < 1 || code.k_sym > code.n_sym) {
        throw std::domain_error("InnerCode: need 1 <= k_sym <= n_sym");
    }
    if ((code.n_sym - code.k_sym) % 2 != 0) {
        throw std::domain_error("InnerCode: n_sym - k_sym must be even");
    }
    if (code.q < code.n_sym) {
        throw std::domain_error("InnerCode: alphabet size must be >= n_sym");
    }
}

mpz_class mpz_binomial(unsigned long n, unsigned long k) {
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

mpz_class mpz_power(const mpz_class& base, unsigned long e) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

// Number of words of Hamming weight i within distance <= t of a fixed word
// of weight h, in length-n space over an alphabet of size q. A word at
// distance s = a + b + c from the center is built by zeroing a of the h
// nonzero positions, changing b of them to a different nonzero value, and
// raising c of the n - h zero positions.
mpz_class sphere_shell_count(int n, long long q, int t, int h, int i) {
    mpz_class total = 0;
    const mpz_class qm1 = mpz_class(static_cast<unsigned long>(q - 1));
    const mpz_class qm2 = mpz_class(static_cast<unsigned long>(q - 2));
    for (int s = 0; s <= t; ++s) {
        for (int a = 0; a <= std::min(s, h); ++a) {
            for (int b = 0; a + b <= s && b <= h - a; ++b) {
                const int c = s - a - b;
                if (c > n - h) continue;
                if (h - a + c != i) continue;
                mpz_class term = mpz_binomial(h, a);
                term *= mpz_binomial(h - a, b);
                term *= mpz_power(qm2, b);
                term *= mpz_binomial(n - h, c);
                term *= mpz_power(qm1, c);
                total += term;
            }
        }
    }
    return total;
}

std::shared_ptr<const std::vector<double>> eta_table(const InnerCode& code) {
    using Key = std::tuple<int, int, long long>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;

    const Key key{code.n_sym, code.k_sym, code.q};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    const int n = code.n_sym;
    const int t = code.t;
    const auto weights = mds_weight_distribution(code);
    auto etas = std::make_shared<std::vector<double>>(static_cast<size_t>(n) + 1, 0.0);
    const mpz_class qm1 = mpz_class(static_cast<unsigned long>(code.q - 1));
    for (int i = t + 1; i <= n; ++i) {
        mpz_class decodable = 0;
        for (int h = code.d_min(); h <= n; ++h) {
            if (weights[static_cast<size_t>(h)] == 0) continue;
            decodable += weights[static_cast<size_t>(h)] * sphere_shell_count(n, code.q, t, h, i);
        }
        const mpz_class shell = mpz_binomial(n, i) * mpz_power(qm1, i);
        (*etas)[static_cast<size_t>(i)] = mpq_class(decodable, shell).get_d();
    }

    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(key, etas);
    return it->second;
}

}  // namespace

InnerCode InnerCode::from_bits(int n_sym, int k_sym, int m) {
    if (m < 2 || m % 2 != 0 || m > 62) {
        throw std::domain_error("InnerCode: m must be even, >= 2 and <= 62");
    }
    InnerCode code{n_sym, k_sym, 1LL << m, m, (n_sym - k_sym) / 2};
    validate(code);
    return code;
}

InnerCode InnerCode::with_alphabet(int n_sym, int k_sym, long long q) {
    InnerCode code{n_sym, k_sym, q, 0, (n_sym - k_sym) / 2};
    validate(code);
    return code;
}

std::vector<mpz_class> mds_weight_distribution(const InnerCode& code) {
    validate(code);
    const int n = code.n_sym;
    const int d = code.d_min();
    const mpz_class q = mpz_class(static_cast<unsigned long>(code.q));
    std::vector<mpz_class> weights(static_cast<size_t>(n) + 1, 0);
    weights[0] = 1;
    for (int h = d; h <= n; ++h) {
        mpz_class inner = 0;
        for (int j = 0; j <= h - d; ++j) {
            mpz_class term = mpz_binomial(h, j) *
                             (mpz_power(q, static_cast<unsigned long>(h - d + 1 - j)) - 1);
            if (j % 2 == 0) {
                inner += term;
            } else {
                inner -= term;
            }
        }
        weights[static_cast<size_t>(h)] = mpz_binomial(n, h) * inner;
        if (weights[static_cast<size_t>(h)] < 0) {
            throw std::logic_error("mds_weight_distribution: negative coefficient");
        }
    }
    return weights;
}

double miscorrection_fraction(const InnerCode& code, int i) {
    validate(code);
    if (code.t < 1) throw std::domain_error("miscorrection_fraction: requires t >= 1");
    if (i < code.t + 1 || i > code.n_sym) {
        throw std::domain_error("miscorrection_fraction: i outside [t+1, n]");
    }
    return (*eta_table(code))[static_cast<size_t>(i)];
}

std::vector<double> miscorrection_fractions(const InnerCode& code) {
    validate(code);
    if (code.t < 1) throw std::domain_error("miscorrection_fractions: requires t >= 1");
    return *eta_table(code);
}

Outcome outcome_probs(const InnerCode& code, double eps_sym) {
    validate(code);
    if (!(eps_sym >= 0.0 && eps_sym <= 1.0)) {
        throw std::domain_error("outcome_probs: eps_sym outside [0, 1]");
    }
    const int n = code.n_sym;
    if (code.t == 0) {
        // Rate-1 code: every word decodes, so residual errors are all
        // undetected and nothing is ever erased.
        const double alpha = std::exp(n * std::log1p(-eps_sym));
        return {alpha, 1.0 - alpha, 0.0};
    }
    const auto point = binomial_pmf_cdf(code.t, n, eps_sym);
    const double alpha = point.cdf;
    const auto& etas = *eta_table(code);
    double beta = 0.0;
    double gamma = 0.0;
    for (int i = n; i >= code.t + 1; --i) {
        const double f = binomial_pmf_cdf(i, n, eps_sym).pmf;
        beta += etas[static_cast<size_t>(i)] * f;
        gamma += (1.0 - etas[static_cast<size_t>(i)]) * f;
    }
    return {alpha, beta, gamma};
}

OutcomeTable build_outcome_table(const InnerCode& code, double epsilon, int r_max) {
    if (r_max < 1) throw std::domain_error("build_outcome_table: r_max must be >= 1");
    if (code.m < 2) {
        throw std::domain_error("build_outcome_table: code must carry m bits per symbol");
    }
    OutcomeTable table;
    table.code = code;
    table.epsilon = epsilon;
    table.entries.push_back({0.0, 0.0, 1.0});
    table.eps_r.push_back(0.0);
    table.eps_sym_r.push_back(0.0);
    extend_outcome_table(table, r_max);
    return table;
}

void extend_outcome_table(OutcomeTable& table, int r_max) {
    if (r_max <= table.r_max()) return;
    if (table.epsilon == 0.0) {
        // Noiseless channel: any read decodes perfectly.
        for (int r = table.r_max() + 1; r <= r_max; ++r) {
            table.entries.push_back({1.0, 0.0, 0.0});
            table.eps_r.push_back(0.0);
            table.eps_sym_r.push_back(0.0);
        }
        return;
    }
    const auto rates = consensus_rates_upto(table.epsilon, r_max, table.code.m);
    for (int r = table.r_max() + 1; r <= r_max; ++r) {
        const auto& rate = rates[static_cast<size_t>(r - 1)];
        table.entries.push_back(outcome_probs(table.code, rate.eps_sym_r));
        table.eps_r.push_back(rate.eps_r);
        table.eps_sym_r.push_back(rate.eps_sym_r);
    }
}

}  // namespace mdsrel
