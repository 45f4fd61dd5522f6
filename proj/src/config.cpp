#include "mdsrel/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace mdsrel {

namespace {

std::string strip(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& section, const std::string& key, const std::string& value) {
    T out{};
    if constexpr (std::is_floating_point_v<T>) {
        try {
            size_t used = 0;
            out = static_cast<T>(std::stod(value, &used));
            if (used != value.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError("[" + section + "] " + key + ": not a number: '" + value + "'");
        }
    } else {
        const auto* begin = value.data();
        const auto* end = begin + value.size();
        const auto res = std::from_chars(begin, end, out);
        if (res.ec != std::errc{} || res.ptr != end) {
            throw ConfigError("[" + section + "] " + key + ": not an integer: '" + value + "'");
        }
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& section, const std::string& key,
                                const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number<int>(section, key, strip(item)));
    }
    if (out.empty()) throw ConfigError("[" + section + "] " + key + ": empty list");
    return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;

    using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&,
                                      const std::string&)>;
    const std::map<std::pair<std::string, std::string>, Setter> setters = {
        {{"code", "n_prime"}, [](auto& c, auto& s, auto& k, auto& v) { c.n_prime = parse_number<int>(s, k, v); }},
        {{"code", "k_prime"}, [](auto& c, auto& s, auto& k, auto& v) { c.k_prime = parse_number<int>(s, k, v); }},
        {{"code", "m"}, [](auto& c, auto& s, auto& k, auto& v) { c.m = parse_number<int>(s, k, v); }},
        {{"code", "N"}, [](auto& c, auto& s, auto& k, auto& v) { c.N = parse_number<int64_t>(s, k, v); }},
        {{"code", "K"}, [](auto& c, auto& s, auto& k, auto& v) { c.K = parse_number<int64_t>(s, k, v); }},
        {{"code", "M"}, [](auto& c, auto& s, auto& k, auto& v) { c.M = parse_number<int>(s, k, v); }},
        {{"channel", "epsilon"}, [](auto& c, auto& s, auto& k, auto& v) { c.epsilon = parse_number<double>(s, k, v); }},
        {{"channel", "model"}, [](auto& c, auto&, auto&, auto& v) { c.model = v; }},
        {{"channel", "r_all"}, [](auto& c, auto& s, auto& k, auto& v) { c.r_all = parse_number<int64_t>(s, k, v); }},
        {{"channel", "lambda"}, [](auto& c, auto& s, auto& k, auto& v) { c.lambda = parse_number<double>(s, k, v); }},
        {{"channel", "xi"}, [](auto& c, auto& s, auto& k, auto& v) { c.xi = parse_number<double>(s, k, v); }},
        {{"channel", "p_file"}, [](auto& c, auto&, auto&, auto& v) { c.p_file = v; }},
        {{"channel", "seed"}, [](auto& c, auto& s, auto& k, auto& v) { c.seed = parse_number<uint64_t>(s, k, v); }},
        {{"bound", "r_prime"}, [](auto& c, auto&, auto&, auto& v) { c.r_prime = v; }},
        {{"bound", "trunc_eps"}, [](auto& c, auto& s, auto& k, auto& v) { c.trunc_eps = parse_number<double>(s, k, v); }},
        {{"run", "trials"}, [](auto& c, auto& s, auto& k, auto& v) { c.trials = parse_number<int64_t>(s, k, v); }},
        {{"run", "output"}, [](auto& c, auto&, auto&, auto& v) { c.output = v; }},
        {{"run", "format"}, [](auto& c, auto&, auto&, auto& v) { c.format = v; }},
        {{"run", "delta_th"}, [](auto& c, auto& s, auto& k, auto& v) { c.delta_th = parse_number<double>(s, k, v); }},
        {{"run", "r_all_from"}, [](auto& c, auto& s, auto& k, auto& v) { c.r_all_from = parse_number<int64_t>(s, k, v); }},
        {{"run", "r_all_to"}, [](auto& c, auto& s, auto& k, auto& v) { c.r_all_to = parse_number<int64_t>(s, k, v); }},
        {{"run", "r_all_step"}, [](auto& c, auto& s, auto& k, auto& v) { c.r_all_step = parse_number<int64_t>(s, k, v); }},
        {{"run", "depth"}, [](auto& c, auto& s, auto& k, auto& v) { c.depth = parse_number<double>(s, k, v); }},
        {{"run", "depth_from"}, [](auto& c, auto& s, auto& k, auto& v) { c.depth_from = parse_number<double>(s, k, v); }},
        {{"run", "depth_to"}, [](auto& c, auto& s, auto& k, auto& v) { c.depth_to = parse_number<double>(s, k, v); }},
        {{"run", "depth_step"}, [](auto& c, auto& s, auto& k, auto& v) { c.depth_step = parse_number<double>(s, k, v); }},
        {{"run", "rho_out_from"}, [](auto& c, auto& s, auto& k, auto& v) { c.rho_out_from = parse_number<double>(s, k, v); }},
        {{"run", "rho_out_to"}, [](auto& c, auto& s, auto& k, auto& v) { c.rho_out_to = parse_number<double>(s, k, v); }},
        {{"run", "rho_out_step"}, [](auto& c, auto& s, auto& k, auto& v) { c.rho_out_step = parse_number<double>(s, k, v); }},
        {{"run", "t_list"}, [](auto& c, auto& s, auto& k, auto& v) { c.t_list = parse_int_list(s, k, v); }},
        {{"run", "t_max"}, [](auto& c, auto& s, auto& k, auto& v) { c.t_max = parse_number<int>(s, k, v); }},
        {{"run", "lambda_lo"}, [](auto& c, auto& s, auto& k, auto& v) { c.lambda_lo = parse_number<double>(s, k, v); }},
        {{"run", "lambda_hi"}, [](auto& c, auto& s, auto& k, auto& v) { c.lambda_hi = parse_number<double>(s, k, v); }},
        {{"run", "profile_file"}, [](auto& c, auto&, auto&, auto& v) { c.profile_file = v; }},
        {{"run", "r_max"}, [](auto& c, auto& s, auto& k, auto& v) { c.r_max = parse_number<int>(s, k, v); }},
    };

    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            }
            section = strip(line.substr(1, line.size() - 2));
            if (section != "code" && section != "channel" && section != "bound" &&
                section != "run") {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        const auto it = setters.find({section, key});
        if (it == setters.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                              "' in section [" + section + "]");
        }
        it->second(cfg, section, key, value);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

InnerCode ExperimentConfig::inner_code() const {
    if (!n_prime || !k_prime || !m) {
        throw ConfigError("[code] n_prime, k_prime and m are required");
    }
    try {
        return InnerCode::from_bits(*n_prime, *k_prime, *m);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("[code] invalid inner code: ") + e.what());
    }
}

OuterCode ExperimentConfig::outer_code() const {
    if (!N || !K) throw ConfigError("[code] N and K are required");
    OuterCode outer{*N, *K, M ? *M : 0};
    if (!M) {
        int bits = 1;
        while (bits < 63 && (int64_t{1} << bits) < *N) ++bits;
        outer.M = bits;
    }
    try {
        outer.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("[code] invalid outer code: ") + e.what());
    }
    return outer;
}

double ExperimentConfig::epsilon_value() const {
    if (!epsilon) throw ConfigError("[channel] epsilon is required");
    if (!(*epsilon > 0.0 && *epsilon < 1.0)) {
        throw ConfigError("[channel] epsilon must lie in (0, 1)");
    }
    return *epsilon;
}

uint64_t ExperimentConfig::seed_value() const { return seed.value_or(0); }

int ExperimentConfig::resolved_r_prime() const {
    if (!r_prime || *r_prime == "auto") return 0;
    try {
        const int value = parse_number<int>("bound", "r_prime", *r_prime);
        if (value < 1) throw ConfigError("[bound] r_prime must be >= 1 or 'auto'");
        return value;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("[bound] r_prime must be an integer or 'auto'");
    }
}

double ExperimentConfig::trunc_eps_value() const {
    const double value = trunc_eps.value_or(1e-12);
    if (!(value > 0.0 && value <= 1e-6)) {
        throw ConfigError("[bound] trunc_eps must lie in (0, 1e-6]");
    }
    return value;
}

std::vector<double> ExperimentConfig::resolve_probs(int64_t n) const {
    if (p_file) {
        auto probs = load_probability_file(*p_file);
        if (static_cast<int64_t>(probs.size()) != n) {
            throw ConfigError("[channel] p_file has " + std::to_string(probs.size()) +
                              " entries, expected " + std::to_string(n));
        }
        return probs;
    }
    if (xi && *xi > 0.0) return sample_dirichlet(n, *xi, seed_value());
    std::vector<double> p(static_cast<size_t>(n), 1.0 / static_cast<double>(n));
    double total = 0.0;
    for (double v : p) total += v;
    p.back() += 1.0 - total;
    return p;
}

SamplingSpec ExperimentConfig::sampling_spec() const {
    if (!N) throw ConfigError("[code] N is required");
    SamplingSpec spec;
    spec.probs = resolve_probs(*N);
    spec.seed = seed_value();
    const std::string kind = model.value_or("multinomial");
    if (kind == "multinomial") {
        spec.model = SamplingModel::kMultinomial;
        if (!r_all) throw ConfigError("[channel] r_all is required for the multinomial model");
        spec.r_all = *r_all;
    } else if (kind == "poisson") {
        spec.model = SamplingModel::kPoisson;
        if (!lambda) throw ConfigError("[channel] lambda is required for the poisson model");
        spec.lambda = *lambda;
    } else {
        throw ConfigError("[channel] model must be 'multinomial' or 'poisson'");
    }
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("[channel] invalid sampling spec: ") + e.what());
    }
    return spec;
}

}  // namespace mdsrel
