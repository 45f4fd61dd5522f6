#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "mdsrel/config.hpp"
#include "mdsrel/csv.hpp"

using namespace mdsrel;

namespace {

const char* kSampleConfig = R"(# production configuration
[code]
n_prime = 49
k_prime = 45
m = 8
N = 10526
K = 10000
M = 360

[channel]
epsilon = 0.01
model = multinomial
r_all = 90000
xi = 3.0
seed = 42

[bound]
r_prime = 2
trunc_eps = 1e-12

[run]
trials = 1000
output = sweep.csv
)";

}  // namespace

TEST_CASE("config round trip of the production example") {
    const auto cfg = parse_config_text(kSampleConfig);
    const auto inner = cfg.inner_code();
    CHECK(inner.n_sym == 49);
    CHECK(inner.k_sym == 45);
    CHECK(inner.q == 256);
    CHECK(inner.t == 2);
    const auto outer = cfg.outer_code();
    CHECK(outer.N == 10526);
    CHECK(outer.K == 10000);
    CHECK(cfg.epsilon_value() == doctest::Approx(0.01));
    CHECK(cfg.seed_value() == 42);
    CHECK(cfg.resolved_r_prime() == 2);
    CHECK(cfg.trunc_eps_value() == doctest::Approx(1e-12));
    const auto spec = cfg.sampling_spec();
    CHECK(spec.model == SamplingModel::kMultinomial);
    CHECK(spec.r_all == 90000);
    CHECK(spec.probs.size() == 10526);
}

TEST_CASE("unknown keys and sections are rejected") {
    CHECK_THROWS_AS(parse_config_text("[code]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[nope]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("orphan = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[code]\nn_prime = forty\n"), ConfigError);
}

TEST_CASE("model requirements are enforced") {
    auto cfg = parse_config_text("[code]\nN = 100\nK = 50\n[channel]\nmodel = poisson\n");
    CHECK_THROWS_AS(cfg.sampling_spec(), ConfigError);
    cfg.lambda = 500.0;
    const auto spec = cfg.sampling_spec();
    CHECK(spec.model == SamplingModel::kPoisson);
    CHECK(spec.lambda == 500.0);

    auto bad = parse_config_text("[code]\nN = 100\nK = 50\n[channel]\nmodel = fancy\n");
    CHECK_THROWS_AS(bad.sampling_spec(), ConfigError);
}

TEST_CASE("r_prime accepts auto or integers") {
    auto cfg = parse_config_text("[bound]\nr_prime = auto\n");
    CHECK(cfg.resolved_r_prime() == 0);
    auto fixed = parse_config_text("[bound]\nr_prime = 4\n");
    CHECK(fixed.resolved_r_prime() == 4);
    auto bad = parse_config_text("[bound]\nr_prime = maybe\n");
    CHECK_THROWS_AS(bad.resolved_r_prime(), ConfigError);
}

TEST_CASE("uniform probabilities are the default prior") {
    auto cfg = parse_config_text("[code]\nN = 8\nK = 4\n");
    const auto p = cfg.resolve_probs(8);
    REQUIRE(p.size() == 8);
    double sum = 0.0;
    for (double v : p) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("csv writer quotes and formats deterministically") {
    const std::string path = "test_csv_writer_out.csv";
    {
        CsvWriter csv(path);
        csv.write_header({"name", "value"});
        csv.write_row({std::string("plain"), 0.125});
        csv.write_row({std::string("needs,quote"), int64_t{-3}});
        csv.write_row({std::string("has\"quote"), uint64_t{7}});
    }
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content ==
          "name,value\r\nplain,0.125\r\n\"needs,quote\",-3\r\n\"has\"\"quote\",7\r\n");
    std::remove(path.c_str());
    std::remove((path + ".manifest.json").c_str());
}
