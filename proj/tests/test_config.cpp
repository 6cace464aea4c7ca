#include <doctest.h>

#include <string>

#include "config.hpp"

using namespace jlva;

TEST_CASE("defaults equal the reference contract") {
    const RunConfig c;
    CHECK(c.a == 0.00258);
    CHECK(c.b == 0.00143);
    CHECK(c.sigma2 == 0.1559);
    CHECK(c.nig1 == NigParams{3.12, 1.87, 9.24});
    CHECK(c.nig2 == NigParams{3.31, -1.43, 6.21});
    CHECK(c.spouse1 == SpouseParams{0.3, 0.07, 0.005, 1.0, 0.5});
    CHECK(c.spouse2 == SpouseParams{0.3, 0.05, 0.002, 1.0, 0.5});
    CHECK(c.notional == 100.0);
    CHECK(c.guarantee_rate == 0.02);
    CHECK(c.penalty_base == 0.95);
    CHECK(c.beta == 0.02);
    CHECK(c.baseline == 0.005);
    const auto k = build_contract(c);
    CHECK(k.K() == 2);
    CHECK(k.N() == 6);
}

TEST_CASE("canonical round trip") {
    RunConfig c;
    c.maturity = 4.0;
    c.curve_level = 0.1 + 0.2;  // not exactly 0.3
    c.seed = 18446744073709551615ull;
    c.method = "all";
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
    CHECK(parse_config(serialize_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("partial sections take defaults") {
    const RunConfig c = parse_config(
        "[market]\n[mortality]\nspouse1_eps = 0   # no contagion\n[contract]\nmaturity = 4\n[surrender]\n");
    CHECK(c.spouse1.eps == 0.0);
    CHECK(c.maturity == 4.0);
    CHECK(c.a == RunConfig{}.a);
}

TEST_CASE("errors") {
    const std::string ok = "[market]\n[mortality]\n[contract]\n[surrender]\n";
    CHECK_THROWS_WITH_AS(parse_config(ok + "[numerics]\nsampels = 3\n"), doctest::Contains("unknown key 'sampels'"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[market]\n[contract]\n[surrender]\n"),
                         doctest::Contains("mortality.spouse1_lambda0"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(ok + "[numerics]\nsamples = -5\n"), doctest::Contains("line 6"), ConfigError);
    CHECK_THROWS_AS(parse_config(ok + "[contract]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(ok + "[numerics]\nmethod = simpson\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(ok + "[bogus]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("maturity = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(ok + "[numerics]\nquad_tol = 1e-8x\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("dotted set and get") {
    RunConfig c;
    set_config_value(c, "contract.maturity", "4");
    CHECK(c.maturity == 4.0);
    CHECK(get_config_value(c, "mortality.spouse2_mu") == "0.05");
    CHECK_THROWS_AS(set_config_value(c, "contract.nope", "1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "maturity", "1"), ConfigError);
    CHECK(config_keys().size() == 41);
}

TEST_CASE("builders") {
    RunConfig c;
    c.curve = "table";
    CHECK_THROWS_AS(build_market(c), ConfigError);
    c = RunConfig{};
    c.quad_tol = 0.0;
    CHECK_THROWS_AS(build_evaluator(c), ConfigError);
    c = RunConfig{};
    c.method = "oracle";
    CHECK(build_evaluator(c).method == MethodChoice::Auto);
    CHECK(build_oracle(c).market_step == 1.0 / 64.0);
}
