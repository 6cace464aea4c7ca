#include <doctest.h>

#include <cmath>

#include "contract.hpp"

using namespace jlva;

TEST_CASE("standard grids") {
    const auto c = ContractSpec::standard(3.0);
    CHECK(c.K() == 2);
    CHECK(c.N() == 6);
    CHECK(c.t(2) == 2.0);
    CHECK(c.tbar(6) == 3.0);
    CHECK_NOTHROW(c.validate());
    const auto c4 = ContractSpec::standard(4.0);
    CHECK(c4.K() == 3);
    CHECK(c4.N() == 8);
}

TEST_CASE("penalty schedule") {
    const auto c = ContractSpec::standard(3.0);
    CHECK(c.penalty_factor(0.0) == doctest::Approx(0.95));
    CHECK(c.penalty_factor(3.0) == doctest::Approx(1.0));
    CHECK(c.penalty_p(1.5) == doctest::Approx(-std::log(0.975)));
    CHECK_THROWS_AS(c.penalty_factor(4.0), NumericError);
}

TEST_CASE("death branch index") {
    const auto c = ContractSpec::standard(4.0);  // t = 0,1,2,3
    CHECK(c.death_branch(1) == 0);  // 0.5
    CHECK(c.death_branch(2) == 0);  // 1.0, not strictly after t_1
    CHECK(c.death_branch(3) == 1);  // 1.5
    CHECK(c.death_branch(5) == 2);  // 2.5
    CHECK(c.death_branch(8) == 2);  // t_3 = 3 is the last date, so j stops at K - 1
}

TEST_CASE("contract validation names the offending field") {
    auto c = ContractSpec::standard(3.0);
    c.death_multiplier = 2.5;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("death_multiplier"), ConfigError);
    c = ContractSpec::standard(3.0);
    c.surrender_beta = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(ContractSpec::standard(1.0).validate(), ConfigError);
    c = ContractSpec::standard(3.0, 1.0, 0.4);
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("death grid"), ConfigError);
}

TEST_CASE("surrender weights") {
    auto c = ContractSpec::standard(4.0);
    c.surrender_beta = 0.1;
    const auto w = surrender_intensity_weights(c);
    REQUIRE(w.size() == 2);
    CHECK(w[0].gamma == doctest::Approx(0.1));
    CHECK(c.surrender_prefactor(3) == doctest::Approx(std::exp(-0.005 * 2.0)));
}

TEST_CASE("w constants") {
    MarketModel m;
    const auto c = ContractSpec::standard(3.0);
    const auto w = w_constants(m, c);
    const double T = 3.0;
    const double base = m.drift_integral(0.0, 1.0, T) + 0.02 * T - 0.02 * T;
    CHECK(w.w[1] == doctest::Approx(base - m.omega(1.0) - c.penalty_p(1.0)).epsilon(1e-12));
    CHECK(w.wK == doctest::Approx(m.drift_integral(0.0, T, T) - m.omega(T)).epsilon(1e-12));
    CHECK(w.wbar[3] == doctest::Approx(m.drift_integral(0.0, 1.5, 1.5) + 0.03 - m.omega(1.5)).epsilon(1e-12));
    CHECK(w.drift_T == doctest::Approx(m.drift_integral(0.0, T, T)).epsilon(1e-12));
}
