#include <doctest.h>

#include <cmath>

#include "term_structure.hpp"

using namespace jlva;

TEST_CASE("forward curve integrals") {
    const auto flat = ForwardCurve::flat(0.02);
    CHECK(flat(7.0) == 0.02);
    CHECK(flat.integral(1.0, 4.0) == doctest::Approx(0.06).epsilon(1e-15));

    const auto tab = ForwardCurve::parse_table("# t rate\n0 0.01\n2, 0.03\n4 0.03\n");
    CHECK(tab(1.0) == doctest::Approx(0.02));
    CHECK(tab(-1.0) == doctest::Approx(0.01));
    CHECK(tab(9.0) == doctest::Approx(0.03));
    // trapezoid on [0,2] plus flat 0.03 on [2,5]
    CHECK(tab.integral(0.0, 5.0) == doctest::Approx(0.04 + 0.09).epsilon(1e-14));
    CHECK(tab.integral(-1.0, 0.0) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK_THROWS_AS(ForwardCurve::parse_table("0 0.01\n0 0.02\n"), ConfigError);
}

TEST_CASE("volatility kernels") {
    MarketModel m;
    CHECK(m.big_sigma1(3.0, 3.0) == 0.0);
    CHECK(m.big_sigma1(0.0, 3.0) == doctest::Approx(1.0 - std::exp(-0.00258 * 3.0)).epsilon(1e-14));
    CHECK(m.big_sigma2(1.0, 4.0) == doctest::Approx(1.0 - std::exp(-0.00143 * 3.0)).epsilon(1e-14));
}

TEST_CASE("drift integral against a direct sum") {
    MarketModel m;
    const double T = 3.0;
    double s = 0.0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const double u = (k + 0.5) * T / n;
        s += m.drift_A(u, T) * T / n;
    }
    CHECK(m.drift_integral(0.0, T, T) == doctest::Approx(s).epsilon(1e-8));
    CHECK(m.drift_A(1.0, T) == doctest::Approx(nig_cumulant(m.nig1, m.big_sigma1(1.0, T)) +
                                               nig_cumulant(m.nig2, -m.big_sigma2(1.0, T))).epsilon(1e-14));
    CHECK(m.omega(2.0) == doctest::Approx(2.0 * nig_cumulant(m.nig2, m.sigma2)).epsilon(1e-14));
}

TEST_CASE("bond price from a flat curve") {
    MarketModel m;
    CHECK(m.bond_price0(3.0) == doctest::Approx(std::exp(-0.06)).epsilon(1e-14));
}

TEST_CASE("strip pre-validation") {
    MarketModel m;
    CHECK_NOTHROW(m.validate(3.0));
    m.sigma2 = 2.0;
    CHECK_THROWS_AS(m.validate(3.0), StripViolation);
    MarketModel bad;
    bad.a = -1.0;
    CHECK_THROWS_AS(bad.validate(3.0), ConfigError);
}
