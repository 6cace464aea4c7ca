#include <doctest.h>

#include <cmath>
#include <vector>

#include "mortality.hpp"

using namespace jlva;

// Reference values from an independent evaluation of the same closed forms
// (numpy/scipy dblquad), spouse 1 = (0.3, 0.07, 0.005, 1, 0.5),
// spouse 2 = (0.3, 0.05, 0.002, 1, 0.5).

TEST_CASE("density point values") {
    CoupleMortality m;
    CHECK(m.joint_density(1.0, 2.0) == doctest::Approx(0.05117655287807773).epsilon(1e-12));
    CHECK(m.joint_density(2.0, 1.0) == doctest::Approx(0.05106135071739597).epsilon(1e-12));
    CHECK(m.joint_density(5.0, 7.5) == doctest::Approx(0.0014540268729048007).epsilon(1e-12));
    CHECK_THROWS_AS(m.joint_density(3.0, 3.0), NumericError);
}

TEST_CASE("joint survival closed form") {
    CoupleMortality m;
    const double J[] = {0.5388215486393066, 0.13913221824852304, 0.030216343285646347, 0.00026688229626714187};
    const double mm[] = {0.6183759264885013, 1.9724828561843117, 3.5001562798118364, 8.236982084788526};
    const double ts[] = {1.0, 3.0, 5.0, 10.0};
    for (int k = 0; k < 4; ++k) {
        CHECK(m.joint_survival(ts[k]) == doctest::Approx(J[k]).epsilon(1e-12));
        CHECK(m.mean_m(ts[k]) == doctest::Approx(mm[k]).epsilon(1e-12));
    }
    CHECK(m.variance_sigma2(10.0) == doctest::Approx(0.016558500152211768).epsilon(1e-10));
    CHECK(m.joint_survival(0.0) == 1.0);
}

TEST_CASE("density normalises on [0, T*] and reproduces the survival tail") {
    CoupleMortality m;
    CHECK(m.integrate_density(0.0, 60.0, 0.0, 60.0) == doctest::Approx(1.0).epsilon(1e-9));
    for (double t : {1.0, 3.0, 5.0, 10.0})
        CHECK(m.integrate_density(t, 60.0, t, 60.0) == doctest::Approx(m.joint_survival(t)).epsilon(1e-8));
}

TEST_CASE("independent case: marginals are the Gaussian-intensity survival") {
    SpouseParams a{0.3, 0.07, 0.005, 0.0, 0.5}, b{0.3, 0.05, 0.002, 0.0, 0.5};
    CoupleMortality m(a, b);
    auto single = [](const SpouseParams& p, double t) {
        const double mean = p.lambda0 / p.mu * std::expm1(p.mu * t);
        const double q = p.sigma / p.mu;
        const double var = q * q * (t + 2.0 / p.mu * (1.0 - std::exp(p.mu * t)) - 1.0 / (2.0 * p.mu) * (1.0 - std::exp(2.0 * p.mu * t)));
        return std::exp(var / 2.0 - mean);
    };
    for (double t : {0.5, 2.0, 4.0}) {
        CHECK(m.marginal_survival(1, t) == doctest::Approx(single(a, t)).epsilon(1e-7));
        CHECK(m.marginal_survival(2, t) == doctest::Approx(single(b, t)).epsilon(1e-7));
        CHECK(m.joint_survival(t) == doctest::Approx(single(a, t) * single(b, t)).epsilon(1e-12));
    }
}

TEST_CASE("bereavement shortens the survivor's life") {
    CoupleMortality with;
    SpouseParams a = with.spouse1(), b = with.spouse2();
    a.eps = b.eps = 0.0;
    CoupleMortality without(a, b);
    CHECK(with.marginal_survival(1, 3.0) < without.marginal_survival(1, 3.0));
    CHECK(with.prob_union_alive(3.0) < without.prob_union_alive(3.0));
    CHECK(with.joint_survival(3.0) == doctest::Approx(without.joint_survival(3.0)).epsilon(1e-15));
}

TEST_CASE("union-alive probability is a decreasing probability") {
    CoupleMortality m;
    double prev = 1.0;
    for (double t = 0.25; t <= 6.0; t += 0.25) {
        const double p = m.prob_union_alive(t);
        CHECK(p <= prev);
        CHECK(p >= m.joint_survival(t));
        prev = p;
    }
}

TEST_CASE("death-interval probabilities") {
    CoupleMortality m;
    const std::vector<double> tb{0.0, 0.5, 1.0, 1.5};
    double total = 0.0;
    for (std::size_t i = 1; i < tb.size(); ++i) {
        const double p = m.prob_death_interval(i, tb, 1.0);
        CHECK(p > 0.0);
        total += p;
    }
    CHECK(total < 2.0);
    // linear in the multiplier's overlap term: P(alpha) - P(1) scales with alpha - 1
    const double p1 = m.prob_death_interval(2, tb, 1.0), p15 = m.prob_death_interval(2, tb, 1.5),
                 p2 = m.prob_death_interval(2, tb, 2.0);
    CHECK(p2 - p15 == doctest::Approx(p15 - p1).epsilon(1e-10));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(CoupleMortality(SpouseParams{-0.1, 0.07, 0.005, 1.0, 0.5}, SpouseParams{}), ConfigError);
    CHECK_THROWS_AS(CoupleMortality(SpouseParams{}, SpouseParams{0.3, 0.0, 0.005, 1.0, 0.5}), ConfigError);
}
