#include <doctest.h>

#include <cmath>

#include "integration.hpp"
#include "path_oracle.hpp"

using namespace jlva;

TEST_CASE("inverse Gaussian moments") {
    Rng rng(11);
    const double mu = 0.7, lam = 2.5;
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int k = 0; k < n; ++k) {
        const double x = sample_inverse_gaussian(mu, lam, rng);
        REQUIRE(x > 0.0);
        s += x;
        s2 += x * x;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(mu).epsilon(0.01));
    CHECK(var == doctest::Approx(mu * mu * mu / lam).epsilon(0.03));
}

TEST_CASE("NIG increments carry the cumulant's mean and variance") {
    Rng rng(12);
    const NigParams p{3.12, 1.87, 9.24};
    const double dt = 0.25;
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int k = 0; k < n; ++k) {
        const double x = simulate_nig_increment(p, dt, rng);
        s += x;
        s2 += x * x;
    }
    const double g = std::sqrt(p.alpha * p.alpha - p.beta * p.beta);
    const double mean = s / n, var = s2 / n - mean * mean;
    const double m_exp = dt * p.delta * p.beta / g, v_exp = dt * p.delta * p.alpha * p.alpha / (g * g * g);
    CHECK(std::abs(mean - m_exp) < 4.0 * std::sqrt(v_exp / n));
    CHECK(var == doctest::Approx(v_exp).epsilon(0.02));
    // exponential moment E[e^{0.3 X}] = e^{dt theta(0.3)}
    Rng rng2(13);
    double e = 0;
    for (int k = 0; k < n; ++k) e += std::exp(0.3 * simulate_nig_increment(p, dt, rng2));
    CHECK(e / n == doctest::Approx(std::exp(dt * nig_cumulant(p, 0.3))).epsilon(0.01));
}

TEST_CASE("simulated couples reproduce the joint survival") {
    const CoupleMortality m;
    Rng rng(14);
    const int n = 100000;
    int both = 0;
    for (int k = 0; k < n; ++k) {
        const auto c = simulate_couple(m, 3.0, 1.0 / 32.0, rng);
        both += (c.tau1 > 2.0 && c.tau2 > 2.0) ? 1 : 0;
    }
    const double p = m.joint_survival(2.0), phat = static_cast<double>(both) / n;
    CHECK(std::abs(phat - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("simulated couples reproduce the union-alive probability with bereavement") {
    const CoupleMortality m;
    Rng rng(15);
    const int n = 100000;
    int alive = 0;
    for (int k = 0; k < n; ++k) {
        const auto c = simulate_couple(m, 3.0, 1.0 / 32.0, rng);
        alive += (c.tau1 > 3.0 || c.tau2 > 3.0) ? 1 : 0;
    }
    const double p = m.prob_union_alive(3.0), phat = static_cast<double>(alive) / n;
    CHECK(std::abs(phat - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("discounted equity is a martingale and the discount prices the bond") {
    MarketModel mk;
    const auto c = ContractSpec::standard(3.0);
    const MarketKernels kern(mk, c, 1.0 / 64.0);
    Rng a(16), b(17);
    const int n = 40000;
    const std::size_t last = kern.dates().size() - 1;
    REQUIRE(kern.dates()[last].t == 3.0);
    double s = 0, s2 = 0, d = 0;
    for (int k = 0; k < n; ++k) {
        const auto p = simulate_market(kern, a, b);
        const double x = p.discount[last] * p.equity[last];
        s += x;
        s2 += x * x;
        d += p.discount[last];
    }
    const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 4.0 * se);
    CHECK(d / n == doctest::Approx(mk.bond_price0(3.0)).epsilon(1e-3));
}

TEST_CASE("oracle is deterministic in its seed") {
    MarketModel mk;
    const auto c = ContractSpec::standard(3.0);
    OracleConfig cfg;
    cfg.paths = 3000;
    cfg.threads = 2;
    const auto r1 = oracle_price(mk, c, CoupleMortality(), cfg);
    cfg.threads = 1;
    const auto r2 = oracle_price(mk, c, CoupleMortality(), cfg);
    CHECK(r1.total.value == r2.total.value);
    CHECK(r1.total.value == doctest::Approx(r1.gmab.value + r1.sb.value + r1.db.value).epsilon(1e-12));
    CHECK(r1.negative_intensity_fraction() < 1e-3);
}

TEST_CASE("grid must refine the contract dates") {
    MarketModel mk;
    const auto c = ContractSpec::standard(3.0);
    CHECK_THROWS_AS(MarketKernels(mk, c, 0.3), NumericError);
}
