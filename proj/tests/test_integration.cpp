#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "integration.hpp"

using namespace jlva;

namespace {
constexpr double kPi = std::numbers::pi;

IntegrationProblem cauchy_only(std::vector<double> g) {
    IntegrationProblem p;
    p.gamma = std::move(g);
    p.smooth = [](std::span<const double>) { return Complex(1.0, 0.0); };
    return p;
}
}  // namespace

TEST_CASE("quadrature: Cauchy normalisation") {
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto p = cauchy_only(std::vector<double>(d, 0.7));
        const auto e = quad_nd(p, 1e-10);
        CHECK(e.value == doctest::Approx(std::pow(2.0 * kPi, static_cast<double>(d))).epsilon(1e-9));
    }
}

TEST_CASE("quadrature: Gaussian in the plain dimension") {
    IntegrationProblem p;
    p.plain_last = true;
    p.plain_scale = 1.0;
    p.smooth = [](std::span<const double> x) { return Complex(std::exp(-x[0] * x[0]), 0.0); };
    CHECK(quad_nd(p, 1e-10).value == doctest::Approx(std::sqrt(kPi)).epsilon(1e-9));
}

TEST_CASE("quadrature: degenerate scale is a point mass") {
    IntegrationProblem p;
    p.gamma = {0.0, 0.5};
    p.smooth = [](std::span<const double> x) { return Complex(std::cos(x[0]) * std::exp(-x[1] * x[1]), 0.0); };
    // 2 pi * int 2g/(x^2+g^2) e^{-x^2} dx = 2 pi * 2 pi e^{g^2} erfc(g)
    const double g = 0.5;
    const double expect = 2 * kPi * 2 * kPi * std::exp(g * g) * std::erfc(g);
    CHECK(quad_nd(p, 1e-10).value == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("quadrature: imaginary residual and dimension limit") {
    IntegrationProblem p;
    p.gamma = {1.0};
    p.smooth = [](std::span<const double> x) { return Complex(1.0, x[0] / (1.0 + x[0] * x[0])); };
    const auto e = quad_nd(p, 1e-10);
    CHECK(e.imag_residual < 1e-10);
    CHECK_THROWS_AS(quad_nd(cauchy_only({1, 1, 1, 1}), 1e-8, 3), NumericError);
}

TEST_CASE("MC-IS: perfect proposal has zero variance") {
    const auto p = cauchy_only({0.3, 2.0});
    const auto e = mc_is(p, make_plan(p, 10000, 1));
    CHECK(e.value == doctest::Approx(4 * kPi * kPi).epsilon(1e-13));
    CHECK(e.std_error < 1e-10);
    CHECK(e.n_samples == 10000);
}

TEST_CASE("MC-IS: damped dimension weight") {
    IntegrationProblem p;
    p.plain_last = true;
    p.plain_scale = 1.0;
    p.smooth = [](std::span<const double> x) { return Complex(1.0 / (1.0 + x[0] * x[0]), 0.0); };
    const auto e = mc_is(p, make_plan(p, 1000, 3));
    CHECK(e.value == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("MC-IS: agrees with quadrature within 3 sigma") {
    IntegrationProblem p;
    p.gamma = {0.8};
    p.plain_last = true;
    p.plain_scale = 1.2;
    p.smooth = [](std::span<const double> x) {
        return Complex(std::exp(-0.3 * x[0] * x[0]) / (1.0 + x[1] * x[1]), 0.1 * x[0]);
    };
    const auto q = quad_nd(p, 1e-10);
    const auto m = mc_is(p, make_plan(p, 200000, 42));
    CHECK(std::abs(m.value - q.value) < 3.0 * m.std_error);
    CHECK(bias_report(m, q) < 1.0);
}

TEST_CASE("MC-IS: determinism and thread independence") {
    IntegrationProblem p;
    p.gamma = {0.5};
    p.smooth = [](std::span<const double> x) { return Complex(std::cos(x[0]), 0.0); };
    const auto a = mc_is(p, make_plan(p, 50000, 7, 1));
    const auto b = mc_is(p, make_plan(p, 50000, 7, 1));
    const auto c = mc_is(p, make_plan(p, 50000, 7, 4));
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.value == c.value);
    const auto d = mc_is(p, make_plan(p, 50000, 8, 1));
    CHECK(a.value != d.value);
}

TEST_CASE("MC-IS: strip breaches are rejected and counted") {
    IntegrationProblem p;
    p.gamma = {1.0};
    p.smooth = [](std::span<const double> x) -> Complex {
        if (std::abs(x[0]) > 1e4) throw StripViolation("far tail");
        return {1.0, 0.0};
    };
    // Cauchy tail mass beyond 1e4 is ~6e-5, above the 1e-6 rejection budget
    CHECK_THROWS_AS(mc_is(p, make_plan(p, 200000, 1)), NumericError);
}

TEST_CASE("bias and standard-error percentages") {
    IntegralEstimate mc, q;
    mc.value = q.value = 0.5;
    CHECK(bias_report(mc, q) == 0.0);
    mc.value = 0.9906;
    q.value = 0.9907;
    CHECK(bias_report(mc, q) == doctest::Approx(0.010095).epsilon(1e-4));
    mc.value = 0.1343;
    q.value = 0.1345;
    CHECK(bias_report(mc, q) == doctest::Approx(0.1489).epsilon(1e-3));
    mc.value = 0.0;
    CHECK_THROWS_AS(bias_report(mc, q), NumericError);
    IntegralEstimate e;
    e.value = 2.0;
    e.std_error = 0.01;
    CHECK(std_error_percent(e) == doctest::Approx(0.5));
}

TEST_CASE("substream seeds are distinct") {
    std::set<std::uint64_t> s;
    for (std::uint64_t a = 0; a < 100; ++a)
        for (std::uint64_t b = 0; b < 10; ++b) s.insert(substream_seed(1, a, b));
    CHECK(s.size() == 1000);
    CHECK(substream_seed(1, 2, 3) == substream_seed(1, 2, 3));
}
