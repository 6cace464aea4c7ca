#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "integrands.hpp"

using namespace jlva;

namespace {
struct Setup {
    MarketModel m;
    ContractSpec c;
    WConstants w;
    explicit Setup(double T) : c(ContractSpec::standard(T)) { w = w_constants(m, c); }
};

std::vector<Integrand> all_pieces(const Setup& s) {
    std::vector<Integrand> v;
    v.push_back(make_gmab_A1(s.m, s.c, s.w));
    v.push_back(make_gmab_A2(s.m, s.c, s.w));
    for (std::size_t i = 1; i + 1 <= s.c.K(); ++i) {
        if (i >= 2) v.push_back(make_sb_B1(s.m, s.c, s.w, i));
        v.push_back(make_sb_B2(s.m, s.c, s.w, i));
    }
    for (std::size_t i = 1; i <= s.c.N(); ++i) {
        const std::size_t j = s.c.death_branch(i);
        if (j == 0) {
            v.push_back(make_db_A0(s.m, s.c, s.w, i));
        } else {
            v.push_back(make_db_A1(s.m, s.c, s.w, j, i));
            v.push_back(make_db_A2(s.m, s.c, s.w, j, i));
        }
    }
    return v;
}
}  // namespace

TEST_CASE("dimensions and labels, T = 3") {
    Setup s(3.0);
    CHECK(make_gmab_A1(s.m, s.c, s.w).dim() == 1);
    CHECK(make_gmab_A2(s.m, s.c, s.w).dim() == 2);
    const auto b = make_sb_B2(s.m, s.c, s.w, 1);
    CHECK(b.dim() == 1);
    CHECK(b.spec().label == "B1^2");
    CHECK(make_db_A2(s.m, s.c, s.w, 1, 3).spec().label == "A2(1,3)");
    CHECK(make_db_A0(s.m, s.c, s.w, 2).dim() == 1);
    CHECK_THROWS_AS(make_sb_B1(s.m, s.c, s.w, 1), NumericError);
    CHECK_THROWS_AS(make_db_A1(s.m, s.c, s.w, 2, 3), NumericError);  // K = 2 allows j <= 1
    CHECK_THROWS_AS(make_db_A1(s.m, s.c, s.w, 1, 2), NumericError);  // tbar_2 = 1 is not after t_1
}

TEST_CASE("dimensions, T = 4") {
    Setup s(4.0);
    CHECK(make_sb_B1(s.m, s.c, s.w, 2).dim() == 1);
    CHECK(make_sb_B2(s.m, s.c, s.w, 2).dim() == 2);
    CHECK(make_gmab_A2(s.m, s.c, s.w).dim() == 3);
    CHECK(db_admissible(s.c, 2, 8));
    CHECK_FALSE(db_admissible(s.c, 3, 8));
}

TEST_CASE("single surrender date, T = 2") {
    Setup s(2.0);
    CHECK(s.c.K() == 1);
    for (std::size_t i = 1; i <= s.c.N(); ++i) {
        CHECK(s.c.death_branch(i) == 0);
        CHECK(db_admissible(s.c, 0, i));
    }
    CHECK(make_gmab_A2(s.m, s.c, s.w).dim() == 1);
}

TEST_CASE("conjugate symmetry of every integrand") {
    for (double T : {3.0, 4.0}) {
        Setup s(T);
        std::mt19937_64 rng(5);
        std::cauchy_distribution<double> cd(0.0, 0.5);
        for (const auto& f : all_pieces(s)) {
            for (int k = 0; k < 5; ++k) {
                std::vector<double> x(f.dim()), y(f.dim());
                for (std::size_t q = 0; q < x.size(); ++q) y[q] = -(x[q] = cd(rng));
                const Complex a = f(x), b = f(y);
                CHECK(std::abs(b - std::conj(a)) <= 1e-10 * std::abs(a));
            }
        }
    }
}

TEST_CASE("full integrand is the smooth part times the Cauchy factors") {
    Setup s(4.0);
    const auto f = make_sb_B2(s.m, s.c, s.w, 2);
    const double x[2] = {0.013, -0.02};
    const double g0 = f.spec().gamma[0], g1 = f.spec().gamma[1];
    const Complex expect = f.smooth(x) * (2 * g0 / (x[0] * x[0] + g0 * g0)) * (2 * g1 / (x[1] * x[1] + g1 * g1));
    CHECK(std::abs(f(x) - expect) < 1e-14 * std::abs(expect));
}

TEST_CASE("segment-split exponent matches the unsplit integral") {
    Setup s(4.0);
    const auto f = make_gmab_A1(s.m, s.c, s.w);
    const double x[3] = {0.4, -1.3, 2.2};
    const Complex a = f.cumulant_exponent(x, true), b = f.cumulant_exponent(x, false);
    CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
}

TEST_CASE("spot-tilt integrands are one at the origin") {
    Setup s(4.0);
    for (std::size_t i = 2; i <= 2; ++i) {
        const auto f1 = make_sb_B1(s.m, s.c, s.w, i);
        std::vector<double> z(f1.dim(), 0.0);
        CHECK(f1.smooth(z) == Complex(1.0, 0.0));
    }
}

TEST_CASE("assembly divides by (2 pi)^d") {
    Setup s(3.0);
    const auto f = make_gmab_A2(s.m, s.c, s.w);
    const double p = f.spec().prefactor;
    CHECK(f.assemble(4.0 * M_PI * M_PI) == doctest::Approx(p).epsilon(1e-15));
}
