#include "mortality.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <sstream>

#include "levy.hpp"

namespace jlva {

void SpouseParams::check(const char* name) const {
    auto bad = [&](const char* field, const char* need) {
        throw ConfigError(std::string("mortality.") + name + "_" + field + " must be " + need);
    };
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) bad("lambda0", "> 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) bad("mu", "> 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) bad("sigma", "> 0");
    if (!(eps >= 0.0) || !std::isfinite(eps)) bad("eps", ">= 0");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) bad("kappa", "> 0");
}

CoupleMortality::CoupleMortality() : CoupleMortality(SpouseParams{}, SpouseParams{0.3, 0.05, 0.002, 1.0, 0.5}) {}

CoupleMortality::CoupleMortality(SpouseParams s1, SpouseParams s2, double t_star)
    : s1_(s1), s2_(s2), t_star_(t_star), cache_(std::make_shared<Cache>()) {
    s1_.check("spouse1");
    s2_.check("spouse2");
    if (!(t_star_ > 0.0) || !std::isfinite(t_star_)) throw ConfigError("mortality.t_star must be > 0");
}

double CoupleMortality::mean_m(double t) const {
    double m = 0.0;
    for (const auto* p : {&s1_, &s2_}) m += p->lambda0 / p->mu * std::expm1(p->mu * t);
    return m;
}

double CoupleMortality::variance_sigma2(double t) const {
    double v = 0.0;
    for (const auto* p : {&s1_, &s2_}) {
        const double q = p->sigma / p->mu;
        v += q * q * (t - 2.0 / p->mu * std::expm1(p->mu * t) + 0.5 / p->mu * std::expm1(2.0 * p->mu * t));
    }
    return v;
}

double CoupleMortality::joint_survival(double t) const {
    return std::exp(0.5 * variance_sigma2(t) - mean_m(t));
}

double joint_density_ordered(double t1, double t2, const SpouseParams& p1, const SpouseParams& p2) {
    const double l1 = p1.lambda0, m1 = p1.mu, s1 = p1.sigma;
    const double l2 = p2.lambda0, m2 = p2.mu, s2 = p2.sigma, e2 = p2.eps, k2 = p2.kappa;
    const double d = t2 - t1;
    const double c1 = s1 * s1 / (2.0 * m1 * m1);
    const double c2 = s2 * s2 / (2.0 * m2 * m2);

    const double E1 = std::exp(m1 * t1);
    const double f1 = -c1 * (E1 - 1.0) * (E1 - 1.0) + E1 * l1;
    const double g1 = -c1 * (-t1 + 2.0 / m1 * (E1 - 1.0) - 0.5 / m1 * (E1 * E1 - 1.0)) - (E1 - 1.0) * l1 / m1;

    const double Ed = std::exp(m2 * d);
    const double Kd = std::exp(-k2 * d);
    const double h = Ed + m2 * e2 / k2 * (1.0 - Kd);
    const double E2 = std::exp(m2 * t1);
    const double f2 = -c2 * (Ed - 1.0) * (Ed - 1.0) +
                      (Ed + e2 * Kd) * (c2 * (2.0 * (E2 - 1.0) - h * (E2 * E2 - 1.0)) + E2 * l2);
    const double g2 = -c2 * (-d + 2.0 / m2 * (Ed - 1.0) - 0.5 / m2 * (Ed * Ed - 1.0)) -
                      c2 * (-t1 + 2.0 / m2 * h * (E2 - 1.0) - 0.5 / m2 * h * h * (E2 * E2 - 1.0)) -
                      (h * E2 - 1.0) * l2 / m2;
    return f1 * f2 * std::exp(g1 + g2);
}

double CoupleMortality::joint_density(double t1, double t2) const {
    if (t1 == t2) throw NumericError("joint_density requested on the diagonal t1 = t2");
    if (t1 < 0.0 || t2 < 0.0) throw NumericError("joint_density: negative time");
    return t1 < t2 ? joint_density_ordered(t1, t2, s1_, s2_) : joint_density_ordered(t2, t1, s2_, s1_);
}

double CoupleMortality::integrate_density(double a1, double b1, double a2, double b2) const {
    if (!(a1 <= b1) || !(a2 <= b2)) throw NumericError("integrate_density: empty or reversed box");
    const QuadOptions inner{1e-11, 12}, outer{1e-10, 12};
    auto row = [&](double t1) {
        // Regions t2 < t1 and t2 > t1 use different branches of rho.
        double acc = 0.0;
        const double mid = std::clamp(t1, a2, b2);
        if (mid > a2)
            acc += integrate_real([&](double t2) { return joint_density_ordered(t2, t1, s2_, s1_); }, a2, mid,
                                  inner);
        if (b2 > mid)
            acc += integrate_real([&](double t2) { return joint_density_ordered(t1, t2, s1_, s2_); }, mid, b2,
                                  inner);
        return acc;
    };
    // The row integral has a kink where t1 enters [a2, b2]; split there.
    std::vector<double> cuts{a1};
    for (double c : {a2, b2})
        if (c > a1 && c < b1) cuts.push_back(c);
    cuts.push_back(b1);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        if (cuts[k + 1] > cuts[k]) total += integrate_real(row, cuts[k], cuts[k + 1], outer);
    return total;
}

double CoupleMortality::marginal_survival(int k, double t) const {
    if (k != 1 && k != 2) throw NumericError("marginal_survival: spouse index must be 1 or 2");
    if (t < 0.0 || t > t_star_) throw NumericError("marginal_survival: t outside [0, T*]");
    {
        std::lock_guard lock(cache_->mu);
        if (auto it = cache_->tails.find({k, t}); it != cache_->tails.end()) return it->second;
    }
    const double v = k == 1 ? integrate_density(t, t_star_, 0.0, t_star_) : integrate_density(0.0, t_star_, t, t_star_);
    std::lock_guard lock(cache_->mu);
    cache_->tails.emplace(std::pair{k, t}, v);
    return v;
}

double CoupleMortality::prob_union_alive(double t) const {
    return marginal_survival(1, t) + marginal_survival(2, t) - joint_survival(t);
}

double CoupleMortality::prob_death_interval(std::size_t i, std::span<const double> tbar, double alpha_mult) const {
    if (i < 1 || i >= tbar.size()) {
        std::ostringstream os;
        os << "prob_death_interval: index " << i << " outside 1.." << (tbar.size() ? tbar.size() - 1 : 0);
        throw NumericError(os.str());
    }
    const double a = tbar[i - 1], b = tbar[i];
    if (b > t_star_) throw NumericError("prob_death_interval: interval beyond T*");
    const double p1 = integrate_density(a, b, 0.0, t_star_);
    const double p2 = integrate_density(0.0, t_star_, a, b);
    const double both = integrate_density(a, b, a, b);
    return p1 + p2 + (alpha_mult - 2.0) * both;
}

}  // namespace jlva
