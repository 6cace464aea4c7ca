#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>

#include "errors.hpp"

namespace jlva {

// d lambda = mu lambda dt + sigma dW; after the partner dies the survivor's
// intensity gains eps * lambda(tau_p-) * exp(-kappa (t - tau_p)).
struct SpouseParams {
    double lambda0 = 0.3;
    double mu = 0.07;
    double sigma = 0.005;
    double eps = 1.0;
    double kappa = 0.5;

    bool operator==(const SpouseParams&) const = default;
    void check(const char* name) const;
};

class CoupleMortality {
public:
    CoupleMortality();
    CoupleMortality(SpouseParams s1, SpouseParams s2, double t_star = 60.0);

    const SpouseParams& spouse1() const { return s1_; }
    const SpouseParams& spouse2() const { return s2_; }
    double t_star() const { return t_star_; }

    // Mean and variance of int_0^t (lambda1 + lambda2).
    double mean_m(double t) const;
    double variance_sigma2(double t) const;
    // P(tau1 > t, tau2 > t); raw closed form, never clipped.
    double joint_survival(double t) const;
    bool joint_survival_flagged(double t) const { return joint_survival(t) > 1.0 + 1e-12; }

    // rho(t1, t2); throws NumericError on the diagonal.
    double joint_density(double t1, double t2) const;

    // int over [a1,b1] x [a2,b2] of rho, split at the diagonal.
    double integrate_density(double a1, double b1, double a2, double b2) const;

    // P(tau_k > t), k in {1, 2}, by 2-D quadrature over (t,T*) x (0,T*). Cached.
    double marginal_survival(int k, double t) const;
    double prob_union_alive(double t) const;
    // P(i) for the interval [tbar[i-1], tbar[i]); may exceed 1.
    double prob_death_interval(std::size_t i, std::span<const double> tbar, double alpha_mult) const;

private:
    SpouseParams s1_, s2_;
    double t_star_ = 60.0;

    struct Cache {
        std::mutex mu;
        std::map<std::pair<int, double>, double> tails;
    };
    std::shared_ptr<Cache> cache_;
};

// The closed-form density for t1 < t2 where the spouse with parameters p1 dies
// first at t1. Exposed for tests.
double joint_density_ordered(double t1, double t2, const SpouseParams& p1, const SpouseParams& p2);

}  // namespace jlva
