#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levy.hpp"

namespace jlva {

class Integrand;

enum class Method { Direct, Quad, MonteCarlo };
const char* to_string(Method m);

struct IntegralEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    Method method = Method::Quad;
    double imag_residual = 0.0;
    std::uint64_t rejected = 0;
    std::uint64_t seed = 0;
};

// Integral over R^d of smooth(x) * prod_{l<nc} 2 gamma_l / (x_l^2 + gamma_l^2),
// with an optional trailing plain dimension (no Cauchy factor) of scale
// plain_scale.
struct IntegrationProblem {
    std::vector<double> gamma;
    bool plain_last = false;
    double plain_scale = 1.0;
    std::function<Complex(std::span<const double>)> smooth;

    std::size_t dim() const { return gamma.size() + (plain_last ? 1 : 0); }
};

IntegrationProblem problem_from(const Integrand& f);

// Below this a Cauchy factor is treated as 2 pi times a point mass at 0.
inline constexpr double kDegenerateGamma = 1e-12;

struct SamplerPlan {
    std::vector<double> gamma;  // Cauchy proposal per Cauchy dimension
    double damped_scale = 0.0;  // 0 when there is no damped dimension
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
    unsigned threads = 1;
};

SamplerPlan make_plan(const IntegrationProblem& p, std::uint64_t n, std::uint64_t seed, unsigned threads = 1);

// Nested adaptive Gauss-Kronrod after x = gamma tan(theta) in every dimension.
// Throws NumericError once more than max_evals integrand evaluations are spent.
IntegralEstimate quad_nd(const IntegrationProblem& p, double tol = 1e-8, std::size_t max_dim = 3,
                         std::uint64_t max_evals = 20000000);

IntegralEstimate mc_is(const IntegrationProblem& p, const SamplerPlan& plan);

// 100 |mc - quad| / mc.
double bias_report(const IntegralEstimate& mc, const IntegralEstimate& quad);

// Standard error as a percentage of the estimate.
double std_error_percent(const IntegralEstimate& e);

// Deterministic 64-bit mixing used to derive substream seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Runs fn(k) for k in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

unsigned default_threads();

}  // namespace jlva
