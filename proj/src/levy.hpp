#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace jlva {

using Complex = std::complex<double>;

// Normal inverse Gaussian Levy process parameters (no drift term).
struct NigParams {
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;

    bool operator==(const NigParams&) const = default;

    // Open strip of exponential moments for Re z.
    double strip_lo() const { return -alpha - beta; }
    double strip_hi() const { return alpha - beta; }
    void check() const;  // throws ConfigError unless alpha > |beta|, delta > 0
};

struct StripVerdict {
    bool ok = false;
    double margin_lo = 0.0;  // distance from lo to the lower edge
    double margin_hi = 0.0;  // distance from hi to the upper edge
    std::string message;
};

inline constexpr double kStripMargin = 1e-6;

// Cumulant theta(z) = log E[exp(z L_1)], principal branch. Throws
// StripViolation when Re z is outside the strip (with a 1e-6 margin).
Complex nig_cumulant(const NigParams& p, Complex z);

// Real-argument specialisation; same strip check.
double nig_cumulant(const NigParams& p, double x);

StripVerdict validate_strip(const NigParams& p, double lo, double hi);

// Largest M with [-M, M] strictly inside the strip less the safety margin.
double symmetric_half_width(const NigParams& p);

struct QuadOptions {
    double rel_tol = 1e-10;
    unsigned max_depth = 15;
};

// Adaptive Gauss-Kronrod integral of a smooth complex function on [a, b].
// Boundary nodes are never evaluated.
Complex integrate_complex(const std::function<Complex(double)>& f, double a, double b,
                          const QuadOptions& opt = {});

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadOptions& opt = {});

// Integral of f over [t0, t1], split at every breakpoint that falls strictly
// inside so each piece is smooth.
Complex segment_integral(const std::function<Complex(double)>& f, double t0, double t1,
                         std::span<const double> breakpoints, const QuadOptions& opt = {});

// int_{t0}^{t1} theta(g(s)) ds with g piecewise smooth between breakpoints.
Complex cumulant_integral(const NigParams& p, const std::function<Complex(double)>& g,
                          double t0, double t1, std::span<const double> breakpoints,
                          const QuadOptions& opt = {});

}  // namespace jlva
