#include "levy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace jlva {

void NigParams::check() const {
    if (!(alpha > 0.0) || !(std::abs(beta) < alpha) || !(delta > 0.0) || !std::isfinite(alpha) ||
        !std::isfinite(beta) || !std::isfinite(delta)) {
        std::ostringstream os;
        os << "invalid NIG parameters (alpha=" << alpha << ", beta=" << beta << ", delta=" << delta
           << "): need alpha > |beta| and delta > 0";
        throw ConfigError(os.str());
    }
}

namespace {

[[noreturn]] void strip_fail(const NigParams& p, double re) {
    std::ostringstream os;
    os.precision(10);
    os << "cumulant argument Re z=" << re << " outside strip (" << p.strip_lo() << ", " << p.strip_hi()
       << ") for NIG(alpha=" << p.alpha << ", beta=" << p.beta << ")";
    throw StripViolation(os.str());
}

}  // namespace

Complex nig_cumulant(const NigParams& p, Complex z) {
    const double re = z.real();
    if (!(re > p.strip_lo() + kStripMargin && re < p.strip_hi() - kStripMargin)) strip_fail(p, re);
    const double g = std::sqrt(p.alpha * p.alpha - p.beta * p.beta);
    const Complex b = p.beta + z;
    const Complex w = p.alpha * p.alpha - b * b;
    // Inside the strip Re w > 0, so the principal square root is continuous.
    // Guard against drifting onto the negative real axis anyway.
    if (w.real() <= 0.0 && std::abs(w.imag()) < 1e-8) {
        throw StripViolation("cumulant argument touches the square-root branch cut");
    }
    return p.delta * (g - std::sqrt(w));
}

double nig_cumulant(const NigParams& p, double x) {
    if (!(x > p.strip_lo() + kStripMargin && x < p.strip_hi() - kStripMargin)) strip_fail(p, x);
    const double g = std::sqrt(p.alpha * p.alpha - p.beta * p.beta);
    const double b = p.beta + x;
    return p.delta * (g - std::sqrt(p.alpha * p.alpha - b * b));
}

StripVerdict validate_strip(const NigParams& p, double lo, double hi) {
    StripVerdict v;
    v.margin_lo = lo - p.strip_lo();
    v.margin_hi = p.strip_hi() - hi;
    v.ok = lo <= hi && v.margin_lo > kStripMargin && v.margin_hi > kStripMargin;
    if (!v.ok) {
        std::ostringstream os;
        os.precision(10);
        os << "range [" << lo << ", " << hi << "] not inside strip (" << p.strip_lo() << ", "
           << p.strip_hi() << ") with margin " << kStripMargin;
        v.message = os.str();
    }
    return v;
}

double symmetric_half_width(const NigParams& p) {
    return std::min(-p.strip_lo(), p.strip_hi()) - kStripMargin;
}

Complex integrate_complex(const std::function<Complex(double)>& f, double a, double b,
                          const QuadOptions& opt) {
    if (a == b) return {0.0, 0.0};
    double err = 0.0;
    const Complex r = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, opt.max_depth, opt.rel_tol, &err);
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
        throw NumericError("non-finite value in adaptive quadrature");
    }
    return r;
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadOptions& opt) {
    if (a == b) return 0.0;
    double err = 0.0;
    const double r = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, opt.max_depth, opt.rel_tol, &err);
    if (!std::isfinite(r)) throw NumericError("non-finite value in adaptive quadrature");
    return r;
}

Complex segment_integral(const std::function<Complex(double)>& f, double t0, double t1,
                         std::span<const double> breakpoints, const QuadOptions& opt) {
    if (t1 < t0) return -segment_integral(f, t1, t0, breakpoints, opt);
    std::vector<double> cuts;
    cuts.reserve(breakpoints.size() + 2);
    cuts.push_back(t0);
    for (double b : breakpoints)
        if (b > t0 && b < t1) cuts.push_back(b);
    cuts.push_back(t1);
    std::sort(cuts.begin(), cuts.end());
    Complex total{0.0, 0.0};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] > cuts[k]) total += integrate_complex(f, cuts[k], cuts[k + 1], opt);
    }
    return total;
}

Complex cumulant_integral(const NigParams& p, const std::function<Complex(double)>& g, double t0,
                          double t1, std::span<const double> breakpoints, const QuadOptions& opt) {
    return segment_integral([&](double s) { return nig_cumulant(p, g(s)); }, t0, t1, breakpoints, opt);
}

}  // namespace jlva
