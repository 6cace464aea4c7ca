#pragma once

#include <string>
#include <vector>

#include "levy.hpp"

namespace jlva {

// Initial forward curve f(0, .): flat, or piecewise linear through knots with
// flat extrapolation on both sides.
class ForwardCurve {
public:
    static ForwardCurve flat(double level);
    static ForwardCurve table(std::vector<double> maturities, std::vector<double> rates);
    // Two whitespace/comma separated columns; '#' starts a comment.
    static ForwardCurve load_table(const std::string& path);
    static ForwardCurve parse_table(const std::string& text);

    bool is_flat() const { return knots_.empty(); }
    double level() const { return level_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& rates() const { return rates_; }

    double operator()(double t) const;
    // Exact integral of the curve over [t0, t1].
    double integral(double t0, double t1) const;

    bool operator==(const ForwardCurve&) const = default;

private:
    double level_ = 0.0;
    std::vector<double> knots_;
    std::vector<double> rates_;
    double primitive(double t) const;
};

struct MarketModel {
    double a = 0.00258;
    double b = 0.00143;
    double sigma2 = 0.1559;
    ForwardCurve f0 = ForwardCurve::flat(0.02);
    NigParams nig1{3.12, 1.87, 9.24};
    NigParams nig2{3.31, -1.43, 6.21};

    double big_sigma1(double u, double T) const;
    double big_sigma2(double u, double T) const;
    double drift_A(double u, double T) const;
    // int_{t0}^{t1} A(s, T) ds, t1 <= T.
    double drift_integral(double t0, double t1, double T) const;
    double omega(double t) const;
    double forward_integral(double t0, double t1) const;
    double bond_price0(double T) const;

    // Parameter sanity plus the strip bounds Sigma1 <= M1, |Sigma2| <= M2/3,
    // sigma2 <= M2/3 over [0, horizon]. Throws ConfigError / StripViolation.
    void validate(double horizon) const;
};

}  // namespace jlva
