#include "term_structure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace jlva {

ForwardCurve ForwardCurve::flat(double level) {
    if (!std::isfinite(level)) throw ConfigError("forward curve level must be finite");
    ForwardCurve c;
    c.level_ = level;
    return c;
}

ForwardCurve ForwardCurve::table(std::vector<double> maturities, std::vector<double> rates) {
    if (maturities.empty() || maturities.size() != rates.size()) {
        throw ConfigError("forward curve table needs matching, non-empty columns");
    }
    for (std::size_t i = 0; i < maturities.size(); ++i) {
        if (!std::isfinite(maturities[i]) || !std::isfinite(rates[i]))
            throw ConfigError("forward curve table contains a non-finite entry");
        if (i > 0 && !(maturities[i] > maturities[i - 1]))
            throw ConfigError("forward curve maturities must be strictly increasing");
    }
    ForwardCurve c;
    c.level_ = rates.front();
    c.knots_ = std::move(maturities);
    c.rates_ = std::move(rates);
    return c;
}

ForwardCurve ForwardCurve::parse_table(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> t, f;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, y;
        if (!(ls >> x)) continue;
        std::string rest;
        if (!(ls >> y) || (ls >> rest)) {
            throw ConfigError("forward curve table line " + std::to_string(lineno) +
                              ": expected two columns");
        }
        t.push_back(x);
        f.push_back(y);
    }
    return table(std::move(t), std::move(f));
}

ForwardCurve ForwardCurve::load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open forward curve table '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_table(ss.str());
}

double ForwardCurve::operator()(double t) const {
    if (knots_.empty()) return level_;
    if (t <= knots_.front()) return rates_.front();
    if (t >= knots_.back()) return rates_.back();
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    const double w = (t - knots_[k - 1]) / (knots_[k] - knots_[k - 1]);
    return rates_[k - 1] + w * (rates_[k] - rates_[k - 1]);
}

// Antiderivative anchored at the first knot.
double ForwardCurve::primitive(double t) const {
    const double t0 = knots_.front();
    if (t <= t0) return rates_.front() * (t - t0);
    double acc = 0.0;
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        const double lo = knots_[k - 1], hi = knots_[k];
        if (t <= hi) {
            const double ft = (*this)(t);
            return acc + 0.5 * (rates_[k - 1] + ft) * (t - lo);
        }
        acc += 0.5 * (rates_[k - 1] + rates_[k]) * (hi - lo);
    }
    return acc + rates_.back() * (t - knots_.back());
}

double ForwardCurve::integral(double t0, double t1) const {
    if (knots_.empty()) return level_ * (t1 - t0);
    return primitive(t1) - primitive(t0);
}

namespace {

void check_order(double u, double T) {
    if (!(u <= T)) {
        std::ostringstream os;
        os << "argument order: need u <= T, got u=" << u << ", T=" << T;
        throw NumericError(os.str());
    }
}

}  // namespace

double MarketModel::big_sigma1(double u, double T) const {
    check_order(u, T);
    return -std::expm1(-a * (T - u));
}

double MarketModel::big_sigma2(double u, double T) const {
    check_order(u, T);
    return -std::expm1(-b * (T - u));
}

double MarketModel::drift_A(double u, double T) const {
    return nig_cumulant(nig1, big_sigma1(u, T)) + nig_cumulant(nig2, -big_sigma2(u, T));
}

double MarketModel::drift_integral(double t0, double t1, double T) const {
    if (t1 > T) check_order(t1, T);
    return integrate_real([&](double s) { return drift_A(s, T); }, t0, t1, {1e-13, 20});
}

double MarketModel::omega(double t) const {
    if (t < 0) throw NumericError("omega: negative time");
    return t * nig_cumulant(nig2, sigma2);
}

double MarketModel::forward_integral(double t0, double t1) const {
    check_order(t0, t1);
    return f0.integral(t0, t1);
}

double MarketModel::bond_price0(double T) const { return std::exp(-forward_integral(0.0, T)); }

void MarketModel::validate(double horizon) const {
    nig1.check();
    nig2.check();
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("market.a must be > 0");
    if (b == 0.0 || !std::isfinite(b)) throw ConfigError("market.b must be nonzero");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw ConfigError("market.sigma2 must be >= 0");
    if (!(horizon > 0.0)) throw ConfigError("pricing horizon must be positive");

    const double s1 = big_sigma1(0.0, horizon);
    const double s2 = std::abs(big_sigma2(0.0, horizon));
    const double m1 = symmetric_half_width(nig1);
    const double m2 = symmetric_half_width(nig2);
    std::ostringstream os;
    os.precision(8);
    if (!(s1 <= m1)) {
        os << "strip violation: Sigma1 up to " << s1 << " exceeds M1=" << m1 << " for nig1";
        throw StripViolation(os.str());
    }
    if (!(s2 <= m2 / 3.0)) {
        os << "strip violation: |Sigma2| up to " << s2 << " exceeds M2/3=" << m2 / 3.0 << " for nig2";
        throw StripViolation(os.str());
    }
    if (!(sigma2 <= m2 / 3.0)) {
        os << "strip violation: sigma2=" << sigma2 << " exceeds M2/3=" << m2 / 3.0 << " for nig2";
        throw StripViolation(os.str());
    }
    for (const auto& [p, lo, hi, name] :
         {std::tuple{nig1, 0.0, s1, "Sigma1"}, std::tuple{nig2, -s2, s2, "-Sigma2"}}) {
        if (auto v = validate_strip(p, lo, hi); !v.ok) throw StripViolation(std::string(name) + ": " + v.message);
    }
}

}  // namespace jlva
