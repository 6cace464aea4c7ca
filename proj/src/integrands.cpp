#include "integrands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace jlva {

const char* to_string(BenefitKind k) {
    switch (k) {
        case BenefitKind::GmabA1: return "GMAB-A1";
        case BenefitKind::GmabA2: return "GMAB-A2";
        case BenefitKind::SbB1: return "SB-B1";
        case BenefitKind::SbB2: return "SB-B2";
        case BenefitKind::DbA1: return "DB-A1";
        case BenefitKind::DbA2: return "DB-A2";
        case BenefitKind::DbA0: return "DB-A0";
    }
    return "?";
}

namespace {

const QuadOptions kCumulantQuad{1e-10, 15};

std::string make_label(const IntegrandSpec& s) {
    std::ostringstream os;
    switch (s.kind) {
        case BenefitKind::GmabA1: os << "A1"; break;
        case BenefitKind::GmabA2: os << "A2"; break;
        case BenefitKind::SbB1: os << "B" << s.i << "^1"; break;
        case BenefitKind::SbB2: os << "B" << s.i << "^2"; break;
        case BenefitKind::DbA1: os << "A1(" << s.j << "," << s.i << ")"; break;
        case BenefitKind::DbA2: os << "A2(" << s.j << "," << s.i << ")"; break;
        case BenefitKind::DbA0: os << "A0(" << s.i << ")"; break;
    }
    return os.str();
}

}  // namespace

Integrand::Integrand(const MarketModel& m, const ContractSpec& c, const WConstants& w, IntegrandSpec spec)
    : m_(&m), c_(&c), spec_(std::move(spec)) {
    const double T = c.maturity;
    const std::size_t K = c.K();
    const double beta = c.surrender_beta;
    std::size_t nc = 0;  // number of Cauchy coordinates
    auto cauchy_coords = [&](std::size_t n) {
        nc = n;
        for (std::size_t l = 1; l <= n; ++l) {
            w_.push_back(w.w.at(l));
            ends_.push_back(c.t(l));
            spec_.gamma.push_back(beta * (c.t(l + 1) - c.t(l)));
        }
    };
    spec_.damping = c.damping;

    switch (spec_.kind) {
        case BenefitKind::GmabA1:
        case BenefitKind::GmabA2:
            tilt_ = Tilt::Forward;
            horizon_ = real_T_ = damp_T_ = T;
            cauchy_coords(K - 1);
            spec_.prefactor = c.surrender_prefactor(K) * std::exp(-w.drift_T);
            if (spec_.kind == BenefitKind::GmabA2) {
                spec_.damped = true;
                w_damped_ = w.wK;
            }
            break;
        case BenefitKind::SbB1:
        case BenefitKind::SbB2: {
            const std::size_t i = spec_.i;
            const bool b2 = spec_.kind == BenefitKind::SbB2;
            if (i < 1 || i + 1 > K || (!b2 && i < 2)) {
                std::ostringstream os;
                os << "SB index i=" << i << " outside the admissible range for K=" << K;
                throw NumericError(os.str());
            }
            tilt_ = Tilt::Spot;
            horizon_ = c.t(i);
            real_T_ = damp_T_ = T;
            cauchy_coords(b2 ? i : i - 1);
            const_term_ = -m.omega(c.t(i));
            spec_.prefactor = c.surrender_prefactor(b2 ? i + 1 : i);
            break;
        }
        case BenefitKind::DbA1:
        case BenefitKind::DbA2:
        case BenefitKind::DbA0: {
            const std::size_t i = spec_.i;
            if (spec_.kind == BenefitKind::DbA0) spec_.j = 0;
            const std::size_t j = spec_.j;
            if (i < 1 || i > c.N() || !db_admissible(c, j, i)) {
                std::ostringstream os;
                os << "DB pair (j=" << j << ", i=" << i << ") is not admissible";
                throw NumericError(os.str());
            }
            if (spec_.kind == BenefitKind::DbA1 && j == 0)
                throw NumericError("DB A1 with j=0 is the constant 1; use the A0 branch");
            const double tb = c.tbar(i);
            tilt_ = Tilt::Forward;
            horizon_ = real_T_ = damp_T_ = tb;
            cauchy_coords(j);
            spec_.prefactor = (j == 0 ? 1.0 : c.surrender_prefactor(j + 1)) * std::exp(-w.drift_bar.at(i));
            if (spec_.kind != BenefitKind::DbA1) {
                spec_.damped = true;
                w_damped_ = w.wbar.at(i);
                payoff_shift_ = c.guarantee_rate * tb;
            }
            break;
        }
    }
    spec_.dim = nc + (spec_.damped ? 1 : 0);
    for (double e : ends_)
        if (e > 0.0 && e < horizon_) breaks_.push_back(e);
    if (spec_.label.empty()) spec_.label = make_label(spec_);
}

Complex Integrand::cumulant_exponent(std::span<const double> x, bool split) const {
    const std::size_t nc = w_.size();
    const double r = spec_.damped ? spec_.damping : 0.0;
    const double v = spec_.damped ? x[nc] : 0.0;
    const double sig2 = m_->sigma2;
    const double T = c_->maturity;
    const MarketModel& m = *m_;

    auto point = [&](double s, double Z) {
        const double a = m.big_sigma1(s, T);
        const double b = sig2 + m.big_sigma2(s, T);
        double eRe = 0.0, fRe = sig2;
        if (tilt_ == Tilt::Forward) {
            eRe = m.big_sigma1(s, real_T_);
            fRe = -m.big_sigma2(s, real_T_);
        }
        double ad = 0.0, bd = 0.0;
        if (spec_.damped) {
            ad = m.big_sigma1(s, damp_T_);
            bd = sig2 + m.big_sigma2(s, damp_T_);
        }
        const Complex E(eRe - r * ad, -(a * Z + ad * v));
        const Complex F(fRe + r * bd, b * Z + bd * v);
        return nig_cumulant(m.nig1, E) + nig_cumulant(m.nig2, F);
    };

    // constant argument: the spot tilt with every coordinate at zero
    if (tilt_ == Tilt::Spot && !spec_.damped && std::all_of(x.begin(), x.end(), [](double xi) { return xi == 0.0; }))
        return horizon_ * nig_cumulant(m.nig2, sig2);

    if (!split) {
        auto f = [&](double s) {
            double Z = 0.0;
            for (std::size_t l = 0; l < nc; ++l)
                if (s <= ends_[l]) Z += x[l];
            return point(s, Z);
        };
        return integrate_complex(f, 0.0, horizon_, {1e-12, 40});
    }

    Complex total{0.0, 0.0};
    double lo = 0.0;
    for (std::size_t k = 0; k <= breaks_.size(); ++k) {
        const double hi = k < breaks_.size() ? breaks_[k] : horizon_;
        if (hi <= lo) continue;
        double Z = 0.0;
        for (std::size_t l = 0; l < nc; ++l)
            if (ends_[l] >= hi) Z += x[l];
        total += integrate_complex([&](double s) { return point(s, Z); }, lo, hi, kCumulantQuad);
        lo = hi;
    }
    return total;
}

Complex Integrand::smooth(std::span<const double> x) const {
    if (x.size() != spec_.dim) throw NumericError("integrand evaluated with the wrong dimension");
    for (double xi : x)
        if (!std::isfinite(xi)) throw NumericError("integrand evaluated at a non-finite point");
    const std::size_t nc = w_.size();
    Complex expo = cumulant_exponent(x) + const_term_;
    double phase = 0.0;
    for (std::size_t l = 0; l < nc; ++l) phase += x[l] * w_[l];
    Complex payoff{1.0, 0.0};
    if (spec_.damped) {
        const double r = spec_.damping, v = x[nc];
        phase += v * w_damped_;
        expo += r * w_damped_;
        const Complex z(r, v);  // iv + r
        expo -= payoff_shift_ * z;
        payoff = 1.0 / ((z - 1.0) * z);
    }
    expo += Complex(0.0, phase);
    return std::exp(expo) * payoff;
}

Complex Integrand::operator()(std::span<const double> x) const {
    Complex val = smooth(x);
    for (std::size_t l = 0; l < w_.size(); ++l) {
        const double g = spec_.gamma[l];
        val *= 2.0 * g / (x[l] * x[l] + g * g);
    }
    return val;
}

double Integrand::assemble(double integral) const {
    double scale = 1.0;
    for (std::size_t k = 0; k < spec_.dim; ++k) scale *= 2.0 * std::numbers::pi;
    return spec_.prefactor * integral / scale;
}

bool db_admissible(const ContractSpec& c, std::size_t j, std::size_t i) {
    if (i < 1 || i > c.N()) return false;
    const std::size_t K = c.K();
    if (j + 1 > K) return false;
    const double tb = c.tbar(i);
    if (j == K - 1) return c.t(j) < tb && tb <= c.maturity;
    if (j == 0) return tb <= c.t(1);
    return c.t(j) < tb && tb <= c.t(j + 1);
}

namespace {
IntegrandSpec kind_spec(BenefitKind k, std::size_t i = 0, std::size_t j = 0) {
    IntegrandSpec s;
    s.kind = k;
    s.i = i;
    s.j = j;
    return s;
}
}  // namespace

Integrand make_gmab_A1(const MarketModel& m, const ContractSpec& c, const WConstants& w) {
    return Integrand(m, c, w, kind_spec(BenefitKind::GmabA1));
}
Integrand make_gmab_A2(const MarketModel& m, const ContractSpec& c, const WConstants& w) {
    return Integrand(m, c, w, kind_spec(BenefitKind::GmabA2));
}
Integrand make_sb_B1(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i) {
    return Integrand(m, c, w, kind_spec(BenefitKind::SbB1, i));
}
Integrand make_sb_B2(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i) {
    return Integrand(m, c, w, kind_spec(BenefitKind::SbB2, i));
}
Integrand make_db_A1(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t j, std::size_t i) {
    return Integrand(m, c, w, kind_spec(BenefitKind::DbA1, i, j));
}
Integrand make_db_A2(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t j, std::size_t i) {
    return Integrand(m, c, w, kind_spec(j == 0 ? BenefitKind::DbA0 : BenefitKind::DbA2, i, j));
}
Integrand make_db_A0(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i) {
    return Integrand(m, c, w, kind_spec(BenefitKind::DbA0, i));
}

Complex eval_gmab_M(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::span<const double> u) {
    return make_gmab_A1(m, c, w)(u);
}
Complex eval_gmab_N(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::span<const double> v) {
    return make_gmab_A2(m, c, w)(v);
}
Complex eval_sb_M(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i,
                  std::span<const double> u) {
    return make_sb_B1(m, c, w, i)(u);
}
Complex eval_sb_N(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i,
                  std::span<const double> v) {
    return make_sb_B2(m, c, w, i)(v);
}
Complex eval_db_M(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t j, std::size_t i,
                  std::span<const double> u) {
    return make_db_A1(m, c, w, j, i)(u);
}
Complex eval_db_N(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t j, std::size_t i,
                  std::span<const double> v) {
    return make_db_A2(m, c, w, j, i)(v);
}
Complex eval_db_N0(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i, double u) {
    const double x[1] = {u};
    return make_db_A0(m, c, w, i)(x);
}

}  // namespace jlva
