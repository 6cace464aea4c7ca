#include "contract.hpp"

#include <cmath>
#include <sstream>

namespace jlva {

namespace {
constexpr double kGridTol = 1e-9;
}

std::vector<double> make_grid(double maturity, double step, bool include_maturity) {
    if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("grid step must be > 0");
    if (!(maturity > 0.0) || !std::isfinite(maturity)) throw ConfigError("contract.maturity must be > 0");
    std::vector<double> g{0.0};
    for (std::size_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * step;
        if (t >= maturity - kGridTol) break;
        g.push_back(t);
    }
    if (include_maturity) g.push_back(maturity);
    return g;
}

ContractSpec ContractSpec::standard(double maturity, double surrender_step, double death_step) {
    ContractSpec c;
    c.maturity = maturity;
    c.surrender_dates = make_grid(maturity, surrender_step, false);
    c.death_dates = make_grid(maturity, death_step, true);
    return c;
}

double ContractSpec::penalty_factor(double t) const {
    if (t < -kGridTol || t > maturity + kGridTol) throw NumericError("penalty evaluated outside [0, T]");
    return penalty_base + (1.0 - penalty_base) * t / maturity;
}

double ContractSpec::penalty_p(double t) const { return -std::log(penalty_factor(t)); }

double ContractSpec::surrender_prefactor(std::size_t l) const {
    return std::exp(-surrender_baseline * (t(l) - t(1)));
}

std::size_t ContractSpec::death_branch(std::size_t i) const {
    const double tb = tbar(i);
    std::size_t j = 0;
    for (std::size_t l = 1; l + 1 <= K(); ++l)
        if (t(l) < tb) j = l;
    return j;
}

void ContractSpec::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (!(notional > 0.0)) fail("contract.notional must be > 0");
    if (!(maturity > 0.0)) fail("contract.maturity must be > 0");
    if (!std::isfinite(guarantee_rate)) fail("contract.guarantee_rate must be finite");
    if (!(penalty_base > 0.0 && penalty_base <= 1.0)) fail("contract.penalty_base must lie in (0, 1]");
    if (!(death_multiplier > 1.0 && death_multiplier < 2.0)) fail("contract.death_multiplier must lie in (1, 2)");
    if (!(damping > 1.0 && damping < 2.0)) fail("contract.damping must lie in (1, 2)");
    if (!(surrender_beta >= 0.0 && surrender_beta <= 1.0)) fail("surrender.beta must lie in [0, 1]");
    if (!(surrender_baseline >= 0.0) || !std::isfinite(surrender_baseline)) fail("surrender.baseline must be >= 0");

    if (surrender_dates.size() < 2) fail("surrender grid needs at least one date t_1 < T (maturity too short for the step)");
    if (death_dates.size() < 2) fail("death grid needs at least one date");
    for (const auto* g : {&surrender_dates, &death_dates}) {
        if ((*g)[0] != 0.0) fail("grids must start at 0");
        for (std::size_t k = 1; k < g->size(); ++k)
            if (!((*g)[k] > (*g)[k - 1])) fail("grids must be strictly increasing");
    }
    if (!(surrender_dates.back() < maturity)) fail("last surrender date must precede maturity");
    if (std::abs(death_dates.back() - maturity) > kGridTol) fail("death grid must end at maturity");
    for (std::size_t l = 1; l < surrender_dates.size(); ++l) {
        bool found = false;
        for (double tb : death_dates) found |= std::abs(tb - surrender_dates[l]) <= kGridTol;
        if (!found) {
            std::ostringstream os;
            os << "surrender date " << surrender_dates[l] << " is not on the death grid";
            fail(os.str());
        }
    }
}

std::vector<SurrenderWeight> surrender_intensity_weights(const ContractSpec& c) {
    std::vector<SurrenderWeight> out;
    for (std::size_t l = 2; l <= c.K(); ++l) {
        const double dt = c.t(l) - c.t(l - 1);
        out.push_back({dt, c.surrender_beta * dt});
    }
    return out;
}

WConstants w_constants(const MarketModel& m, const ContractSpec& c) {
    const double T = c.maturity;
    const std::size_t K = c.K(), N = c.N();
    WConstants w;
    const double fT = m.forward_integral(0.0, T);
    const double dT = c.guarantee_rate * T;

    w.drift_t.assign(K + 1, 0.0);
    double acc = 0.0;
    for (std::size_t l = 1; l <= K; ++l) {
        acc += m.drift_integral(c.t(l - 1), c.t(l), T);
        w.drift_t[l] = acc;
    }
    w.drift_T = acc + m.drift_integral(c.t(K), T, T);

    w.w.assign(K, 0.0);
    for (std::size_t l = 1; l + 1 <= K; ++l)
        w.w[l] = w.drift_t[l] + fT - dT - m.omega(c.t(l)) - c.penalty_p(c.t(l));
    w.wK = w.drift_T + fT - dT - m.omega(T);

    w.wbar.assign(N + 1, 0.0);
    w.drift_bar.assign(N + 1, 0.0);
    for (std::size_t i = 1; i <= N; ++i) {
        const double tb = c.tbar(i);
        w.drift_bar[i] = m.drift_integral(0.0, tb, tb);
        w.wbar[i] = w.drift_bar[i] + m.forward_integral(0.0, tb) - m.omega(tb);
    }
    return w;
}

}  // namespace jlva
