#include "pricing.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace jlva {

const char* to_string(MethodChoice m) {
    switch (m) {
        case MethodChoice::Auto: return "auto";
        case MethodChoice::Quad: return "quad";
        case MethodChoice::MonteCarlo: return "mc";
    }
    return "?";
}

MethodChoice parse_method_choice(const std::string& s) {
    if (s == "auto") return MethodChoice::Auto;
    if (s == "quad") return MethodChoice::Quad;
    if (s == "mc" || s == "mc-is") return MethodChoice::MonteCarlo;
    throw ConfigError("unknown integration method '" + s + "' (expected auto, quad or mc)");
}

const PieceResult* PriceBreakdown::find(const std::string& label) const {
    for (const auto& p : pieces)
        if (p.label == label) return &p;
    return nullptr;
}

PricingEngine::PricingEngine(MarketModel m, ContractSpec c, CoupleMortality mort, EvaluatorConfig ev,
                             std::shared_ptr<PricingCache> cache)
    : m_(std::move(m)), c_(std::move(c)), mort_(std::move(mort)), ev_(ev), cache_(std::move(cache)) {
    c_.validate();
    m_.validate(c_.maturity);
    if (c_.maturity > mort_.t_star()) throw ConfigError("contract maturity exceeds mortality.t_star");
    if (ev_.threads == 0) ev_.threads = default_threads();
    w_ = w_constants(m_, c_);

    const std::array<double, 4> mkey{mort_.spouse1().eps, mort_.spouse1().kappa, mort_.spouse2().eps,
                                     mort_.spouse2().kappa};
    if (cache_) {
        std::lock_guard lk(cache_->mu);
        if (auto it = cache_->mortality.find(mkey); it != cache_->mortality.end()) {
            P_T_ = it->second.P_T;
            P_t_ = it->second.P_t;
            P_i_ = it->second.P_i;
            return;
        }
    }
    P_T_ = mort_.prob_union_alive(c_.maturity);
    P_t_.assign(c_.K(), 0.0);
    for (std::size_t i = 1; i + 1 <= c_.K(); ++i) P_t_[i] = mort_.prob_union_alive(c_.t(i));
    P_i_.assign(c_.N() + 1, 0.0);
    for (std::size_t i = 1; i <= c_.N(); ++i)
        P_i_[i] = mort_.prob_death_interval(i, c_.death_dates, c_.death_multiplier);
    if (cache_) {
        std::lock_guard lk(cache_->mu);
        cache_->mortality[mkey] = {P_T_, P_t_, P_i_};
    }
}

std::uint64_t piece_id(BenefitKind k, std::size_t i, std::size_t j) {
    switch (k) {
        case BenefitKind::GmabA1: return 1;
        case BenefitKind::GmabA2: return 2;
        case BenefitKind::SbB1: return 100 + i;
        case BenefitKind::SbB2: return 200 + i;
        case BenefitKind::DbA1: return 10000 + 1000 * j + i;
        case BenefitKind::DbA2: return 20000 + 1000 * j + i;
        case BenefitKind::DbA0: return 30000 + i;
    }
    return 0;
}

std::size_t active_dims(const IntegrationProblem& p) {
    std::size_t active = p.plain_last ? 1 : 0;
    for (double g : p.gamma) active += g >= kDegenerateGamma ? 1 : 0;
    return active;
}

bool auto_uses_quad(const IntegrationProblem& p, const EvaluatorConfig& ev) {
    const std::size_t active = active_dims(p);
    return active <= ev.auto_quad_dim || (!p.plain_last && active <= ev.max_quad_dim);
}

PieceResult PricingEngine::evaluate(const Integrand& f, std::uint64_t id, std::optional<Method> force) const {
    const IntegrationProblem p = problem_from(f);
    const std::size_t active = active_dims(p);

    Method method;
    if (force) {
        method = *force;
    } else if (active == 0) {
        method = Method::Direct;
    } else if (ev_.method == MethodChoice::Quad) {
        method = Method::Quad;
    } else if (ev_.method == MethodChoice::MonteCarlo) {
        method = Method::MonteCarlo;
    } else {
        method = auto_uses_quad(p, ev_) ? Method::Quad : Method::MonteCarlo;
    }

    const auto key = std::make_tuple(id, c_.surrender_beta, c_.guarantee_rate, static_cast<int>(method));
    std::optional<IntegralEstimate> hit;
    if (cache_) {
        std::lock_guard lk(cache_->mu);
        if (auto it = cache_->integrals.find(key); it != cache_->integrals.end()) hit = it->second;
    }
    IntegralEstimate est;
    if (hit) {
        est = *hit;
    } else if (method == Method::MonteCarlo) {
        const std::uint64_t seed = substream_seed(ev_.seed, id, 7);
        est = mc_is(p, make_plan(p, ev_.samples, seed, 1));
    } else {
        est = quad_nd(p, ev_.quad_tol, ev_.max_quad_dim);
    }
    if (cache_ && !hit) {
        std::lock_guard lk(cache_->mu);
        cache_->integrals.emplace(key, est);
    }
    PieceResult r;
    r.label = f.spec().label;
    r.kind = f.spec().kind;
    r.i = f.spec().i;
    r.j = f.spec().j;
    r.dim = f.dim();
    r.integral = est;
    r.value = f.assemble(est.value);
    r.std_error = std::abs(f.assemble(est.std_error));
    r.imag_residual = std::abs(f.assemble(est.imag_residual));
    return r;
}

std::vector<PieceResult> PricingEngine::run(std::vector<Task>& tasks) const {
    std::vector<PieceResult> out(tasks.size());
    parallel_for(tasks.size(), ev_.threads, [&](std::size_t k) { out[k] = evaluate(tasks[k].f, tasks[k].id); });
    return out;
}

namespace {

double combine_se(std::initializer_list<double> xs) {
    double s = 0.0;
    for (double x : xs) s += x * x;
    return std::sqrt(s);
}

}  // namespace

void PricingEngine::gmab_into(PriceBreakdown& out) const {
    std::vector<Task> tasks;
    tasks.push_back({make_gmab_A1(m_, c_, w_), piece_id(BenefitKind::GmabA1)});
    tasks.push_back({make_gmab_A2(m_, c_, w_), piece_id(BenefitKind::GmabA2)});
    auto res = run(tasks);
    const double T = c_.maturity;
    const double g = c_.notional * std::exp(c_.guarantee_rate * T) * m_.bond_price0(T) * P_T_;
    out.gmab.value = g * (res[0].value + res[1].value);
    out.gmab.std_error = g * combine_se({res[0].std_error, res[1].std_error});
    for (auto& r : res) out.pieces.push_back(std::move(r));
}

void PricingEngine::sb_into(PriceBreakdown& out) const {
    const std::size_t K = c_.K();
    std::vector<Task> tasks;
    for (std::size_t i = 1; i + 1 <= K; ++i) {
        if (i >= 2) tasks.push_back({make_sb_B1(m_, c_, w_, i), piece_id(BenefitKind::SbB1, i)});
        tasks.push_back({make_sb_B2(m_, c_, w_, i), piece_id(BenefitKind::SbB2, i)});
    }
    auto res = run(tasks);
    std::size_t k = 0;
    double var = 0.0;
    for (std::size_t i = 1; i + 1 <= K; ++i) {
        double b1 = 1.0, b1se = 0.0;
        if (i >= 2) {
            b1 = res[k].value;
            b1se = res[k].std_error;
            ++k;
        }
        const PieceResult& b2 = res[k++];
        const double wgt = c_.notional * c_.penalty_factor(c_.t(i)) * P_t_[i];
        out.sb.value += wgt * (b1 - b2.value);
        var += wgt * wgt * (b1se * b1se + b2.std_error * b2.std_error);
        if (b1 - b2.value < -3.0 * combine_se({b1se, b2.std_error}) - 1e-12) {
            std::ostringstream os;
            os << "B" << i << "^1 < B" << i << "^2 beyond 3 sigma (" << b1 << " vs " << b2.value << ")";
            out.warnings.push_back(os.str());
        }
        if (b2.value < 0.0) out.warnings.push_back("negative B" + std::to_string(i) + "^2");
    }
    out.sb.std_error = std::sqrt(var);
    for (auto& r : res) out.pieces.push_back(std::move(r));
}

void PricingEngine::db_into(PriceBreakdown& out) const {
    const std::size_t N = c_.N();
    std::vector<Task> tasks;
    std::vector<std::size_t> branch(N + 1);
    for (std::size_t i = 1; i <= N; ++i) {
        const std::size_t j = c_.death_branch(i);
        branch[i] = j;
        if (j == 0) {
            tasks.push_back({make_db_A0(m_, c_, w_, i), piece_id(BenefitKind::DbA0, i)});
        } else {
            tasks.push_back({make_db_A1(m_, c_, w_, j, i), piece_id(BenefitKind::DbA1, i, j)});
            tasks.push_back({make_db_A2(m_, c_, w_, j, i), piece_id(BenefitKind::DbA2, i, j)});
        }
    }
    auto res = run(tasks);
    std::size_t k = 0;
    double var = 0.0;
    for (std::size_t i = 1; i <= N; ++i) {
        const double tb = c_.tbar(i);
        const double g = P_i_[i] * c_.notional * std::exp(c_.guarantee_rate * tb) * m_.bond_price0(tb);
        double a = 0.0, se2 = 0.0;
        if (branch[i] == 0) {
            a = 1.0 + res[k].value;
            se2 = res[k].std_error * res[k].std_error;
            ++k;
        } else {
            a = res[k].value + res[k + 1].value;
            se2 = res[k].std_error * res[k].std_error + res[k + 1].std_error * res[k + 1].std_error;
            k += 2;
        }
        out.db.value += g * a;
        var += g * g * se2;
    }
    out.db.std_error = std::sqrt(var);
    for (auto& r : res) out.pieces.push_back(std::move(r));
}

void PricingEngine::finish(PriceBreakdown& out) const {
    out.total.value = out.gmab.value + out.sb.value + out.db.value;
    out.total.std_error = combine_se({out.gmab.std_error, out.sb.std_error, out.db.std_error});
    out.P_T = P_T_;
    out.P_t = P_t_;
    out.P_i = P_i_;
    out.seed = ev_.seed;
    bool any_mc = false, any_quad = false;
    for (const auto& p : out.pieces) {
        any_mc |= p.integral.method == Method::MonteCarlo;
        any_quad |= p.integral.method == Method::Quad;
        if (p.imag_residual > std::max(1e-8, 10.0 * p.std_error)) {
            std::ostringstream os;
            os << p.label << ": imaginary residual " << p.imag_residual << " exceeds tolerance";
            out.warnings.push_back(os.str());
        }
    }
    out.method_summary = any_mc && any_quad ? "quad+mc-is" : any_mc ? "mc-is" : any_quad ? "quad" : "direct";
    for (auto [name, v] : {std::pair{"GMAB", out.gmab.value}, {"SB", out.sb.value}, {"DB", out.db.value}})
        if (v < 0.0) out.warnings.push_back(std::string(name) + " price is negative");
    if (mort_.joint_survival_flagged(c_.maturity)) out.warnings.push_back("joint survival exceeds 1 at maturity");
}

PriceBreakdown PricingEngine::price_gmab() const {
    PriceBreakdown out;
    gmab_into(out);
    finish(out);
    return out;
}

PriceBreakdown PricingEngine::price_sb() const {
    PriceBreakdown out;
    sb_into(out);
    finish(out);
    return out;
}

PriceBreakdown PricingEngine::price_db() const {
    PriceBreakdown out;
    db_into(out);
    finish(out);
    return out;
}

PriceBreakdown PricingEngine::price_total() const {
    PriceBreakdown out;
    gmab_into(out);
    sb_into(out);
    db_into(out);
    finish(out);
    return out;
}

// -------------------------------------------------------------- sensitivity

SensitivityParam parse_sensitivity_param(const std::string& s) {
    if (s == "beta") return SensitivityParam::Beta;
    if (s == "C" || s == "c") return SensitivityParam::C;
    if (s == "delta") return SensitivityParam::Delta;
    if (s == "eps1") return SensitivityParam::Eps1;
    if (s == "eps2") return SensitivityParam::Eps2;
    if (s == "kappa1") return SensitivityParam::Kappa1;
    if (s == "kappa2") return SensitivityParam::Kappa2;
    throw ConfigError("unknown sensitivity parameter '" + s + "' (expected beta, C, delta, eps1, eps2, kappa1, kappa2)");
}

const char* to_string(SensitivityParam p) {
    switch (p) {
        case SensitivityParam::Beta: return "beta";
        case SensitivityParam::C: return "C";
        case SensitivityParam::Delta: return "delta";
        case SensitivityParam::Eps1: return "eps1";
        case SensitivityParam::Eps2: return "eps2";
        case SensitivityParam::Kappa1: return "kappa1";
        case SensitivityParam::Kappa2: return "kappa2";
    }
    return "?";
}

std::vector<double> SensitivityAxis::values(std::size_t resolution) const {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("sensitivity range must be finite");
    if (resolution < 1) throw ConfigError("sensitivity resolution must be >= 1");
    std::vector<double> v(resolution);
    for (std::size_t k = 0; k < resolution; ++k)
        v[k] = resolution == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(resolution - 1);
    return v;
}

void apply_sensitivity(SensitivityParam p, double value, ContractSpec& c, SpouseParams& s1, SpouseParams& s2) {
    switch (p) {
        case SensitivityParam::Beta: c.surrender_beta = value; break;
        case SensitivityParam::C: c.surrender_baseline = value; break;
        case SensitivityParam::Delta: c.guarantee_rate = value; break;
        case SensitivityParam::Eps1: s1.eps = value; break;
        case SensitivityParam::Eps2: s2.eps = value; break;
        case SensitivityParam::Kappa1: s1.kappa = value; break;
        case SensitivityParam::Kappa2: s2.kappa = value; break;
    }
}

namespace {

template <class E>
[[noreturn]] void rethrow_with(const E& e, const std::string& where) {
    throw E(where + ": " + e.what());
}

}  // namespace

std::vector<SensitivityCell> sensitivity_grid(const MarketModel& m, const ContractSpec& c, const CoupleMortality& mort,
                                              const EvaluatorConfig& ev, const SensitivityAxis& a1,
                                              const SensitivityAxis& a2, std::size_t resolution) {
    const auto v1 = a1.values(resolution), v2 = a2.values(resolution);
    std::vector<SensitivityCell> cells;
    auto cache = std::make_shared<PricingCache>();
    for (double x1 : v1) {
        for (double x2 : v2) {
            std::ostringstream where;
            where << "sensitivity cell (" << to_string(a1.param) << "=" << x1 << ", " << to_string(a2.param) << "="
                  << x2 << ")";
            try {
                ContractSpec cc = c;
                SpouseParams s1 = mort.spouse1(), s2 = mort.spouse2();
                apply_sensitivity(a1.param, x1, cc, s1, s2);
                apply_sensitivity(a2.param, x2, cc, s1, s2);
                PricingEngine eng(m, cc, CoupleMortality(s1, s2, mort.t_star()), ev, cache);
                cells.push_back({x1, x2, eng.price_total()});
            } catch (const StripViolation& e) {
                rethrow_with(e, where.str());
            } catch (const NumericError& e) {
                rethrow_with(e, where.str());
            } catch (const ConfigError& e) {
                rethrow_with(e, where.str());
            }
        }
    }
    return cells;
}

}  // namespace jlva
