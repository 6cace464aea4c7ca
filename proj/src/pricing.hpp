#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contract.hpp"
#include "integrands.hpp"
#include "integration.hpp"
#include "mortality.hpp"
#include "term_structure.hpp"

namespace jlva {

enum class MethodChoice { Auto, Quad, MonteCarlo };
const char* to_string(MethodChoice m);
MethodChoice parse_method_choice(const std::string& s);

struct EvaluatorConfig {
    MethodChoice method = MethodChoice::Auto;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 20240601;
    double quad_tol = 1e-8;
    std::size_t max_quad_dim = 3;
    // auto uses quadrature up to this many active dimensions, or up to
    // max_quad_dim when no damped dimension is present
    std::size_t auto_quad_dim = 2;
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Active (non-degenerate) dimensions of a problem and whether auto picks
// quadrature for it.
std::size_t active_dims(const IntegrationProblem& p);
bool auto_uses_quad(const IntegrationProblem& p, const EvaluatorConfig& ev);

// One assembled piece, e.g. A1 or B_2^2: value = prefactor (2 pi)^-d integral.
struct PieceResult {
    std::string label;
    BenefitKind kind;
    std::size_t i = 0, j = 0, dim = 0;
    IntegralEstimate integral;
    double value = 0.0;
    double std_error = 0.0;
    double imag_residual = 0.0;  // scaled like value
};

struct ComponentPrice {
    double value = 0.0;
    double std_error = 0.0;
};

struct PriceBreakdown {
    ComponentPrice gmab, sb, db, total;
    std::vector<PieceResult> pieces;
    double P_T = 0.0;
    std::vector<double> P_t;   // P_{t_i}, index 1..K-1
    std::vector<double> P_i;   // P(i), index 1..N
    std::vector<std::string> warnings;
    std::uint64_t seed = 0;
    std::string method_summary;

    const PieceResult* find(const std::string& label) const;
};

// Shared between engines that differ only in beta, delta, C, eps and kappa
// (the sensitivity grid). Integrals depend on (piece, beta, delta); the
// mortality probabilities on (eps, kappa) of both spouses.
struct PricingCache {
    std::mutex mu;
    std::map<std::tuple<std::uint64_t, double, double, int>, IntegralEstimate> integrals;
    struct Mortality {
        double P_T = 0.0;
        std::vector<double> P_t, P_i;
    };
    std::map<std::array<double, 4>, Mortality> mortality;
};

// Stable id of a piece; selects its MC substream.
std::uint64_t piece_id(BenefitKind k, std::size_t i = 0, std::size_t j = 0);

class PricingEngine {
public:
    PricingEngine(MarketModel m, ContractSpec c, CoupleMortality mort, EvaluatorConfig ev = {},
                  std::shared_ptr<PricingCache> cache = nullptr);

    const MarketModel& market() const { return m_; }
    const ContractSpec& contract() const { return c_; }
    const CoupleMortality& mortality() const { return mort_; }
    const WConstants& w() const { return w_; }
    const EvaluatorConfig& evaluator() const { return ev_; }

    double P_T() const { return P_T_; }
    double P_t(std::size_t i) const { return P_t_.at(i); }
    double P_i(std::size_t i) const { return P_i_.at(i); }

    // Evaluate a single piece with the configured (or a forced) method.
    PieceResult evaluate(const Integrand& f, std::uint64_t id, std::optional<Method> force = {}) const;

    PriceBreakdown price_gmab() const;
    PriceBreakdown price_sb() const;
    PriceBreakdown price_db() const;
    PriceBreakdown price_total() const;

private:
    MarketModel m_;
    ContractSpec c_;
    CoupleMortality mort_;
    EvaluatorConfig ev_;
    WConstants w_;
    double P_T_ = 0.0;
    std::vector<double> P_t_, P_i_;
    std::shared_ptr<PricingCache> cache_;

    struct Task {
        Integrand f;
        std::uint64_t id;
    };
    std::vector<PieceResult> run(std::vector<Task>& tasks) const;
    void gmab_into(PriceBreakdown& out) const;
    void sb_into(PriceBreakdown& out) const;
    void db_into(PriceBreakdown& out) const;
    void finish(PriceBreakdown& out) const;
};

enum class SensitivityParam { Beta, C, Delta, Eps1, Eps2, Kappa1, Kappa2 };
SensitivityParam parse_sensitivity_param(const std::string& s);
const char* to_string(SensitivityParam p);

struct SensitivityAxis {
    SensitivityParam param;
    double lo = 0.0, hi = 0.0;
    std::vector<double> values(std::size_t resolution) const;
};

struct SensitivityCell {
    double x1 = 0.0, x2 = 0.0;
    PriceBreakdown price;
};

void apply_sensitivity(SensitivityParam p, double value, ContractSpec& c, SpouseParams& s1, SpouseParams& s2);

std::vector<SensitivityCell> sensitivity_grid(const MarketModel& m, const ContractSpec& c, const CoupleMortality& mort,
                                              const EvaluatorConfig& ev, const SensitivityAxis& a1,
                                              const SensitivityAxis& a2, std::size_t resolution);

}  // namespace jlva
