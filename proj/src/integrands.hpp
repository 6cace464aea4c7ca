#pragma once

#include <span>
#include <string>
#include <vector>

#include "contract.hpp"
#include "levy.hpp"
#include "term_structure.hpp"

namespace jlva {

enum class BenefitKind { GmabA1, GmabA2, SbB1, SbB2, DbA1, DbA2, DbA0 };

const char* to_string(BenefitKind k);

struct IntegrandSpec {
    BenefitKind kind = BenefitKind::GmabA1;
    std::size_t i = 0;  // SB date index or DB death-date index
    std::size_t j = 0;  // DB branch
    std::size_t dim = 0;
    std::vector<double> gamma;  // Cauchy scales, one per leading dimension
    bool damped = false;        // last dimension carries the payoff transform
    double damping = 0.0;       // r
    double prefactor = 1.0;     // e^{-C(...)} e^{-int A}, excluding (2 pi)^{-dim}
    std::string label;
};

// One of the M / N integrands. Coordinates x[0..nc-1] are the Cauchy
// dimensions (u_1..), x[nc] the damped one when present.
class Integrand {
public:
    Integrand(const MarketModel& m, const ContractSpec& c, const WConstants& w, IntegrandSpec spec);

    const IntegrandSpec& spec() const { return spec_; }
    std::size_t dim() const { return spec_.dim; }

    // Integrand with the Cauchy factors divided out.
    Complex smooth(std::span<const double> x) const;
    // The full integrand M or N as written in the pricing formulas.
    Complex operator()(std::span<const double> x) const;
    // prefactor / (2 pi)^dim * integral.
    double assemble(double integral) const;

    // Cumulant exponent int_0^H theta1(E) + theta2(F) ds; split controls
    // whether the integration is broken at the surrender dates.
    Complex cumulant_exponent(std::span<const double> x, bool split = true) const;

private:
    enum class Tilt { Forward, Spot };
    const MarketModel* m_;
    const ContractSpec* c_;
    IntegrandSpec spec_;
    Tilt tilt_ = Tilt::Forward;
    double horizon_ = 0.0;     // upper limit of the s-integral
    double real_T_ = 0.0;      // maturity entering the real tilt (T or tbar_i)
    double damp_T_ = 0.0;      // maturity of the damped coordinate's kernels
    std::vector<double> w_;    // phase coefficients per Cauchy coordinate
    std::vector<double> ends_; // indicator ends t_l per Cauchy coordinate
    double w_damped_ = 0.0;
    double const_term_ = 0.0;  // -omega(t_i) for the spot-measure families
    double payoff_shift_ = 0.0;  // delta * tbar for the DB transform
    std::vector<double> breaks_;
};

Integrand make_gmab_A1(const MarketModel& m, const ContractSpec& c, const WConstants& w);
Integrand make_gmab_A2(const MarketModel& m, const ContractSpec& c, const WConstants& w);
Integrand make_sb_B1(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i);
Integrand make_sb_B2(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i);
// j = 0 gives A_{0,i} (only the N-type integrand exists for it).
Integrand make_db_A1(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t j, std::size_t i);
Integrand make_db_A2(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t j, std::size_t i);
Integrand make_db_A0(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i);

// True when (j, i) satisfies t_j < tbar_i <= t_{j+1} (j = K-1: tbar_i <= T).
bool db_admissible(const ContractSpec& c, std::size_t j, std::size_t i);

// Point evaluations under the names used in the pricing formulas.
Complex eval_gmab_M(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::span<const double> u);
Complex eval_gmab_N(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::span<const double> v);
Complex eval_sb_M(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i, std::span<const double> u);
Complex eval_sb_N(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i, std::span<const double> v);
Complex eval_db_M(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t j, std::size_t i,
                  std::span<const double> u);
Complex eval_db_N(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t j, std::size_t i,
                  std::span<const double> v);
Complex eval_db_N0(const MarketModel& m, const ContractSpec& c, const WConstants& w, std::size_t i, double u);

}  // namespace jlva
