#pragma once

#include <cstddef>
#include <vector>

#include "term_structure.hpp"

namespace jlva {

struct ContractSpec {
    double notional = 100.0;
    double maturity = 3.0;
    double guarantee_rate = 0.02;         // delta
    std::vector<double> surrender_dates;  // t_0 = 0 < t_1 < ... < t_K < T
    std::vector<double> death_dates;      // tbar_0 = 0 < ... < tbar_N = T
    double penalty_base = 0.95;           // P~(t) = base + (1 - base) t / T
    double death_multiplier = 1.5;        // alpha
    double damping = 1.5;                 // r
    double surrender_beta = 0.02;
    double surrender_baseline = 0.005;    // C

    // Annual surrender grid and semiannual death grid by default.
    static ContractSpec standard(double maturity, double surrender_step = 1.0, double death_step = 0.5);

    std::size_t K() const { return surrender_dates.size() - 1; }
    std::size_t N() const { return death_dates.size() - 1; }
    double t(std::size_t l) const { return surrender_dates.at(l); }
    double tbar(std::size_t i) const { return death_dates.at(i); }

    double penalty_factor(double t) const;  // P~(t)
    double penalty_p(double t) const;       // -log P~(t)

    // e^{-C (t_l - t_1)}, l >= 1.
    double surrender_prefactor(std::size_t l) const;

    // Number of interior surrender dates t_1..t_{K-1} strictly before tbar_i:
    // 0 selects the pre-surrender branch, otherwise t_j < tbar_i <= t_{j+1}.
    std::size_t death_branch(std::size_t i) const;

    void validate() const;

    bool operator==(const ContractSpec&) const = default;
};

// Regenerate both grids for a new maturity with the same steps.
std::vector<double> make_grid(double maturity, double step, bool include_maturity);

struct SurrenderWeight {
    double dt;     // t_l - t_{l-1}
    double gamma;  // beta * dt
};

// One entry per l = 2..K.
std::vector<SurrenderWeight> surrender_intensity_weights(const ContractSpec& c);

struct WConstants {
    std::vector<double> w;     // w[l] for l = 1..K-1 (w[0] unused)
    double wK = 0.0;
    std::vector<double> wbar;  // wbar[i] for i = 1..N (wbar[0] unused)
    double drift_T = 0.0;      // int_0^T A(s, T) ds
    std::vector<double> drift_bar;  // int_0^{tbar_i} A(s, tbar_i) ds
    std::vector<double> drift_t;    // int_0^{t_l} A(s, T) ds
};

WConstants w_constants(const MarketModel& m, const ContractSpec& c);

}  // namespace jlva
