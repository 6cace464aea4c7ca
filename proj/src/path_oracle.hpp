#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "contract.hpp"
#include "mortality.hpp"
#include "term_structure.hpp"

namespace jlva {

using Rng = std::mt19937_64;

// Michael-Schucany-Haas draw from IG(mean, shape).
double sample_inverse_gaussian(double mean, double shape, Rng& rng);

// NIG increment over dt: IG subordinator Z, then beta Z + sqrt(Z) N(0,1).
double simulate_nig_increment(const NigParams& p, double dt, Rng& rng);

struct SimulatedCouple {
    static constexpr double kNever = std::numeric_limits<double>::infinity();
    double tau1 = kNever, tau2 = kNever;  // beyond the horizon -> infinity
    int first_death = 0;                  // 1 or 2; 0 if nobody died before the horizon
    std::vector<double> t, lambda1, lambda2;  // filled only when recording
    std::uint64_t steps = 0, negative_steps = 0;
};

SimulatedCouple simulate_couple(const CoupleMortality& m, double horizon, double step, Rng& rng,
                                bool record_path = false);

// int_0^t (lambda1 + lambda2) by trapezoid on exact OU transitions, ignoring deaths.
double simulate_integrated_intensity(const CoupleMortality& m, double t, double step, Rng& rng);

// Deterministic pieces of one market path, precomputed per contract.
class MarketKernels {
public:
    MarketKernels(const MarketModel& m, const ContractSpec& c, double step);

    const MarketModel& market() const { return *m_; }
    const ContractSpec& contract() const { return *c_; }
    double step() const { return h_; }
    std::size_t nodes() const { return n_; }
    // Node index of a contract date.
    std::size_t node_of(double t) const;

    struct DateInfo {
        double t;
        std::size_t node;
        double fwd0_t;       // int_0^t f0
        double fwd_t_T;      // int_t^T f0
        double drift_tt;     // int_0^t A(s, t) ds
        double drift_tT;     // int_0^t A(s, T) ds
        double omega;
    };
    const std::vector<DateInfo>& dates() const { return dates_; }
    const DateInfo& info(double t) const;

private:
    const MarketModel* m_;
    const ContractSpec* c_;
    double h_;
    std::size_t n_;
    std::vector<DateInfo> dates_;
};

struct SimulatedMarket {
    // Indexed like MarketKernels::dates().
    std::vector<double> discount;       // exp(-int_0^t r)
    std::vector<double> equity;         // S_t
    std::vector<double> D;              // D(t) at the same dates
    std::vector<double> surrender_intensity;  // lambda^s on [t_i, t_{i+1}), i = 1..K-1
    std::size_t surrender_index = 0;    // l with tau^s = t_l, 0 for never
};

SimulatedMarket simulate_market(const MarketKernels& k, Rng& rng, Rng& uniform_rng);

struct OracleConfig {
    std::uint64_t paths = 200000;
    std::uint64_t seed = 20240601;
    double market_step = 1.0 / 64.0;
    double mortality_step = 1.0 / 64.0;
    unsigned threads = 0;
};

struct OracleEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct OracleResult {
    OracleEstimate gmab, sb, db, total;
    OracleEstimate discounted_equity;  // E[exp(-int_0^T r) S_T]
    OracleEstimate discount;           // E[exp(-int_0^T r)]
    std::uint64_t paths = 0;
    std::uint64_t seed = 0;
    std::uint64_t intensity_steps = 0, negative_intensity_steps = 0;
    double negative_intensity_fraction() const {
        return intensity_steps ? static_cast<double>(negative_intensity_steps) / static_cast<double>(intensity_steps) : 0.0;
    }
};

OracleResult oracle_price(const MarketModel& m, const ContractSpec& c, const CoupleMortality& mort,
                          const OracleConfig& cfg);

}  // namespace jlva
