#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contract.hpp"
#include "mortality.hpp"
#include "path_oracle.hpp"
#include "pricing.hpp"
#include "term_structure.hpp"

namespace jlva {

// Everything a run needs. Defaults are the Table-1 contract plus the
// documented choices for the values the table leaves open.
struct RunConfig {
    // [market]
    double a = 0.00258, b = 0.00143, sigma2 = 0.1559;
    NigParams nig1{3.12, 1.87, 9.24};
    NigParams nig2{3.31, -1.43, 6.21};
    std::string curve = "flat";  // flat | table
    double curve_level = 0.02;
    std::string curve_file;
    // [mortality]
    SpouseParams spouse1{0.3, 0.07, 0.005, 1.0, 0.5};
    SpouseParams spouse2{0.3, 0.05, 0.002, 1.0, 0.5};
    double t_star = 60.0;
    // [contract]
    double notional = 100.0, maturity = 3.0, guarantee_rate = 0.02;
    double surrender_step = 1.0, death_step = 0.5, penalty_base = 0.95;
    double death_multiplier = 1.5, damping = 1.5;
    // [surrender]
    double beta = 0.02, baseline = 0.005;
    // [numerics]
    std::string method = "auto";  // auto | quad | mc | oracle | all
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 20240601;
    double quad_tol = 1e-8;
    std::uint64_t oracle_paths = 200000;
    double oracle_step = 0.015625;
    std::uint64_t threads = 0;
    // [output]
    std::string out_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// "section.key" = value, with the same validation as the file parser.
void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value);
std::string get_config_value(const RunConfig& cfg, const std::string& dotted_key);
std::vector<std::string> config_keys();

MarketModel build_market(const RunConfig& cfg);
ContractSpec build_contract(const RunConfig& cfg);
CoupleMortality build_mortality(const RunConfig& cfg);
EvaluatorConfig build_evaluator(const RunConfig& cfg);
OracleConfig build_oracle(const RunConfig& cfg);

// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace jlva
