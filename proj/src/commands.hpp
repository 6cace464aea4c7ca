#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "pricing.hpp"

namespace jlva {

struct Report {
    std::string text;
    std::vector<std::pair<std::string, std::string>> files;  // name, content
    std::optional<PriceBreakdown> breakdown;
    int status = 0;  // 0 ok, 3 validation failure
};

Report cmd_price(const RunConfig& cfg);
Report cmd_benchmark(const RunConfig& cfg);

struct SensitivityRequest {
    SensitivityAxis axis1{SensitivityParam::Beta, 0.0, 0.06};
    SensitivityAxis axis2{SensitivityParam::C, 0.0, 0.015};
    std::size_t resolution = 4;
};

// Default range for a parameter axis, used when only the name is given.
SensitivityAxis default_axis(SensitivityParam p);

Report cmd_sensitivity(const RunConfig& cfg, const SensitivityRequest& req);
Report cmd_validate(const RunConfig& cfg);

// Writes every file of the report under dir; returns the paths written.
std::vector<std::string> write_report_files(const Report& r, const std::string& dir);

// First death-benefit pair (j, i) with j >= 1, the one the benchmark reports.
std::pair<std::size_t, std::size_t> benchmark_db_pair(const ContractSpec& c);

}  // namespace jlva
