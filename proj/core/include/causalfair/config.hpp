#pragma once

#include <causalfair/dataset.hpp>
#include <causalfair/estimator.hpp>
#include <causalfair/report.hpp>

#include <optional>
#include <string>
#include <vector>

namespace causalfair {

/// Parsed analysis configuration: column specs, binning, roles, toggles.
struct AnalysisConfig {
    std::vector<ColumnSpec> columns;   // includes role columns (auto-added as categorical)
    BinningSpec bins;
    SfmRoles roles;
    std::uint64_t cap = kDefaultJointCap;
    std::optional<double> selected_threshold;
    LlmConfig llm;
};

AnalysisConfig parse_analysis_config(const std::string& json_text);
AnalysisConfig load_analysis_config(const std::string& path);

} // namespace causalfair
