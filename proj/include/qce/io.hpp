#pragma once

// CSV and JSON emission. Numbers are written with 17 significant digits so
// every value reparses to the same double.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qce/field_state.hpp"
#include "qce/metrics.hpp"
#include "qce/oracle.hpp"
#include "qce/sweep.hpp"

namespace qce {

std::string format_number(double x);

/// Header `t,S,W,concurrence,coherence_l1,S_bar`, one row per grid point.
std::string evolve_csv(const TimeSeries& series);
std::string evolve_json(const TimeSeries& series);

std::string stats_csv(const FieldStatistics& stats, const FockExpansion& expansion);
std::string stats_json(const FieldStatistics& stats, const FockExpansion& expansion);

/// Header `axis_value,mandel_q,var_x1,s_bar_long`.
std::string sweep_csv(std::string_view axis, std::span<const SweepPoint> points);
std::string sweep_json(std::string_view axis, std::span<const SweepPoint> points);

/// Fits of s_bar_long against mandel_q and var_x1.
std::string fit_summary_json(std::string_view axis, std::span<const SweepPoint> points);

std::string validate_csv(const ValidationReport& report);
std::string validate_json(const ValidationReport& report);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads back a numeric CSV produced by the writers above.
CsvTable parse_csv(std::string_view text);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace qce
