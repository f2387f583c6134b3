#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thz/metrics.hpp"

namespace thz {

enum class ReportFormat { csv, json };

struct ReportData {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<MetricReport> trials;
  AggregateReport aggregate;
  std::optional<double> predicted_snr_db;  // closed-form chain prediction
};

/// Header row then one row per trial, fixed column order.
std::string render_csv(const ReportData& data);

/// Per-trial rows, RMS aggregate block and min/q1/median/q3/max per metric.
/// Non-finite values serialise as null.
std::string render_json(const ReportData& data);

void emit_report(const ReportData& data, ReportFormat format, const std::filesystem::path& path);

/// Shortest text that reads back to the same double; "inf"/"-inf"/"nan" otherwise.
std::string format_number(double v);

}  // namespace thz
