#include "thz/metrics.hpp"

#include <algorithm>

namespace thz {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * double(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - double(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

AggregateReport rms_aggregate(std::span<const MetricReport> reports) {
  if (reports.empty()) throw Error(Errc::length, "rms_aggregate: no reports");
  AggregateReport agg;
  agg.trials = reports.size();

  std::array<double, MetricReport::field_count> rms{};
  std::vector<double> column(reports.size());
  for (std::size_t f = 0; f < MetricReport::field_count; ++f) {
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < reports.size(); ++t) {
      column[t] = reports[t].values()[f];
      sum_sq += column[t] * column[t];
    }
    rms[f] = reports.size() == 1 ? column[0] : std::sqrt(sum_sq / double(reports.size()));
    std::sort(column.begin(), column.end());
    agg.dispersion[f] = {column.front(), quantile(column, 0.25), quantile(column, 0.5), quantile(column, 0.75),
                         column.back()};
  }
  agg.rms = MetricReport::from_values(rms);
  return agg;
}

}  // namespace thz
