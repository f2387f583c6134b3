#include "thz/report.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

namespace thz {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string render_csv(const ReportData& data) {
  std::string out = "trial";
  for (auto name : MetricReport::field_names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t t = 0; t < data.trials.size(); ++t) {
    out += std::to_string(t);
    for (double v : data.trials[t].values()) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string render_json(const ReportData& data) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["scenario"] = data.scenario;
  doc["seed"] = data.seed;
  doc["trials"] = data.trials.size();
  doc["predicted_snr_db"] = data.predicted_snr_db ? number(*data.predicted_snr_db) : ordered_json(nullptr);

  ordered_json rows = ordered_json::array();
  for (std::size_t t = 0; t < data.trials.size(); ++t) {
    ordered_json row;
    row["trial"] = t;
    const auto v = data.trials[t].values();
    for (std::size_t f = 0; f < MetricReport::field_count; ++f) row[std::string(MetricReport::field_names[f])] = number(v[f]);
    rows.push_back(std::move(row));
  }
  doc["per_trial"] = std::move(rows);

  ordered_json agg, quart;
  const auto rms = data.aggregate.rms.values();
  for (std::size_t f = 0; f < MetricReport::field_count; ++f) {
    const std::string name(MetricReport::field_names[f]);
    agg[name] = number(rms[f]);
    const auto& d = data.aggregate.dispersion[f];
    quart[name] = {{"min", number(d.min)},
                   {"q1", number(d.q1)},
                   {"median", number(d.median)},
                   {"q3", number(d.q3)},
                   {"max", number(d.max)}};
  }
  doc["aggregate"] = {{"method", "rms"}, {"trials", data.aggregate.trials}, {"metrics", std::move(agg)}};
  doc["quartiles"] = std::move(quart);
  return doc.dump(2) + "\n";
}

void emit_report(const ReportData& data, ReportFormat format, const std::filesystem::path& path) {
  if (data.trials.empty()) throw Error(Errc::length, "emit_report: no trial reports");
  const std::string text = format == ReportFormat::csv ? render_csv(data) : render_json(data);
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "emit_report: cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(Errc::io, "emit_report: write to '" + path.string() + "' failed");
}

}  // namespace thz
