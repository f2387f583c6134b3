// thzlink: scenario runner, frequency planner, capture analyzer.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "thz/iq_file.hpp"
#include "thz/scenario.hpp"

namespace fs = std::filesystem;
using namespace thz;

namespace {

struct RunArgs {
  std::vector<std::string> configs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out;
  std::string dump_iq;
  unsigned threads = 0;
};

struct PlanArgs {
  double target_hz = 0.0;
  int m_min = 1, m_max = 8;
  double lo_min = 20e9, lo_max = 40e9, lo_step = 0.1e9;
  double if_min = 2e9, if_max = 3e9, if_step = 0.1e9;
};

struct AnalyzeArgs {
  std::string iq;
  std::string ref;
  std::string modulation = "qpsk";
  double rolloff = 0.25;
  std::size_t span = 32;
  std::size_t sps = 4;
  std::optional<std::size_t> sync_offset;
  std::optional<std::size_t> symbols;
  std::string mode = "post";
  bool no_cfo = false;
  std::string out;
};

struct SelftestArgs {
  std::string config_dir = THZ_CONFIG_DIR;
  std::string work_dir = (fs::temp_directory_path() / "thzlink_selftest").string();
  unsigned threads = 0;
};

void print_metrics(const MetricReport& m, std::ostream& os) {
  const auto v = m.values();
  for (std::size_t f = 0; f < MetricReport::field_count; ++f)
    os << "  " << MetricReport::field_names[f] << " = " << format_number(v[f]) << "\n";
}

int cmd_run(const RunArgs& a) {
  for (const auto& path : a.configs) {
    ScenarioConfig cfg = load_scenario(path);
    if (a.seed) cfg.seed = *a.seed;
    if (a.trials) cfg.trials = *a.trials;
    cfg.validate();

    fs::path csv = cfg.output.csv_path, json = cfg.output.json_path;
    if (!a.out.empty()) {
      csv = fs::path(a.out) / (cfg.name + ".csv");
      json = fs::path(a.out) / (cfg.name + ".json");
    }
    if (csv.empty() && json.empty()) csv = cfg.name + ".csv", json = cfg.name + ".json";

    const ScenarioRunner runner(cfg);
    const ScenarioResult result = runner.run(a.threads);
    const ReportData data = result.report_data();
    if (!csv.empty()) emit_report(data, ReportFormat::csv, csv);
    if (!json.empty()) emit_report(data, ReportFormat::json, json);

    if (!a.dump_iq.empty()) {
      const fs::path prefix = fs::path(a.dump_iq).string() + cfg.name;
      if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
      write_iq(runner.tx(), prefix.string() + "_tx.iq");
      write_iq(runner.trial(0).rx, prefix.string() + "_rx.iq");
    }

    std::cout << cfg.name << ": " << cfg.trials << " trials, seed " << cfg.seed << ", predicted snr "
              << format_number(result.predicted_snr_db) << " dB\n";
    print_metrics(result.aggregate.rms, std::cout);
    if (!csv.empty()) std::cout << "  wrote " << csv.string() << "\n";
    if (!json.empty()) std::cout << "  wrote " << json.string() << "\n";
  }
  return 0;
}

int cmd_plan(const PlanArgs& a) {
  const FrequencyPlan p =
      plan_for_target(a.target_hz, {a.m_min, a.m_max}, {a.lo_min, a.lo_max, a.lo_step}, {a.if_min, a.if_max, a.if_step});
  std::cout << "target_hz   = " << format_number(a.target_hz) << "\n"
            << "multiplier  = " << p.config.multiplier << "\n"
            << "f_lo_hz     = " << format_number(p.config.f_lo_hz) << "\n"
            << "f_if_hz     = " << format_number(p.config.f_if_hz) << "\n"
            << "sideband    = " << (p.sideband == Sideband::upper ? "upper" : "lower") << "\n"
            << "achieved_hz = " << format_number(p.achieved_hz) << "\n"
            << "residual_hz = " << format_number(p.residual_hz) << "\n";
  const auto step = step_size_unfiltered(p.config);
  std::cout << "step_hz     = " << format_number(step.lower) << " / " << format_number(step.upper)
            << " (unfiltered), " << format_number(step_size_filtered(p.config)) << " (filtered)\n";
  return 0;
}

IqFrame with_timing(const IqFrameF& f, const PulseShape& shape, std::size_t first, std::size_t count) {
  IqFrame out = f.cast<double>();
  out.timing = SymbolTiming{first, shape.samples_per_symbol, count};
  return out;
}

int cmd_analyze(const AnalyzeArgs& a) {
  const PulseShape shape{a.rolloff, a.span, a.sps};
  shape.validate();
  const ModulationScheme scheme = ModulationScheme::parse(a.modulation);
  const IqFrameF meas = read_iq(a.iq);
  const IqFrameF ref = read_iq(a.ref);
  if (meas.sample_rate_hz != ref.sample_rate_hz)
    throw Error(Errc::parameter, "analyze: capture and reference sample rates differ");

  // Symbol instants: the declared sync offset, else the TX filter group delay.
  const std::size_t first = a.sync_offset.value_or(shape.group_delay());
  const auto fits = [&](const IqFrameF& f) -> std::size_t {
    const auto n = std::size_t(f.size());
    const std::size_t last = n > shape.group_delay() ? n - 1 - shape.group_delay() : 0;
    return last < first ? 0 : (last - first) / shape.samples_per_symbol + 1;
  };
  std::size_t count = std::min(fits(meas), fits(ref));
  if (a.symbols) count = std::min(count, *a.symbols);
  if (count < 64) throw Error(Errc::insufficient_data, "analyze: fewer than 64 complete symbols in the recordings");

  const IqFrame ref_frame = with_timing(ref, shape, first, count);
  const Signal<double> reference = hard_decide(matched_filter_and_sample(ref_frame, shape), scheme);

  ReceiverOptions opt;
  if (a.mode == "pre") opt.stage = MetricStage::pre_equalization;
  else if (a.mode != "post") throw Error(Errc::parameter, "analyze: --mode must be post or pre");
  opt.correct_cfo = !a.no_cfo;
  const IqFrame rx = with_timing(meas, shape, first, count);
  const auto burst = receive(rx, shape, scheme, reference, opt);

  auto pair = ConstellationPair<double>::from_complex(reference, burst.symbols_measured);
  if (ref.center_freq_hz != 0.0 || meas.center_freq_hz != 0.0) {
    pair.fc_ref_hz = ref.center_freq_hz;
    pair.fc_meas_hz = meas.center_freq_hz + burst.cfo_hat_hz;
  }
  const MetricReport m = compute_metrics(pair);

  std::cout << a.iq << ": " << count << " symbols, h_hat = " << format_number(burst.h_hat.real()) << " "
            << (burst.h_hat.imag() < 0 ? '-' : '+') << " j" << format_number(std::abs(burst.h_hat.imag()))
            << ", cfo_hat_hz = " << format_number(burst.cfo_hat_hz) << "\n";
  print_metrics(m, std::cout);
  if (!a.out.empty()) {
    ReportData data;
    data.scenario = fs::path(a.iq).stem().string();
    data.trials = {m};
    data.aggregate = rms_aggregate(data.trials);
    const auto fmt = fs::path(a.out).extension() == ".csv" ? ReportFormat::csv : ReportFormat::json;
    emit_report(data, fmt, a.out);
    std::cout << "  wrote " << a.out << "\n";
  }
  return 0;
}

int cmd_selftest(const SelftestArgs& a) {
  acceptance::Options opt;
  opt.config_dir = a.config_dir;
  opt.work_dir = a.work_dir;
  opt.threads = a.threads;
  const auto outcomes = acceptance::run_all(opt);
  return acceptance::print(outcomes, std::cout) == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-THz SDR link simulator and analyzer"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one or more scenario configs");
  run_cmd->add_option("config", run.configs, "Scenario config files")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Override the master seed");
  run_cmd->add_option("--trials", run.trials, "Override the trial count")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "Write <name>.csv and <name>.json into this directory");
  run_cmd->add_option("--dump-iq", run.dump_iq, "Write the TX frame and trial 0 RX frame as <prefix><name>_{tx,rx}.iq");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Search M, f_lo, f_if for a target carrier");
  plan_cmd->add_option("--target-hz", plan.target_hz, "Target RF frequency")->required();
  plan_cmd->add_option("--m-min", plan.m_min, "Smallest multiplier")->capture_default_str();
  plan_cmd->add_option("--m-max", plan.m_max, "Largest multiplier")->capture_default_str();
  plan_cmd->add_option("--lo-min", plan.lo_min, "LO grid start, Hz")->capture_default_str();
  plan_cmd->add_option("--lo-max", plan.lo_max, "LO grid end, Hz")->capture_default_str();
  plan_cmd->add_option("--lo-step", plan.lo_step, "LO grid step, Hz")->capture_default_str();
  plan_cmd->add_option("--if-min", plan.if_min, "IF grid start, Hz")->capture_default_str();
  plan_cmd->add_option("--if-max", plan.if_max, "IF grid end, Hz")->capture_default_str();
  plan_cmd->add_option("--if-step", plan.if_step, "IF grid step, Hz")->capture_default_str();

  AnalyzeArgs an;
  auto* an_cmd = app.add_subcommand("analyze", "Metrics of a capture against a reference recording");
  an_cmd->add_option("iq", an.iq, "Captured IQ recording")->required()->check(CLI::ExistingFile);
  an_cmd->add_option("--ref", an.ref, "Reference (transmitted) IQ recording")->required()->check(CLI::ExistingFile);
  an_cmd->add_option("--modulation", an.modulation, "qpsk, bpsk or 8psk")->capture_default_str();
  an_cmd->add_option("--rolloff", an.rolloff, "RRC rolloff")->capture_default_str();
  an_cmd->add_option("--span", an.span, "RRC span in symbols")->capture_default_str();
  an_cmd->add_option("--sps", an.sps, "Samples per symbol")->capture_default_str();
  an_cmd->add_option("--sync-offset", an.sync_offset, "Sample index of the first symbol centre");
  an_cmd->add_option("--symbols", an.symbols, "Analyse at most this many symbols");
  an_cmd->add_option("--mode", an.mode, "post or pre equalization")->capture_default_str();
  an_cmd->add_flag("--no-cfo", an.no_cfo, "Skip CFO estimation");
  an_cmd->add_option("--out", an.out, "Write the metrics as JSON (or CSV by extension)");

  SelftestArgs st;
  auto* st_cmd = app.add_subcommand("selftest", "Run the acceptance criteria");
  st_cmd->add_option("--config-dir", st.config_dir, "Shipped scenario configs")->capture_default_str();
  st_cmd->add_option("--work-dir", st.work_dir, "Scratch directory")->capture_default_str();
  st_cmd->add_option("--threads", st.threads, "Worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*plan_cmd) return cmd_plan(plan);
    if (*an_cmd) return cmd_analyze(an);
    if (*st_cmd) return cmd_selftest(st);
  } catch (const Error& e) {
    std::cerr << "thzlink: error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "thzlink: error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
