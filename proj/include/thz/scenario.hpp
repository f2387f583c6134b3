#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thz/channel.hpp"
#include "thz/config.hpp"
#include "thz/freqplan.hpp"
#include "thz/link.hpp"
#include "thz/metrics.hpp"
#include "thz/report.hpp"
#include "thz/rxdsp.hpp"
#include "thz/waveform.hpp"

namespace thz {

struct WaveformConfig {
  BitSource bits;
  ModulationScheme scheme = ModulationScheme::qpsk();
  PulseShape shape;
  double symbol_rate_hz = 1.6e6;

  std::size_t symbol_count() const { return bits.length_bits / std::size_t(scheme.bits_per_symbol()); }
  double sample_rate_hz() const { return symbol_rate_hz * double(shape.samples_per_symbol); }
};

struct CarrierConfig {
  ExtensionConfig extension;
  Sideband sideband = Sideband::upper;

  double carrier_hz() const;
};

enum class ChannelMode { los, reflector, alpha_mu };

struct ChannelConfig {
  ChannelMode mode = ChannelMode::reflector;
  ReflectorGeometry geometry;  // d_r_m is the reflector distance
  double d_los_m = 0.1524;
  std::vector<double> path_gains{1.0};  // relative to the geometric amplitude
  std::vector<double> path_delays_s;
  AlphaMuParams alpha_mu;

  /// LoS: xi + a(d_los). Reflector and alpha-mu: xi + k·a(d_R).
  double loss() const;
  /// Mean path amplitude |h| for a single-path profile: a(d_los) or k·a(d_R).
  double amplitude() const;
  MultipathProfile profile(double carrier_hz) const;
  void validate() const;
};

struct AnalysisConfig {
  ReceiverOptions receiver;
};

struct OutputConfig {
  std::string csv_path;
  std::string json_path;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  WaveformConfig waveform;
  CarrierConfig carrier;
  StageConfig stage;
  ChannelConfig channel;
  IqImpairmentSpec iq;
  AnalysisConfig analysis;
  OutputConfig output;

  /// Throws Errc::config naming the offending section.field.
  void validate() const;

  /// StageConfig with L taken from the channel.
  StageConfig effective_stage() const;
};

/// Builds a config from a parsed document. Unknown sections or keys and
/// out-of-range values are config errors carrying origin, field path and line.
ScenarioConfig parse_scenario(config::Document& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario_text(std::string_view text, const std::string& origin = "<string>");

struct TrialOutcome {
  std::complex<double> h;
  IqFrame rx;
  EqualizedBurst<double> burst;
  MetricReport metrics;
};

struct ScenarioResult {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<MetricReport> trials;
  AggregateReport aggregate;
  double predicted_snr_db = 0.0;  // closed-form additive chain at the mean |h|

  ReportData report_data() const;
};

/// Holds the trial-invariant parts of a scenario: bits, reference symbols and
/// the shaped transmit frame.
class ScenarioRunner {
 public:
  explicit ScenarioRunner(ScenarioConfig cfg);

  const ScenarioConfig& config() const { return cfg_; }
  const Signal<double>& reference() const { return reference_; }
  const IqFrame& tx() const { return tx_; }

  /// One full chain realisation seeded with seed ^ index.
  TrialOutcome trial(std::size_t index) const;

  /// All trials, `threads` workers (0 = hardware concurrency). Results are
  /// stored by trial index, so the worker count never changes the output.
  ScenarioResult run(unsigned threads = 0) const;

 private:
  ScenarioConfig cfg_;
  StageConfig stage_;
  double carrier_hz_ = 0.0;
  Signal<double> reference_;
  IqFrame tx_;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, unsigned threads = 0);

/// 10·log10 of the additive-chain SNR for the channel's mean amplitude.
double predicted_snr_db(const ScenarioConfig& cfg);

/// The four measurement segments with the fitted defaults.
std::vector<std::filesystem::path> shipped_configs(const std::filesystem::path& dir);

}  // namespace thz
