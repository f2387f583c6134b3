#include "thz/scenario.hpp"

#include <atomic>
#include <mutex>
#include <set>
#include <thread>

namespace thz {

double CarrierConfig::carrier_hz() const {
  const SidebandPair f = operating_frequencies(extension);
  return sideband == Sideband::upper ? f.upper : f.lower;
}

double ChannelConfig::loss() const {
  if (mode == ChannelMode::los) {
    ReflectorGeometry g = geometry;
    g.d_r_m = d_los_m;
    g.k_diff = 1.0;
    return path_loss(g);
  }
  return path_loss(geometry);
}

double ChannelConfig::amplitude() const {
  if (mode == ChannelMode::los) {
    ReflectorGeometry g = geometry;
    g.d_r_m = d_los_m;
    return g.propagation_loss();
  }
  return geometry.k_diff * geometry.propagation_loss();
}

MultipathProfile ChannelConfig::profile(double carrier_hz) const {
  MultipathProfile p;
  const double a = mode == ChannelMode::los ? amplitude() : geometry.propagation_loss();
  for (double g : path_gains) p.amplitudes.push_back(a * g);
  p.delays_s = path_delays_s;
  p.k = mode == ChannelMode::los ? 1.0 : geometry.k_diff;
  p.carrier_hz = carrier_hz;
  return p;
}

void ChannelConfig::validate() const {
  if (!(d_los_m > 0.0)) throw Error(Errc::geometry, "d_los must be > 0");
  geometry.validate();
  profile(0.0).validate();
  if (mode == ChannelMode::alpha_mu) alpha_mu.validate();
  (void)loss();
}

namespace {

// Runs `f`, rewrapping any library error as a config error under `path`.
template <typename F>
void checked(const std::string& path, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == Errc::config) throw;
    throw Error(Errc::config, path + ": " + e.what());
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (trials < 1) throw Error(Errc::config, "scenario.trials: must be >= 1");
  checked("waveform", [&] {
    waveform.shape.validate();
    if (!(waveform.symbol_rate_hz > 0.0)) throw Error(Errc::parameter, "symbol_rate_hz must be > 0");
    if (waveform.bits.length_bits % std::size_t(waveform.scheme.bits_per_symbol()) != 0)
      throw Error(Errc::length, "length_bits must be a multiple of " +
                                    std::to_string(waveform.scheme.bits_per_symbol()) + " for " +
                                    waveform.scheme.name());
    if (waveform.symbol_count() < 64) throw Error(Errc::insufficient_data, "need at least 64 symbols per trial");
    if (waveform.bits.length_bits > prbs_period(waveform.bits.generator))
      throw Error(Errc::length, "length_bits exceeds the PRBS period");
  });
  checked("carrier", [&] { (void)carrier.carrier_hz(); });
  checked("stage", [&] { stage.validate(); });
  checked("channel", [&] { channel.validate(); });
  checked("impairments", [&] {
    if (!std::isfinite(iq.gain_imbalance_db) || !std::isfinite(iq.skew_deg) || !std::isfinite(iq.droop_db_total) ||
        !std::isfinite(iq.cfo_hz) || !std::isfinite(iq.phase_offset_deg))
      throw Error(Errc::parameter, "values must be finite");
    if (std::abs(iq.skew_deg) >= 90.0) throw Error(Errc::parameter, "skew_deg must lie in (-90, 90)");
  });
}

StageConfig ScenarioConfig::effective_stage() const {
  StageConfig s = stage;
  s.loss = channel.loss();
  return s;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

double required_positive(config::Document& doc, const std::string& s, const std::string& k, double fallback) {
  const double v = doc.number(s, k).value_or(fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(Errc::config, doc.where(s, k) + ": must be a finite value > 0");
  return v;
}

double nonnegative(config::Document& doc, const std::string& s, const std::string& k, double fallback) {
  const double v = doc.number(s, k).value_or(fallback);
  if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::config, doc.where(s, k) + ": must be a finite value >= 0");
  return v;
}

std::size_t positive_count(config::Document& doc, const std::string& s, const std::string& k, std::size_t fallback) {
  const std::uint64_t v = doc.unsigned_integer(s, k).value_or(fallback);
  if (v == 0) throw Error(Errc::config, doc.where(s, k) + ": must be >= 1");
  return static_cast<std::size_t>(v);
}

template <typename F>
auto keyed(config::Document& doc, const std::string& s, const std::string& k, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::config) throw;
    throw Error(Errc::config, doc.where(s, k) + ": " + e.what());
  }
}

}  // namespace

ScenarioConfig parse_scenario(config::Document& doc) {
  static const std::set<std::string> known{"scenario", "waveform",    "carrier",  "stage",
                                           "channel",  "impairments", "analysis", "output"};
  ScenarioConfig cfg;

  // scenario
  cfg.name = doc.string("scenario", "name").value_or(cfg.name);
  cfg.trials = positive_count(doc, "scenario", "trials", cfg.trials);
  cfg.seed = doc.unsigned_integer("scenario", "seed").value_or(cfg.seed);

  // waveform
  {
    auto& w = cfg.waveform;
    if (auto s = doc.string("waveform", "prbs"))
      w.bits.generator = keyed(doc, "waveform", "prbs", [&] { return parse_prbs(*s); });
    if (auto seed = doc.unsigned_integer("waveform", "prbs_seed")) {
      if (*seed > 0xFFFFFFFFull) throw Error(Errc::config, doc.where("waveform", "prbs_seed") + ": exceeds 32 bits");
      w.bits.seed = static_cast<std::uint32_t>(*seed);
    }
    w.bits.length_bits = positive_count(doc, "waveform", "length_bits", w.bits.length_bits);
    if (auto m = doc.string("waveform", "modulation"))
      w.scheme = keyed(doc, "waveform", "modulation", [&] { return ModulationScheme::parse(*m); });
    w.shape.rolloff = required_positive(doc, "waveform", "rolloff", w.shape.rolloff);
    w.shape.span_symbols = positive_count(doc, "waveform", "span_symbols", w.shape.span_symbols);
    w.shape.samples_per_symbol = positive_count(doc, "waveform", "samples_per_symbol", w.shape.samples_per_symbol);
    w.symbol_rate_hz = required_positive(doc, "waveform", "symbol_rate_hz", w.symbol_rate_hz);
    // Bit source checks happen here so the diagnostic can name the key.
    keyed(doc, "waveform", "prbs_seed", [&] {
      BitSource probe = w.bits;
      probe.length_bits = 1;
      (void)generate_bits(probe);
      return 0;
    });
  }

  // carrier
  {
    auto& e = cfg.carrier.extension;
    if (auto m = doc.integer("carrier", "multiplier")) e.multiplier = int(*m);
    if (auto m = doc.integer("carrier", "delta_multiplier")) e.delta_multiplier = int(*m);
    e.f_lo_hz = required_positive(doc, "carrier", "f_lo_hz", e.f_lo_hz);
    e.delta_f_lo_hz = nonnegative(doc, "carrier", "delta_f_lo_hz", e.delta_f_lo_hz);
    e.f_if_hz = nonnegative(doc, "carrier", "f_if_hz", e.f_if_hz);
    e.delta_f_if_hz = nonnegative(doc, "carrier", "delta_f_if_hz", e.delta_f_if_hz);
    if (auto eps = doc.number("carrier", "epsilon")) e.epsilon = *eps;
    if (auto sb = doc.string("carrier", "sideband")) {
      if (*sb == "upper") cfg.carrier.sideband = Sideband::upper;
      else if (*sb == "lower") cfg.carrier.sideband = Sideband::lower;
      else throw Error(Errc::config, doc.where("carrier", "sideband") + ": expected \"upper\" or \"lower\"");
    }
  }

  // stage
  {
    auto& s = cfg.stage;
    s.p_s_dbm = doc.number("stage", "p_s_dbm").value_or(s.p_s_dbm);
    s.p_t_dbm = doc.number("stage", "p_t_dbm").value_or(s.p_t_dbm);
    s.insertion_loss_db = nonnegative(doc, "stage", "insertion_loss_db", s.insertion_loss_db);
    s.n0 = nonnegative(doc, "stage", "n0_mw", s.n0);
    s.phase_walk_linewidth_hz = nonnegative(doc, "stage", "phase_walk_linewidth_hz", s.phase_walk_linewidth_hz);
    s.noise.kappa_I = nonnegative(doc, "stage", "kappa_i", s.noise.kappa_I);
    s.noise.kappa_Fr = nonnegative(doc, "stage", "kappa_f_r", s.noise.kappa_Fr);
    s.noise.kappa_Ft = nonnegative(doc, "stage", "kappa_f_t", s.noise.kappa_Ft);
    s.noise.kappa_F2r = nonnegative(doc, "stage", "kappa_f2_r", s.noise.kappa_F2r);
    s.antenna.gain_dbi = doc.number("stage", "antenna_gain_dbi").value_or(s.antenna.gain_dbi);
    s.antenna.beamwidth_e_deg = doc.number("stage", "beamwidth_e_deg").value_or(s.antenna.beamwidth_e_deg);
    s.antenna.beamwidth_h_deg = doc.number("stage", "beamwidth_h_deg").value_or(s.antenna.beamwidth_h_deg);
    s.antenna.aperture_efficiency = doc.number("stage", "aperture_efficiency").value_or(s.antenna.aperture_efficiency);
    if (!std::isfinite(s.p_s_dbm)) throw Error(Errc::config, doc.where("stage", "p_s_dbm") + ": must be finite");
    if (!std::isfinite(s.p_t_dbm)) throw Error(Errc::config, doc.where("stage", "p_t_dbm") + ": must be finite");
  }

  // channel
  {
    auto& c = cfg.channel;
    if (auto m = doc.string("channel", "mode")) {
      if (*m == "los") c.mode = ChannelMode::los;
      else if (*m == "reflector") c.mode = ChannelMode::reflector;
      else if (*m == "alpha_mu") c.mode = ChannelMode::alpha_mu;
      else throw Error(Errc::config, doc.where("channel", "mode") + ": expected \"los\", \"reflector\" or \"alpha_mu\"");
    }
    if (c.mode == ChannelMode::los && doc.has("channel", "d_r_cm"))
      throw Error(Errc::config, doc.where("channel", "d_r_cm") + ": not used in los mode, set d_los_cm");
    if (c.mode != ChannelMode::los && doc.has("channel", "d_los_cm"))
      throw Error(Errc::config, doc.where("channel", "d_los_cm") + ": only valid in los mode");
    if (c.mode != ChannelMode::alpha_mu)
      for (const char* k : {"alpha", "mu", "beta"})
        if (doc.has("channel", k)) throw Error(Errc::config, doc.where("channel", k) + ": only valid in alpha_mu mode");

    c.geometry.d_r_m = required_positive(doc, "channel", "d_r_cm", c.geometry.d_r_m * 100.0) / 100.0;
    c.d_los_m = required_positive(doc, "channel", "d_los_cm", c.d_los_m * 100.0) / 100.0;
    c.geometry.xi = nonnegative(doc, "channel", "xi", c.geometry.xi);
    c.geometry.k_diff = nonnegative(doc, "channel", "k_diff", c.geometry.k_diff);
    if (c.geometry.k_diff > 1.0) throw Error(Errc::config, doc.where("channel", "k_diff") + ": must lie in [0, 1]");
    c.geometry.eta = nonnegative(doc, "channel", "eta", c.geometry.eta);
    c.geometry.a_ref = required_positive(doc, "channel", "a_ref", c.geometry.a_ref);
    c.geometry.d_ref_m = required_positive(doc, "channel", "d_ref_cm", c.geometry.d_ref_m * 100.0) / 100.0;
    if (auto g = doc.array("channel", "path_gains")) {
      if (g->empty()) throw Error(Errc::config, doc.where("channel", "path_gains") + ": at least one path required");
      c.path_gains = *g;
    }
    if (auto d = doc.array("channel", "path_delays_ps")) {
      c.path_delays_s.clear();
      for (double v : *d) c.path_delays_s.push_back(v * 1e-12);
      if (c.path_delays_s.size() != c.path_gains.size())
        throw Error(Errc::config, doc.where("channel", "path_delays_ps") + ": length differs from path_gains");
    }
    c.alpha_mu.alpha = required_positive(doc, "channel", "alpha", c.alpha_mu.alpha);
    c.alpha_mu.mu = required_positive(doc, "channel", "mu", c.alpha_mu.mu);
    c.alpha_mu.beta = required_positive(doc, "channel", "beta", c.alpha_mu.beta);
  }

  // impairments
  {
    auto& q = cfg.iq;
    q.gain_imbalance_db = doc.number("impairments", "gain_imbalance_db").value_or(0.0);
    q.skew_deg = doc.number("impairments", "skew_deg").value_or(0.0);
    q.droop_db_total = doc.number("impairments", "droop_db_total").value_or(0.0);
    q.cfo_hz = doc.number("impairments", "cfo_hz").value_or(0.0);
    q.phase_offset_deg = doc.number("impairments", "phase_offset_deg").value_or(0.0);
  }

  // analysis
  {
    auto& r = cfg.analysis.receiver;
    if (auto m = doc.string("analysis", "mode")) {
      if (*m == "post") r.stage = MetricStage::post_equalization;
      else if (*m == "pre") r.stage = MetricStage::pre_equalization;
      else throw Error(Errc::config, doc.where("analysis", "mode") + ": expected \"post\" or \"pre\"");
    }
    r.correct_cfo = doc.boolean("analysis", "correct_cfo").value_or(r.correct_cfo);
    r.equalizer.decision_directed = doc.boolean("analysis", "decision_directed").value_or(false);
  }

  // output
  cfg.output.csv_path = doc.string("output", "csv").value_or("");
  cfg.output.json_path = doc.string("output", "json").value_or("");

  for (const auto& section : doc.sections())
    if (!known.count(section)) throw Error(Errc::config, doc.origin() + ": unknown section [" + section + "]");
  doc.reject_unread();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  config::Document doc = config::Document::load(path);
  return parse_scenario(doc);
}

ScenarioConfig parse_scenario_text(std::string_view text, const std::string& origin) {
  config::Document doc = config::Document::parse(text, origin);
  return parse_scenario(doc);
}

// ---------------------------------------------------------------------------
// Running

ScenarioRunner::ScenarioRunner(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  stage_ = cfg_.effective_stage();
  carrier_hz_ = cfg_.carrier.carrier_hz();
  const auto bits = generate_bits(cfg_.waveform.bits);
  reference_ = map_symbols<double>(bits, cfg_.waveform.scheme);
  tx_ = pulse_shape(reference_, cfg_.waveform.shape, cfg_.waveform.symbol_rate_hz, carrier_hz_);
}

TrialOutcome ScenarioRunner::trial(std::size_t index) const {
  Rng rng(cfg_.seed ^ std::uint64_t(index));
  TrialOutcome out;

  const MultipathProfile profile = cfg_.channel.profile(carrier_hz_);
  const Propagation prop = cfg_.channel.mode == ChannelMode::los ? Propagation::los : Propagation::nlos;
  out.h = channel_coefficient(profile, prop, rng);
  if (cfg_.channel.mode == ChannelMode::alpha_mu) out.h *= alpha_mu_sample(cfg_.channel.alpha_mu, 1, rng)[0];

  out.rx = simulate_end_to_end(tx_, stage_, out.h, cfg_.iq, rng);
  out.burst = receive(out.rx, cfg_.waveform.shape, cfg_.waveform.scheme, reference_, cfg_.analysis.receiver);

  auto pair = ConstellationPair<double>::from_complex(reference_, out.burst.symbols_measured);
  pair.fc_ref_hz = carrier_hz_;
  pair.fc_meas_hz = carrier_hz_ + out.burst.cfo_hat_hz;
  out.metrics = compute_metrics(pair);
  return out;
}

ScenarioResult ScenarioRunner::run(unsigned threads) const {
  ScenarioResult result;
  result.name = cfg_.name;
  result.seed = cfg_.seed;
  result.trials.resize(cfg_.trials);
  result.predicted_snr_db = predicted_snr_db(cfg_);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = unsigned(std::min<std::size_t>(threads, cfg_.trials));

  if (threads <= 1) {
    for (std::size_t t = 0; t < cfg_.trials; ++t) result.trials[t] = trial(t).metrics;
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < cfg_.trials;) {
          try {
            result.trials[t] = trial(t).metrics;
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = cfg_.trials;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  result.aggregate = rms_aggregate(result.trials);
  return result;
}

ReportData ScenarioResult::report_data() const {
  return ReportData{name, seed, trials, aggregate, predicted_snr_db};
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, unsigned threads) {
  return ScenarioRunner(cfg).run(threads);
}

double predicted_snr_db(const ScenarioConfig& cfg) {
  double amp2 = 0.0;
  const MultipathProfile p = cfg.channel.profile(cfg.carrier.carrier_hz());
  amp2 = p.mean_power_gain();
  if (cfg.channel.mode == ChannelMode::alpha_mu) {
    // E[R²] for the alpha-mu envelope.
    const auto& am = cfg.channel.alpha_mu;
    amp2 *= am.beta * am.beta * std::exp(std::lgamma(am.mu + 2.0 / am.alpha) - std::lgamma(am.mu)) /
            std::pow(am.mu, 2.0 / am.alpha);
  }
  return linear_to_db(snr_cascade(cfg.effective_stage(), std::sqrt(amp2)));
}

std::vector<std::filesystem::path> shipped_configs(const std::filesystem::path& dir) {
  return {dir / "los.toml", dir / "reflector_d.toml", dir / "reflector_2d.toml", dir / "reflector_3d.toml"};
}

}  // namespace thz
