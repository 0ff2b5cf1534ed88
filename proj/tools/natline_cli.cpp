// natline: spontaneous-emission line shapes after pi-pulse excitation.
//
// Exit codes: 0 success, 2 invalid input, 3 numeric failure,
// 4 divergent-moment request.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "natline/analysis.hpp"
#include "natline/errors.hpp"
#include "natline/spectra.hpp"
#include "natline/units.hpp"

namespace {

using namespace natline;
using json = nlohmann::ordered_json;

constexpr int kInvalidInput = 2;
constexpr int kNumericFailure = 3;
constexpr int kDivergent = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw UsageError("cannot open output file " + path);
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;

  void write(const std::string& format, std::ostream& os,
             const json& meta = json::object()) const {
    if (format == "json") {
      json doc = meta;
      for (std::size_t c = 0; c < headers.size(); ++c) doc[headers[c]] = columns[c];
      os << doc.dump(2) << '\n';
      return;
    }
    for (std::size_t c = 0; c < headers.size(); ++c) {
      os << (c ? "," : "") << headers[c];
    }
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < columns.size(); ++c) {
        os << (c ? "," : "") << fmt(columns[c][r]);
      }
      os << '\n';
    }
  }
};

std::vector<double> log_of(const std::vector<double>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(std::log(x));
  return out;
}

std::size_t as_count(double value, const char* what) {
  if (!(value >= 2.0) || value != std::floor(value)) {
    throw UsageError(std::string(what) + " count must be an integer >= 2");
  }
  return static_cast<std::size_t>(value);
}

std::vector<double> grid_from(const std::vector<double>& spec) {
  const std::size_t count = as_count(spec.at(2), "grid");
  if (!(spec[0] < spec[1])) throw UsageError("grid min must be below grid max");
  return linear_grid(spec[0], spec[1], count);
}

Envelope envelope_from(const std::string& name, double omega) {
  if (name == "rect") return Envelope::rectangular(omega);
  if (name == "sine") return Envelope::sine(omega);
  return Envelope::from_file(name);
}

Normalization normalization_from(const std::string& name) {
  return name == "paper" ? Normalization::PaperApprox : Normalization::ExactUnit;
}

void warn(const std::optional<std::string>& message) {
  if (message) std::cerr << "warning: " << *message << '\n';
}

// Numeric-pipeline spectra cost grows with the square of the cutoff; they
// default to a tenth of the closed-form cutoff.
double default_cutoff_for(const std::string& source, const SystemParams& p) {
  const bool closed = source == "rect" || source == "lorentzian" || source == "mollow";
  return (closed ? 1e3 : 1e2) * std::max(p.omega, p.gamma);
}

SpectrumSource source_from(const std::string& name, const SystemParams& params,
                           double delta_max) {
  if (delta_max <= 0.0) delta_max = default_cutoff_for(name, params);
  if (name == "lorentzian") return lorentzian_source(params.gamma, delta_max);
  if (name == "mollow") {
    warn(params.weak_drive_warning());
    return mollow_source(params, delta_max);
  }
  warn(params.strong_pulse_warning());
  return envelope_source(envelope_from(name, params.omega), params,
                         Normalization::ExactUnit, delta_max);
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  double omega_ratio = 10.0;
  std::string envelope = "rect";
  std::vector<double> grid{-100.0, 100.0, 2001.0};
  std::string normalization = "exact";
  std::string format = "csv";
  std::string output = "-";
  double quad_tol = 1e-10;
  unsigned threads = 1;
};

int run_spectrum(const SpectrumArgs& a) {
  const auto params = SystemParams::make(a.omega_ratio);
  warn(params.strong_pulse_warning());
  const auto grid = grid_from(a.grid);
  const auto env = envelope_from(a.envelope, params.omega);
  const auto spec = build_spectrum(env, params, grid, normalization_from(a.normalization),
                                   a.quad_tol, a.threads);
  const auto lor = lorentzian_spectrum(grid, params.gamma);

  Table t;
  t.headers = {"delta_over_gamma", "S_lorentz", "S_envelope", "ln_S_lorentz", "ln_S_envelope"};
  t.columns = {grid, lor.density, spec.density, log_of(lor.density), log_of(spec.density)};
  json meta = {{"omega_over_gamma", params.omega},
               {"envelope", std::string(to_string(env.kind()))},
               {"normalization", std::string(to_string(spec.normalization))},
               {"normalization_constant", spec.constant}};
  Sink sink(a.output);
  t.write(a.format, sink.out(), meta);
  return 0;
}

int run_figure1(const SpectrumArgs& a) {
  const auto params = SystemParams::make(10.0);
  const auto grid = linear_grid(-100.0, 100.0, 2001);
  const auto mode = Normalization::PaperApprox;
  const auto rect = build_spectrum(Envelope::rectangular(params.omega), params, grid, mode,
                                   a.quad_tol, a.threads);
  const auto sine = build_spectrum(Envelope::sine(params.omega), params, grid, mode,
                                   a.quad_tol, a.threads);
  const auto lor = lorentzian_spectrum(grid, params.gamma);

  Table t;
  t.headers = {"delta_over_gamma", "S_lorentz", "S_rect", "S_sine",
               "ln_S_lorentz", "ln_S_rect", "ln_S_sine"};
  t.columns = {grid, lor.density, rect.density, sine.density,
               log_of(lor.density), log_of(rect.density), log_of(sine.density)};
  json meta = {{"omega_over_gamma", params.omega}, {"normalization", "paper"}};
  Sink sink(a.output);
  t.write(a.format, sink.out(), meta);
  return 0;
}

struct MomentsArgs {
  std::string source = "rect";
  double omega_ratio = 10.0;
  double delta_max = 0.0;
  double cutoff = 0.0;
  std::string output = "-";
};

int run_moments(const MomentsArgs& a) {
  const auto params = SystemParams::make(a.omega_ratio);
  const auto src = source_from(a.source, params, a.delta_max);
  MomentOptions opt;
  opt.tail_cutoff = a.cutoff;
  const auto r = moments(src, params, opt);

  json doc = {
      {"source", src.name},
      {"omega_over_gamma", params.omega},
      {"gamma", params.gamma},
      {"big_gamma", params.big_gamma()},
      {"delta_max", r.delta_max},
      {"total", r.total},
      {"mean_detuning", r.mean_detuning},
      {"dispersion", r.dispersion},
      {"dispersion_over_OmegaGamma", r.dispersion / (params.omega * params.big_gamma())},
      {"zeno_time", r.zeno_time},
      {"jump_time", r.jump_time},
      {"zeno_time_times_Gamma", r.zeno_time * params.big_gamma()},
      {"jump_time_times_Omega", r.jump_time * params.omega},
      {"tail_cutoff", r.tail_cutoff},
      {"tail_fraction", r.tail_fraction},
  };
  if (a.source == "mollow") doc["coherent_weight"] = mollow_coherent_weight(params);
  Sink sink(a.output);
  sink.out() << doc.dump(2) << '\n';
  return 0;
}

struct ScenarioArgs {
  double omega0 = 3.5e15;
  double p12 = 1.6e-20;
  double omega_ratio = 10.0;
  std::string rate = "1.3e7";
  std::string output = "-";
};

int run_scenario(const ScenarioArgs& a) {
  std::optional<double> rate;
  if (a.rate != "dipole") {
    double v = 0.0;
    const auto* end = a.rate.data() + a.rate.size();
    auto res = std::from_chars(a.rate.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
      throw UsageError("--rate expects a number or 'dipole'");
    }
    rate = v;
  }
  const auto s = units::make_scenario(a.omega0, a.p12, a.omega_ratio, rate);
  json doc = {
      {"omega0_rad_per_s", s.omega0},
      {"p12_g_cm_per_s", s.p12},
      {"omega_over_gamma", s.omega_over_gamma()},
      {"emission_rate_dipole_per_s", s.dipole_rate},
      {"emission_rate_per_s", s.big_gamma},
      {"gamma_per_s", s.gamma},
      {"rabi_frequency_rad_per_s", s.rabi},
      {"field_statvolt_per_cm", s.field},
      {"intensity_erg_per_s_cm2", s.intensity},
      {"intensity_mW_per_cm2", s.intensity_mw_per_cm2()},
      {"duration_s", s.duration},
      {"duration_ns", s.duration_ns()},
      {"tail_cutoff_over_gamma", s.omega_over_gamma()},
      {"lorentzian_tail_fraction", lorentzian_tail_fraction(s.omega_over_gamma())},
  };
  Sink sink(a.output);
  sink.out() << doc.dump(2) << '\n';
  return 0;
}

struct DecayArgs {
  std::string source = "lorentzian";
  double omega_ratio = 10.0;
  std::vector<double> times{0.0, 5.0, 51.0};
  double delta_max = 0.0;
  std::string format = "csv";
  std::string output = "-";
};

int run_decay(const DecayArgs& a) {
  const auto params = SystemParams::make(a.omega_ratio);
  const std::size_t count = as_count(a.times.at(2), "time grid");
  if (!(a.times[0] >= 0.0 && a.times[0] < a.times[1])) {
    throw UsageError("time grid needs 0 <= min < max");
  }
  const auto scaled = linear_grid(a.times[0], a.times[1], count);
  std::vector<double> t;
  t.reserve(scaled.size());
  for (double gt : scaled) t.push_back(gt / params.big_gamma());
  const auto src = source_from(a.source, params, a.delta_max);
  const auto phi = decay_law(src, t);

  Table out;
  out.headers = {"gamma_t", "phi"};
  out.columns = {scaled, phi};
  Sink sink(a.output);
  out.write(a.format, sink.out(),
            {{"source", src.name}, {"omega_over_gamma", params.omega}});
  return 0;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const DivergentMoment& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDivergent;
  } catch (const InvalidEnvelope& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const QuadratureFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const IntegrationFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spontaneous-emission line shapes of a two-level atom after pi-pulse excitation"};
  app.require_subcommand(1);

  const std::vector<std::string> formats{"csv", "json"};

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "Spectral density on a detuning grid");
  spectrum->add_option("--omega-ratio", spectrum_args.omega_ratio, "Omega/gamma")
      ->capture_default_str();
  spectrum->add_option("--envelope", spectrum_args.envelope,
                       "rect, sine, or path to a two-column `t omega` table")
      ->capture_default_str();
  spectrum->add_option("--grid", spectrum_args.grid, "min max count (units of gamma)")
      ->expected(3)
      ->capture_default_str();
  spectrum->add_option("--normalization", spectrum_args.normalization)
      ->check(CLI::IsMember({"exact", "paper"}))
      ->capture_default_str();
  spectrum->add_option("--format", spectrum_args.format)
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  spectrum->add_option("-o,--output", spectrum_args.output, "file, or - for stdout");
  spectrum->add_option("--quad-tol", spectrum_args.quad_tol)->capture_default_str();
  spectrum->add_option("--threads", spectrum_args.threads)->capture_default_str();

  SpectrumArgs figure_args;
  auto* figure1 = app.add_subcommand(
      "figure1", "Lorentzian, rectangular and sine spectra at Omega = 10 gamma");
  figure1->add_option("--format", figure_args.format)
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  figure1->add_option("-o,--output", figure_args.output, "file, or - for stdout");
  figure1->add_option("--threads", figure_args.threads)->capture_default_str();

  MomentsArgs moments_args;
  auto* moments_cmd = app.add_subcommand("moments", "Spectral moments, Zeno and jump times");
  moments_cmd->add_option("--source", moments_args.source,
                          "lorentzian, mollow, rect, sine, or envelope file path")
      ->capture_default_str();
  moments_cmd->add_option("--omega-ratio", moments_args.omega_ratio)->capture_default_str();
  moments_cmd->add_option("--delta-max", moments_args.delta_max,
                          "integration cutoff in units of gamma (0: automatic)");
  moments_cmd->add_option("--cutoff", moments_args.cutoff,
                          "tail-fraction cutoff in units of gamma (0: Omega)");
  moments_cmd->add_option("-o,--output", moments_args.output);

  ScenarioArgs scenario_args;
  auto* scenario = app.add_subcommand("scenario", "Laboratory units for a rectangular pi pulse");
  scenario->add_option("--omega0", scenario_args.omega0, "transition frequency [rad/s]")
      ->capture_default_str();
  scenario->add_option("--p12", scenario_args.p12, "momentum matrix element [g cm/s]")
      ->capture_default_str();
  scenario->add_option("--omega-ratio", scenario_args.omega_ratio)->capture_default_str();
  scenario->add_option("--rate", scenario_args.rate,
                       "emission rate fixing gamma [1/s], or 'dipole'")
      ->capture_default_str();
  scenario->add_option("-o,--output", scenario_args.output);

  DecayArgs decay_args;
  auto* decay = app.add_subcommand("decay", "Survival probability from the energy distribution");
  decay->add_option("--source", decay_args.source)->capture_default_str();
  decay->add_option("--omega-ratio", decay_args.omega_ratio)->capture_default_str();
  decay->add_option("--times", decay_args.times, "min max count in units of Gamma t")
      ->expected(3)
      ->capture_default_str();
  decay->add_option("--delta-max", decay_args.delta_max);
  decay->add_option("--format", decay_args.format)
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  decay->add_option("-o,--output", decay_args.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInvalidInput;
  }

  if (*spectrum) return guarded([&] { return run_spectrum(spectrum_args); });
  if (*figure1) return guarded([&] { return run_figure1(figure_args); });
  if (*moments_cmd) return guarded([&] { return run_moments(moments_args); });
  if (*scenario) return guarded([&] { return run_scenario(scenario_args); });
  if (*decay) return guarded([&] { return run_decay(decay_args); });
  return kInvalidInput;
}
