#include "qpmcli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "qpmsim/biphoton.hpp"
#include "qpmsim/compensation.hpp"
#include "qpmsim/csv.hpp"
#include "qpmsim/errors.hpp"
#include "qpmsim/version.hpp"

namespace qpm::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const json& require(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key)) throw ConfigError(ctx + ": missing field '" + key + "'");
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_number()) throw ConfigError(ctx + ": '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& ctx) {
  return obj.contains(key) ? number(obj, key, ctx) : fallback;
}

std::size_t count(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ConfigError(ctx + ": '" + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::string text(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_string()) throw ConfigError(ctx + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

const json& object(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_object()) throw ConfigError(ctx + ": '" + key + "' must be an object");
  return v;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& ctx) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(ctx + ": unknown field '" + key + "'");
    }
  }
}

Output parse_output(const std::string& s) {
  static const std::map<std::string, Output> table{
      {"tuning_curve", Output::tuning_curve},     {"spectrum", Output::spectrum},
      {"detected_spectrum", Output::detected_spectrum}, {"spectral_phase", Output::spectral_phase},
      {"sfg_trace", Output::sfg_trace},           {"summary", Output::summary}};
  auto it = table.find(s);
  if (it == table.end()) throw ConfigError("outputs: unknown output '" + s + "'");
  return it->second;
}

std::string scheme_name(SfgScheme s) {
  return s == SfgScheme::noncollinear ? "noncollinear" : "collinear";
}

BandSpec parse_band(const json& b) {
  const std::string ctx = "band";
  reject_unknown(b, {"lambda_min_um", "lambda_max_um", "points"}, ctx);
  BandSpec band;
  band.lambda_min_um = number(b, "lambda_min_um", ctx);
  band.lambda_max_um = number(b, "lambda_max_um", ctx);
  if (b.contains("points")) band.points = count(b, "points", ctx);
  if (!(band.lambda_min_um > 0.0 && band.lambda_min_um < band.lambda_max_um)) {
    throw ConfigError("band: need 0 < lambda_min_um < lambda_max_um");
  }
  return band;
}

CompensatorSpec parse_compensator(const json& c, std::size_t index) {
  std::string ctx = "compensators[" + std::to_string(index) + "]";
  if (!c.is_object()) throw ConfigError(ctx + ": must be an object");
  CompensatorSpec spec;
  spec.model = text(c, "model", ctx);
  spec.label = c.contains("label") ? text(c, "label", ctx) : spec.model;
  spec.params = c;
  ctx += " (" + spec.label + ")";
  if (spec.model == "identity" || spec.model == "perfect") {
    reject_unknown(c, {"model", "label"}, ctx);
  } else if (spec.model == "quadratic") {
    reject_unknown(c, {"model", "label", "gdd_fs2", "center_wavelength_um"}, ctx);
    number(c, "gdd_fs2", ctx);
    if (c.contains("center_wavelength_um") && !(number(c, "center_wavelength_um", ctx) > 0.0)) {
      throw ConfigError(ctx + ": 'center_wavelength_um' must be positive");
    }
  } else if (spec.model == "prism_pair") {
    reject_unknown(c,
                   {"model", "label", "glass", "separation_mm", "design_wavelength_um",
                    "apex_angle_deg", "incidence", "insertion_mm", "passes", "tune",
                    "tune_range_mm", "target_gdd_fs2"},
                   ctx);
    text(c, "glass", ctx);
    if (c.contains("tune")) {
      const auto tune = text(c, "tune", ctx);
      if (tune != "cancel_gdd" && tune != "max_peak") {
        throw ConfigError(ctx + ": 'tune' must be 'cancel_gdd' or 'max_peak'");
      }
    }
    if (c.contains("incidence")) {
      const auto inc = text(c, "incidence", ctx);
      if (inc != "brewster" && inc != "minimum_deviation") {
        throw ConfigError(ctx + ": 'incidence' must be 'brewster' or 'minimum_deviation'");
      }
    }
    if (c.contains("passes") && !(c["passes"].is_number_integer() && c["passes"].get<int>() >= 1)) {
      throw ConfigError(ctx + ": 'passes' must be a positive integer");
    }
    if (c.contains("tune_range_mm")) {
      const auto& r = c["tune_range_mm"];
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number() ||
          !(r[0].get<double>() > 0.0 && r[0].get<double>() < r[1].get<double>())) {
        throw ConfigError(ctx + ": 'tune_range_mm' must be [min, max] with 0 < min < max");
      }
    }
  } else {
    throw ConfigError(ctx + ": unknown compensator model '" + spec.model + "'");
  }
  return spec;
}

TuningSpec parse_tuning(const json& t) {
  const std::string ctx = "tuning_curve";
  reject_unknown(t,
                 {"lambda_min_um", "lambda_max_um", "lambda_points", "phi_min_deg", "phi_max_deg",
                  "phi_points", "quantity"},
                 ctx);
  TuningSpec s;
  s.lambda_min_um = number(t, "lambda_min_um", ctx);
  s.lambda_max_um = number(t, "lambda_max_um", ctx);
  s.lambda_points = count(t, "lambda_points", ctx);
  s.phi_min_deg = number(t, "phi_min_deg", ctx);
  s.phi_max_deg = number(t, "phi_max_deg", ctx);
  s.phi_points = count(t, "phi_points", ctx);
  if (t.contains("quantity")) {
    const auto q = text(t, "quantity", ctx);
    if (q == "photon_number") s.quantity = TuningQuantity::photon_number;
    else if (q == "phase_mismatch") s.quantity = TuningQuantity::phase_mismatch;
    else throw ConfigError(ctx + ": unknown quantity '" + q + "'");
  }
  if (!(s.lambda_min_um > 0.0 && s.lambda_min_um < s.lambda_max_um) || s.lambda_points < 2) {
    throw ConfigError(ctx + ": bad wavelength axis");
  }
  if (!(s.phi_min_deg < s.phi_max_deg) || s.phi_points < 2) {
    throw ConfigError(ctx + ": bad angle axis");
  }
  return s;
}

InstrumentSpec parse_instrument(const json& in, const fs::path& base_dir) {
  const std::string ctx = "instrument";
  reject_unknown(in, {"acceptance", "wavelength_nm", "resolution", "detector", "coupling"}, ctx);
  InstrumentSpec s;
  if (in.contains("acceptance")) {
    const json& a = object(in, "acceptance", ctx);
    reject_unknown(a, {"phi_min_deg", "phi_max_deg", "samples"}, ctx + ".acceptance");
    s.window.phi_min_deg = number(a, "phi_min_deg", ctx + ".acceptance");
    s.window.phi_max_deg = number(a, "phi_max_deg", ctx + ".acceptance");
    if (a.contains("samples")) s.window.samples = count(a, "samples", ctx + ".acceptance");
  }
  s.window.validate();
  const json& w = object(in, "wavelength_nm", ctx);
  reject_unknown(w, {"start", "stop", "step"}, ctx + ".wavelength_nm");
  s.start_nm = number(w, "start", ctx + ".wavelength_nm");
  s.stop_nm = number(w, "stop", ctx + ".wavelength_nm");
  s.step_nm = number(w, "step", ctx + ".wavelength_nm");
  if (!(s.start_nm > 0.0 && s.start_nm < s.stop_nm && s.step_nm > 0.0)) {
    throw ConfigError(ctx + ".wavelength_nm: need 0 < start < stop and step > 0");
  }
  if (in.contains("resolution")) {
    const json& r = object(in, "resolution", ctx);
    const std::string rctx = ctx + ".resolution";
    reject_unknown(r, {"mode", "delta_lambda_nm", "below_nm", "above_nm", "split_nm"}, rctx);
    const std::string mode = r.contains("mode") ? text(r, "mode", rctx) : "constant";
    if (mode == "constant") s.resolution.mode = BandpassResolution::Mode::constant;
    else if (mode == "two_segment") s.resolution.mode = BandpassResolution::Mode::two_segment;
    else throw ConfigError(rctx + ": unknown mode '" + mode + "'");
    s.resolution.delta_lambda_nm = number_or(r, "delta_lambda_nm", s.resolution.delta_lambda_nm, rctx);
    s.resolution.below_nm = number_or(r, "below_nm", s.resolution.below_nm, rctx);
    s.resolution.above_nm = number_or(r, "above_nm", s.resolution.above_nm, rctx);
    s.resolution.split_nm = number_or(r, "split_nm", s.resolution.split_nm, rctx);
    if (!(s.resolution.delta_lambda_nm > 0.0 && s.resolution.below_nm > 0.0 &&
          s.resolution.above_nm > 0.0)) {
      throw ConfigError(rctx + ": resolutions must be positive");
    }
  }
  if (in.contains("detector")) {
    const json& d = object(in, "detector", ctx);
    reject_unknown(d, {"file", "interpolation"}, ctx + ".detector");
    fs::path file = text(d, "file", ctx + ".detector");
    if (file.is_relative()) {
      if (fs::exists(base_dir / file)) file = base_dir / file;
      else file = data_dir() / file;
    }
    s.detector_file = file;
    if (d.contains("interpolation")) {
      const auto mode = text(d, "interpolation", ctx + ".detector");
      if (mode == "log_linear") s.interpolation = DetectorModel::Interpolation::log_linear;
      else if (mode == "linear") s.interpolation = DetectorModel::Interpolation::linear;
      else throw ConfigError(ctx + ".detector: unknown interpolation '" + mode + "'");
    }
  }
  s.coupling = number_or(in, "coupling", 1.0, ctx);
  if (!(s.coupling > 0.0 && s.coupling <= 1.0)) throw ConfigError(ctx + ": coupling must be in (0, 1]");
  return s;
}

// --- running -------------------------------------------------------------

struct Prepared {
  MediaLibrary media;
  QpmDevice device;
};

Prepared prepare(const Scenario& sc) {
  fs::path media_path = data_dir() / "media.json";
  if (sc.media_file) media_path = sc.media_file->is_relative() ? sc.base_dir / *sc.media_file : *sc.media_file;
  MediaLibrary media = MediaLibrary::from_file(media_path);
  QpmDevice device = load_device(sc.device, media);
  return {std::move(media), std::move(device)};
}

void stamp(CsvTable& table, const Scenario& sc) {
  table.comment(std::string("qpmsim ") + version());
  table.comment("scenario", sc.name);
  table.comment("device", sc.device.dump());
  table.comment("phi_deg", format_number(sc.geometry.phi_deg));
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  return UniformGrid::spanning(a, b, n).samples();
}

std::string fmt(double x) { return format_number(x); }

/// Samples of a trace worth writing: the smallest centred window holding every value above 1e-6.
std::pair<std::size_t, std::size_t> trace_window(const CorrelationTrace& t) {
  const std::size_t n = t.values.size();
  std::size_t first = n;
  std::size_t last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.values[i] > 1e-6) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == n) return {0, n};
  const std::size_t mid = n / 2;
  const std::size_t half = std::max(mid - std::min(first, mid), last - std::min(last, mid)) + 16;
  return {mid > half ? mid - half : 0, std::min(n, mid + half + 1)};
}

std::string gnuplot_script(const std::string& csv, const std::string& x, const std::string& y,
                           const std::string& title, bool logy) {
  std::ostringstream gp;
  const std::string png = csv.substr(0, csv.rfind('.')) + ".png";
  gp << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set terminal pngcairo size 1000,640\n"
     << "set output '" << png << "'\n"
     << "set title '" << title << "'\n"
     << "set key autotitle columnhead\n";
  if (logy) gp << "set logscale y\n";
  gp << "plot '" << csv << "' using " << x << ":" << y << " with lines\n";
  return gp.str();
}

Compensator build_compensator(const CompensatorSpec& spec, const Prepared& p,
                              const SpectralAmplitude& amp, std::optional<double> device_gdd,
                              std::size_t pad, RunResult& result) {
  const json& c = spec.params;
  const std::string ctx = "compensator '" + spec.label + "'";
  Compensator comp = Compensator::identity();
  if (spec.model == "perfect") {
    comp = Compensator::perfect(amp);
  } else if (spec.model == "quadratic") {
    const double wc = c.contains("center_wavelength_um")
                          ? omega_from_wavelength(c["center_wavelength_um"].get<double>())
                          : p.device.degenerate_omega();
    comp = Compensator::quadratic(c["gdd_fs2"].get<double>(), wc);
  } else if (spec.model == "prism_pair") {
    PrismPairModel prism;
    prism.glass = p.media.at(c["glass"].get<std::string>());
    prism.separation_mm = number_or(c, "separation_mm", prism.separation_mm, ctx);
    prism.design_wavelength_um = number_or(c, "design_wavelength_um", prism.design_wavelength_um, ctx);
    if (c.contains("apex_angle_deg")) prism.apex_angle_rad = number(c, "apex_angle_deg", ctx) * kDegree;
    if (c.contains("incidence") && c["incidence"] == "minimum_deviation") {
      prism.incidence = PrismIncidence::minimum_deviation;
    }
    prism.insertion_mm = number_or(c, "insertion_mm", prism.insertion_mm, ctx);
    if (c.contains("passes")) prism.passes = c["passes"].get<int>();
    prism.temperature_k = p.device.temperature_k();
    const double wc = p.device.degenerate_omega();
    const std::string tune = c.value("tune", std::string{});
    if (tune == "cancel_gdd") {
      double target = 0.0;
      if (c.contains("target_gdd_fs2")) {
        target = number(c, "target_gdd_fs2", ctx);
      } else if (device_gdd) {
        target = -*device_gdd;
      } else {
        throw DomainError(ctx + ": device GDD unavailable, set 'target_gdd_fs2'");
      }
      prism = tune_separation_for_gdd(prism, target, wc);
    } else if (tune == "max_peak") {
      double lo = 100.0;
      double hi = 3000.0;
      if (c.contains("tune_range_mm")) {
        lo = c["tune_range_mm"][0].get<double>();
        hi = c["tune_range_mm"][1].get<double>();
      }
      prism = tune_separation_for_peak(prism, amp, lo, hi, pad);
    }
    const double gdd = prism_pair_gdd(prism, wc);
    result.summary.push_back({"prism_separation_mm." + spec.label, fmt(prism.separation_mm)});
    result.summary.push_back({"prism_gdd_fs2." + spec.label, fmt(gdd)});
    if (device_gdd) result.summary.push_back({"residual_gdd_fs2." + spec.label, fmt(*device_gdd + gdd)});
    comp = Compensator::prism_pair(prism);
  }
  comp.label = spec.label;
  return comp;
}

void run_spectrum(const Scenario& sc, const Prepared& p, const RunOptions& opt, RunResult& result) {
  const BandSpec& band = *sc.band;
  const std::size_t points = opt.points.value_or(band.points);
  if (points < 16) throw ConfigError("spectral grid needs at least 16 points");
  // both photons of each band edge must lie inside the Sellmeier range
  for (const auto& [key, lambda] : {std::pair{"band.lambda_min_um", band.lambda_min_um},
                                    std::pair{"band.lambda_max_um", band.lambda_max_um}}) {
    const double omega = omega_from_wavelength(lambda);
    const auto& range = p.device.medium().valid_range;
    const double idler = wavelength_from_omega(p.device.pump_omega() - omega);
    if (!(omega < p.device.pump_omega()) || !range.contains(lambda) || !range.contains(idler)) {
      std::ostringstream msg;
      msg << key << " = " << lambda << " um: signal or idler (" << idler << " um) outside ["
          << range.min_um << ", " << range.max_um << "] um of '" << p.device.medium().name << "'";
      throw DomainError(msg.str());
    }
  }
  const SpectralAmplitude amp =
      spectrum_scan(p.device, band.lambda_min_um, band.lambda_max_um, points, sc.geometry, sc.kappa);
  auto& sum = result.summary;
  sum.push_back({"spectral_points", std::to_string(points)});
  if (amp.flagged() > 0) {
    result.warnings.push_back(std::to_string(amp.flagged()) +
                              " spectral cells have undefined phase matching and were zeroed");
  }
  sum.push_back({"flagged_cells", std::to_string(amp.flagged())});
  try {
    sum.push_back({"bandwidth_thz", fmt(bandwidth_thz(amp, 0.5))});
    const BandEdges edges = band_edges(amp, 0.01);
    sum.push_back({"band_edge_short_nm", fmt(edges.short_nm)});
    sum.push_back({"band_edge_long_nm", fmt(edges.long_nm)});
  } catch (const DomainError& e) {
    throw DomainError(std::string("band (lambda_min_um/lambda_max_um): ") + e.what());
  }

  const double wc = p.device.degenerate_omega();
  const double center_thz = thz_from_omega(wc);
  sum.push_back({"center_frequency_thz", fmt(center_thz)});
  std::optional<SpectralPhaseCurve> phase;
  std::optional<double> device_gdd;
  try {
    phase = sample_spectral_phase(p.device, amp.omega, sc.geometry);
    device_gdd = measure_gdd(*phase, wc);
    sum.push_back({"gdd_fs2", fmt(*device_gdd)});
  } catch (const DomainError& e) {
    result.warnings.push_back(std::string("spectral phase unavailable: ") + e.what());
  }

  if (sc.outputs.count(Output::spectrum)) {
    CsvTable table = spectral_amplitude_table(amp);
    stamp(table, sc);
    result.files.emplace_back("spectrum.csv", table.str());
    if (opt.gnuplot) {
      result.files.emplace_back("spectrum.gp",
                                gnuplot_script("spectrum.csv", "2", "5", sc.name + " spectrum", false));
    }
  }

  std::vector<Compensator> comps;
  for (const auto& spec : sc.compensators) {
    comps.push_back(build_compensator(spec, p, amp, device_gdd, sc.pad_factor, result));
  }

  if (sc.outputs.count(Output::spectral_phase) && phase) {
    std::vector<std::string> cols{"omega_rad_per_fs", "wavelength_nm", "phi_spec_rad"};
    std::vector<SpectralPhaseCurve> extra;
    for (const auto& c : comps) {
      if (std::holds_alternative<IdentityModel>(c.model)) continue;
      cols.push_back(c.label + "_phase_rad");
      extra.push_back(compensator_phase(c, amp.omega));
    }
    CsvTable table(cols);
    stamp(table, sc);
    for (std::size_t i = 0; i < amp.size(); ++i) {
      std::vector<double> row{amp.omega[i], wavelength_from_omega(amp.omega[i]) * 1e3, phase->phase[i]};
      for (const auto& e : extra) row.push_back(e.phase[i]);
      table.row(row);
    }
    result.files.emplace_back("spectral_phase.csv", table.str());
    if (opt.gnuplot) {
      result.files.emplace_back(
          "spectral_phase.gp",
          gnuplot_script("spectral_phase.csv", "1", "3", sc.name + " spectral phase", false));
    }
  }

  SfgOptions sfg;
  sfg.pad_factor = sc.pad_factor;
  sfg.seedless = opt.seedless;
  for (const auto& comp : comps) {
    const SpectralAmplitude shaped = apply_compensator(comp, amp);
    for (SfgScheme scheme : sc.schemes) {
      const CorrelationTrace trace = scheme == SfgScheme::noncollinear
                                         ? sfg_noncollinear(shaped, sfg)
                                         : sfg_collinear(shaped, p.device.pump_omega(), sfg);
      const std::string key = scheme_name(scheme) + "." + comp.label;
      const double width = fwhm(trace, sc.fwhm_mode);
      sum.push_back({"fwhm_fs." + key, fmt(width)});
      sum.push_back({"cycles." + key, fmt(cycles(width, trace.center_frequency_thz))});
      if (sc.outputs.count(Output::sfg_trace)) {
        CsvTable table({"tau_fs", "r_normalized"});
        stamp(table, sc);
        table.comment("scheme", scheme_name(scheme));
        table.comment("compensator", comp.label);
        table.comment("pad_factor", std::to_string(sc.pad_factor));
        table.comment("tau_step_fs", fmt(trace.tau.step));
        const auto [lo, hi] = trace_window(trace);
        for (std::size_t i = lo; i < hi; ++i) table.row(std::vector<double>{trace.tau[i], trace.values[i]});
        const std::string name = "sfg_" + scheme_name(scheme) + "_" + comp.label + ".csv";
        result.files.emplace_back(name, table.str());
        if (opt.gnuplot) {
          result.files.emplace_back(name.substr(0, name.size() - 4) + ".gp",
                                    gnuplot_script(name, "1", "2", sc.name + " " + key, false));
        }
      }
    }
  }
}

void run_tuning(const Scenario& sc, const Prepared& p, const RunOptions& opt, RunResult& result) {
  const TuningSpec& t = *sc.tuning;
  const auto lambda = linspace(t.lambda_min_um, t.lambda_max_um, t.lambda_points);
  const auto phi = linspace(t.phi_min_deg, t.phi_max_deg, t.phi_points);
  const TuningCurve curve = tuning_curve(p.device, lambda, phi, t.quantity, sc.kappa);
  result.summary.push_back({"tuning_missing_cells", std::to_string(curve.missing())});
  if (curve.missing() > 0) {
    result.warnings.push_back(std::to_string(curve.missing()) + " tuning-curve cells are undefined");
  }
  double peak = -1.0;
  std::size_t pi = 0;
  std::size_t pj = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (std::size_t j = 0; j < phi.size(); ++j) {
      const auto& v = curve.at(i, j);
      if (v && *v > peak) {
        peak = *v;
        pi = i;
        pj = j;
      }
    }
  }
  if (peak >= 0.0) {
    result.summary.push_back({"tuning_peak_wavelength_um", fmt(lambda[pi])});
    result.summary.push_back({"tuning_peak_phi_deg", fmt(phi[pj])});
  }
  if (sc.outputs.count(Output::tuning_curve)) {
    std::vector<std::string> cols{"wavelength_um"};
    for (double f : phi) cols.push_back(fmt(f));
    CsvTable table(cols);
    stamp(table, sc);
    table.comment("quantity",
                  t.quantity == TuningQuantity::photon_number ? "photon_number" : "phase_mismatch");
    table.comment("columns", "phi_deg");
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      std::vector<std::string> row{fmt(lambda[i])};
      for (std::size_t j = 0; j < phi.size(); ++j) {
        const auto& v = curve.at(i, j);
        row.push_back(v ? fmt(*v) : "");
      }
      table.row(row);
    }
    result.files.emplace_back("tuning_curve.csv", table.str());
    if (opt.gnuplot) {
      result.files.emplace_back(
          "tuning_curve.gp",
          "set datafile separator ','\nset terminal pngcairo size 1000,640\n"
          "set output 'tuning_curve.png'\nset xlabel 'wavelength [um]'\nset ylabel 'phi [deg]'\n"
          "plot 'tuning_curve.csv' nonuniform matrix using 2:1:3 with image notitle\n");
    }
  }
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  auto it = std::lower_bound(x.begin(), x.end(), at);
  if (it == x.end()) return y.back();
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  if (k == 0 || *it == at) return y[k];
  const double t = (at - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + t * (y[k] - y[k - 1]);
}

void run_instrument(const Scenario& sc, const Prepared& p, const RunOptions& opt, RunResult& result) {
  const InstrumentSpec& in = *sc.instrument;
  const auto n = static_cast<std::size_t>(std::floor((in.stop_nm - in.start_nm) / in.step_nm + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = in.start_nm + in.step_nm * static_cast<double>(i);
  const DetectedSpectrum ds = detected_spectrum(p.device, in.window, grid, in.resolution, sc.kappa);
  if (ds.excluded > 0) {
    result.warnings.push_back(std::to_string(ds.excluded) +
                              " detected-spectrum wavelengths excluded (undefined phase matching)");
  }
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = ds.normalized[i].value_or(0.0);
  auto& sum = result.summary;
  sum.push_back({"detected_excluded", std::to_string(ds.excluded)});
  try {
    const auto [lo, hi] = support_edges(grid, s, 0.01);
    sum.push_back({"detected_edge_short_nm", fmt(lo)});
    sum.push_back({"detected_edge_long_nm", fmt(hi)});
  } catch (const DomainError& e) {
    throw DomainError(std::string("instrument.wavelength_nm: ") + e.what());
  }

  std::optional<DetectorModel> det;
  if (in.detector_file) det = load_detector_csv(*in.detector_file, in.interpolation);
  std::vector<std::string> counts(n);
  if (det) {
    sum.push_back({"detector", det->name});
    const double lo = det->points.front().first;
    const double hi = det->points.back().first;
    for (std::size_t i = 0; i < n; ++i) {
      if (ds.normalized[i] && grid[i] >= lo && grid[i] <= hi) {
        const double one[1]{s[i]};
        const double at[1]{grid[i]};
        counts[i] = fmt(raw_counts_model(one, at, *det, in.coupling)[0]);
      }
    }
    const double a = std::max(lo, 800.0);
    const double b = std::min(hi, grid.back());
    if (a < b && a >= grid.front()) {
      const double ca = interpolate(grid, s, a) * detector_efficiency(*det, a);
      const double cb = interpolate(grid, s, b) * detector_efficiency(*det, b);
      sum.push_back({"counts_ratio_" + fmt(b) + "_to_" + fmt(a) + "_nm", fmt(cb / ca)});
    }
  }

  if (sc.outputs.count(Output::detected_spectrum)) {
    std::vector<std::string> cols{"wavelength_nm", "s_normalized", "s_raw"};
    if (det) cols.push_back("counts_model");
    CsvTable table(cols);
    stamp(table, sc);
    table.comment("acceptance_deg", fmt(in.window.phi_min_deg) + " " + fmt(in.window.phi_max_deg));
    table.comment("angle_samples", std::to_string(in.window.samples));
    if (det) table.comment("detector", det->name);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> row{fmt(grid[i]), ds.normalized[i] ? fmt(*ds.normalized[i]) : "",
                                   ds.raw[i] ? fmt(*ds.raw[i]) : ""};
      if (det) row.push_back(counts[i]);
      table.row(row);
    }
    result.files.emplace_back("detected_spectrum.csv", table.str());
    if (opt.gnuplot) {
      result.files.emplace_back("detected_spectrum.gp",
                                gnuplot_script("detected_spectrum.csv", "1", "2",
                                               sc.name + " detected spectrum", true));
    }
  }
}

}  // namespace

fs::path data_dir() {
  if (const char* env = std::getenv("QPMSIM_DATA_DIR"); env && *env) return env;
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    const fs::path installed = exe.parent_path().parent_path() / "share" / "qpmsim";
    if (fs::exists(installed / "media.json")) return installed;
  }
#ifdef QPMSIM_SOURCE_DATA_DIR
  return QPMSIM_SOURCE_DATA_DIR;
#else
  return "data";
#endif
}

Scenario parse_scenario(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("scenario: top level must be an object");
  reject_unknown(doc,
                 {"name", "aliases", "description", "media", "device", "geometry", "kappa", "band",
                  "compensators", "sfg", "tuning_curve", "instrument", "outputs"},
                 "scenario");
  Scenario sc;
  sc.base_dir = base_dir;
  if (doc.contains("name")) sc.name = text(doc, "name", "scenario");
  if (doc.contains("description")) sc.description = text(doc, "description", "scenario");
  if (doc.contains("aliases")) {
    if (!doc["aliases"].is_array()) throw ConfigError("scenario: 'aliases' must be an array");
    for (const auto& a : doc["aliases"]) {
      if (!a.is_string()) throw ConfigError("scenario: aliases must be strings");
      sc.aliases.push_back(a.get<std::string>());
    }
  }
  if (doc.contains("media")) sc.media_file = fs::path(text(doc, "media", "scenario"));
  sc.device = object(doc, "device", "scenario");
  if (doc.contains("geometry")) {
    const json& g = object(doc, "geometry", "scenario");
    reject_unknown(g, {"phi_deg"}, "geometry");
    sc.geometry.phi_deg = number(g, "phi_deg", "geometry");
    if (!(std::abs(sc.geometry.phi_deg) < 90.0)) throw ConfigError("geometry: |phi_deg| must be < 90");
  }
  sc.kappa = number_or(doc, "kappa", 1.0, "scenario");
  if (!(sc.kappa > 0.0)) throw ConfigError("scenario: 'kappa' must be positive");
  if (doc.contains("band")) sc.band = parse_band(object(doc, "band", "scenario"));
  if (doc.contains("compensators")) {
    const json& cs = doc["compensators"];
    if (!cs.is_array()) throw ConfigError("scenario: 'compensators' must be an array");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      sc.compensators.push_back(parse_compensator(cs[i], i));
      if (!labels.insert(sc.compensators.back().label).second) {
        throw ConfigError("compensators: duplicate label '" + sc.compensators.back().label + "'");
      }
    }
  }
  if (doc.contains("sfg")) {
    const json& s = object(doc, "sfg", "scenario");
    reject_unknown(s, {"schemes", "pad_factor", "fwhm_mode"}, "sfg");
    if (s.contains("schemes")) {
      if (!s["schemes"].is_array() || s["schemes"].empty()) {
        throw ConfigError("sfg: 'schemes' must be a non-empty array");
      }
      sc.schemes.clear();
      for (const auto& v : s["schemes"]) {
        if (v == "noncollinear") sc.schemes.push_back(SfgScheme::noncollinear);
        else if (v == "collinear") sc.schemes.push_back(SfgScheme::collinear);
        else throw ConfigError("sfg: unknown scheme " + v.dump());
      }
    }
    if (s.contains("pad_factor")) sc.pad_factor = count(s, "pad_factor", "sfg");
    if (s.contains("fwhm_mode")) {
      const auto m = text(s, "fwhm_mode", "sfg");
      if (m == "outermost") sc.fwhm_mode = FwhmMode::outermost;
      else if (m == "central_lobe") sc.fwhm_mode = FwhmMode::central_lobe;
      else throw ConfigError("sfg: unknown fwhm_mode '" + m + "'");
    }
  }
  if (doc.contains("tuning_curve")) sc.tuning = parse_tuning(object(doc, "tuning_curve", "scenario"));
  if (doc.contains("instrument")) {
    sc.instrument = parse_instrument(object(doc, "instrument", "scenario"), base_dir);
  }
  if (doc.contains("outputs")) {
    if (!doc["outputs"].is_array()) throw ConfigError("scenario: 'outputs' must be an array");
    for (const auto& o : doc["outputs"]) {
      if (!o.is_string()) throw ConfigError("outputs: entries must be strings");
      sc.outputs.insert(parse_output(o.get<std::string>()));
    }
  } else {
    sc.outputs.insert(Output::summary);
  }

  if (!sc.compensators.empty() && !sc.band) throw ConfigError("compensators require a 'band' section");
  if ((sc.outputs.count(Output::spectrum) || sc.outputs.count(Output::spectral_phase)) && !sc.band) {
    throw ConfigError("outputs spectrum/spectral_phase require a 'band' section");
  }
  if (sc.outputs.count(Output::sfg_trace) && sc.compensators.empty()) {
    throw ConfigError("output sfg_trace requires at least one compensator");
  }
  if (sc.outputs.count(Output::tuning_curve) && !sc.tuning) {
    throw ConfigError("output tuning_curve requires a 'tuning_curve' section");
  }
  if (sc.outputs.count(Output::detected_spectrum) && !sc.instrument) {
    throw ConfigError("output detected_spectrum requires an 'instrument' section");
  }
  return sc;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("scenario " + path.string() + ": " + e.what());
  }
  Scenario sc = parse_scenario(doc, path.parent_path());
  if (sc.name.empty()) sc.name = path.stem().string();
  return sc;
}

void check_scenario(const Scenario& sc) {
  const Prepared p = prepare(sc);
  for (const auto& spec : sc.compensators) {
    if (spec.model == "prism_pair") p.media.at(spec.params["glass"].get<std::string>());
  }
  if (sc.instrument && sc.instrument->detector_file) {
    load_detector_csv(*sc.instrument->detector_file, sc.instrument->interpolation);
  }
}

RunResult run_scenario(const Scenario& sc, const RunOptions& opt) {
  const Prepared p = prepare(sc);
  RunResult result;
  if (sc.tuning) run_tuning(sc, p, opt, result);
  if (sc.band) run_spectrum(sc, p, opt, result);
  if (sc.instrument) run_instrument(sc, p, opt, result);
  if (sc.outputs.count(Output::summary)) result.files.emplace_back("summary.txt", summary_text(sc, result));
  return result;
}

std::string summary_text(const Scenario& sc, const RunResult& result) {
  std::ostringstream out;
  out << "# qpmsim " << version() << '\n' << "# scenario: " << sc.name << '\n';
  for (const auto& w : result.warnings) out << "# warning: " << w << '\n';
  for (const auto& item : result.summary) out << item.key << " = " << item.value << '\n';
  return out.str();
}

void write_outputs(const RunResult& result, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  for (const auto& [name, contents] : result.files) write_text_file(out_dir / name, contents);
}

}  // namespace qpm::cli
