#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpmsim/correlation.hpp"
#include "qpmsim/device.hpp"
#include "qpmsim/instrument.hpp"

namespace qpm::cli {

inline constexpr std::size_t kDefaultPoints = std::size_t{1} << 14;

enum class Output { tuning_curve, spectrum, detected_spectrum, spectral_phase, sfg_trace, summary };
enum class SfgScheme { noncollinear, collinear };

struct BandSpec {
  double lambda_min_um = 0.0;
  double lambda_max_um = 0.0;
  std::size_t points = kDefaultPoints;
};

struct CompensatorSpec {
  std::string model;  // identity | perfect | quadratic | prism_pair
  std::string label;
  nlohmann::json params;
};

struct TuningSpec {
  double lambda_min_um = 0.0;
  double lambda_max_um = 0.0;
  std::size_t lambda_points = 0;
  double phi_min_deg = 0.0;
  double phi_max_deg = 0.0;
  std::size_t phi_points = 0;
  TuningQuantity quantity = TuningQuantity::photon_number;
};

struct InstrumentSpec {
  AcceptanceWindow window;
  double start_nm = 0.0;
  double stop_nm = 0.0;
  double step_nm = 0.0;
  BandpassResolution resolution;
  std::optional<std::filesystem::path> detector_file;
  DetectorModel::Interpolation interpolation = DetectorModel::Interpolation::log_linear;
  double coupling = 1.0;
};

struct Scenario {
  std::string name;
  std::vector<std::string> aliases;
  std::string description;
  std::filesystem::path base_dir;
  std::optional<std::filesystem::path> media_file;
  nlohmann::json device;
  Geometry geometry;
  double kappa = 1.0;
  std::optional<BandSpec> band;
  std::vector<CompensatorSpec> compensators;
  std::vector<SfgScheme> schemes{SfgScheme::noncollinear};
  std::size_t pad_factor = 8;
  FwhmMode fwhm_mode = FwhmMode::outermost;
  std::optional<TuningSpec> tuning;
  std::optional<InstrumentSpec> instrument;
  std::set<Output> outputs;
};

/// Schema check and conversion; throws ConfigError naming the offending key.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Bundled data directory: $QPMSIM_DATA_DIR, the source tree, or <prefix>/share/qpmsim.
std::filesystem::path data_dir();

struct RunOptions {
  std::optional<std::size_t> points;
  bool seedless = false;
  bool gnuplot = false;
};

struct SummaryItem {
  std::string key;
  std::string value;
};

struct RunResult {
  /// file name -> contents, in write order
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<SummaryItem> summary;
  std::vector<std::string> warnings;
};

/// Computes every requested output in memory; nothing touches the disk.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// Loads everything a run needs (media, device, detector, compensator glass) without computing.
void check_scenario(const Scenario& scenario);

/// Writes all files of `result` into `out_dir` (created if missing).
void write_outputs(const RunResult& result, const std::filesystem::path& out_dir);

std::string summary_text(const Scenario& scenario, const RunResult& result);

}  // namespace qpm::cli
