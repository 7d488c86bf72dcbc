#include "qpmsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qpmsim/errors.hpp"

namespace qpm {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw ConfigError("csv table needs at least one column");
}

void CsvTable::comment(std::string line) { comments_.push_back(std::move(line)); }

void CsvTable::comment(const std::string& key, const std::string& value) {
  comments_.push_back(key + ": " + value);
}

void CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) throw ConfigError("csv row width does not match header");
  rows_.push_back(cells);
}

void CsvTable::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvTable::write(std::ostream& out) const {
  for (const auto& c : comments_) out << "# " << c << '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
}

std::string CsvTable::str() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

CsvTable spectral_amplitude_table(const SpectralAmplitude& amp) {
  CsvTable table({"omega_rad_per_fs", "wavelength_nm", "re_psi", "im_psi", "photon_number",
                  "phase_rad"});
  table.comment("device", amp.device_tag);
  table.comment("phi_deg", format_number(amp.geometry.phi_deg));
  table.comment("kappa", format_number(amp.kappa));
  const auto phase = amplitude_phase(amp);
  const auto n = mean_photon_number(amp);
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double w = amp.omega[i];
    const std::string wl = format_number(wavelength_from_omega(w) * 1e3);
    if (!amp.valid[i]) {
      table.row(std::vector<std::string>{format_number(w), wl, "", "", "", ""});
      continue;
    }
    table.row(std::vector<std::string>{format_number(w), wl, format_number(amp.values[i].real()),
                                       format_number(amp.values[i].imag()), format_number(n[i]),
                                       format_number(phase.phase[i])});
  }
  return table;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << contents;
    if (!out) throw ConfigError("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qpm
