#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qpmsim/biphoton.hpp"

namespace qpm {

/// Shortest round-trip decimal form of `x` ("nan" / "inf" / "-inf" for non-finite values).
std::string format_number(double x);

/// Column-oriented table with '#' header comments. Empty cells are written as blanks.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void comment(std::string line);
  void comment(const std::string& key, const std::string& value);
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);

  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }

  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

/// omega, lambda_nm, Re psi, Im psi, |psi|^2 / 2 pi and unwrapped arg psi. Invalid cells leave
/// their numeric columns blank.
CsvTable spectral_amplitude_table(const SpectralAmplitude& amp);

/// Writes via a temporary sibling file and rename.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace qpm
