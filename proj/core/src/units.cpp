#include "qpmsim/units.hpp"

#include "qpmsim/errors.hpp"

namespace qpm {

UniformGrid UniformGrid::spanning(double first, double last, std::size_t n) {
  if (n < 2) throw ConfigError("a grid needs at least 2 points");
  if (!(last > first)) throw ConfigError("grid end must exceed grid start");
  return UniformGrid{first, (last - first) / static_cast<double>(n - 1), n};
}

std::vector<double> UniformGrid::samples() const {
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = (*this)[i];
  return out;
}

}  // namespace qpm
