#include "qpmsim/version.hpp"

namespace qpm {

const char* version() { return QPMSIM_VERSION_STRING; }

}  // namespace qpm
