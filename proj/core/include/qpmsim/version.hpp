#pragma once

namespace qpm {

/// Library version, "major.minor.patch".
const char* version();

}  // namespace qpm
