#pragma once

#include <string>

namespace aubry {

/// Shortest round-trip decimal form of a double (std::to_chars); locale-free
/// and deterministic, used for every CSV/JSON number the toolkit emits.
std::string fmt_double(double v);

}  // namespace aubry
