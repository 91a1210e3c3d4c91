#ifndef STARFLOW_CSV_HPP
#define STARFLOW_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "starflow/curve.hpp"

namespace starflow {

/// Shortest round-trip decimal form of a double ("%.17g", '.' decimal point,
/// locale independent). nan/inf render as "nan"/"inf".
std::string format_double(double v);

/// One CSV line from already-formatted fields (RFC 4180, no quoting needed
/// for numeric output).
std::string csv_line(const std::vector<std::string>& fields);

/// Writes a curve as CSV with header `v1,v2`, one node per row.
void write_curve_csv(const ClosedCurve& curve, const std::filesystem::path& path);

/// Loads a curve CSV (header `v1,v2`); orientation is normalized on
/// construction, CCW is not required on input.
ClosedCurve read_curve_csv(const std::filesystem::path& path);

} // namespace starflow

#endif
