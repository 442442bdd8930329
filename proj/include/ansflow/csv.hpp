#pragma once

#include <string>
#include <vector>

namespace ansflow {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Joins already formatted cells with commas.
std::string csv_join(const std::vector<std::string>& cells);

}  // namespace ansflow
