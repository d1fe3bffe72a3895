#pragma once

// CSV serialization of fields and small text-file helpers.  Fields are
// written one interior node per row ("x,value" or "x,y,value", x
// fastest) with 17 significant digits so round trips are exact.

#include <string>

#include "chainpde/grid.hpp"

namespace chainpde {

// Shortest-width %.17g rendering used for every floating-point value
// the tool emits.
std::string format_g17(double v);

std::string field_to_csv(const Field& f);

// Parses a CSV produced by field_to_csv for this grid; node
// coordinates are checked against the grid layout.
Field field_from_csv(const GridPtr& g, const std::string& text);

// Atomic write: temp file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& text);

std::string read_text_file(const std::string& path);

Field load_field_csv(const GridPtr& g, const std::string& path);

} // namespace chainpde
