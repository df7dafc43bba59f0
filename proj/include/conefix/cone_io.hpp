#pragma once

#include <iosfwd>
#include <string>

#include "conefix/cone.hpp"

namespace conefix {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

// Format:
//   # grid: dim=<d> axis0=<lo>:<hi>:<n> [axis1=<lo>:<hi>:<n>]
//   one value per line, row-major node order
void write_csv(std::ostream& os, const ConeVector& x);
ConeVector read_csv(std::istream& is);

void save_csv(const std::string& path, const ConeVector& x);
ConeVector load_csv(const std::string& path);

} // namespace conefix
