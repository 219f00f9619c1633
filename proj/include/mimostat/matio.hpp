#pragma once

#include <iosfwd>
#include <string>

#include "mimostat/numkit.hpp"

namespace mimostat::matio {

using numkit::ComplexMatrix;

/// Shortest decimal representation that round-trips the exact double.
std::string formatDouble(double v);

/// Plain-text matrix format: first line "rows cols", then row-major
/// "re im" pairs separated by whitespace.
ComplexMatrix readMatrix(std::istream& in);
ComplexMatrix readMatrixFile(const std::string& path);
void writeMatrix(std::ostream& out, const ComplexMatrix& m);
void writeMatrixFile(const std::string& path, const ComplexMatrix& m);

}  // namespace mimostat::matio
