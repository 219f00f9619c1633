#include "mimostat/matio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mimostat::matio {

std::string formatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw NumericError("formatDouble: conversion failed");
  return std::string(buf, ptr);
}

ComplexMatrix readMatrix(std::istream& in) {
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw ContractError("matrix file: missing 'rows cols' header");
  if (rows < 1 || cols < 1 || rows > 4096 || cols > 4096) throw ContractError("matrix file: bad dimensions");
  ComplexMatrix m(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw ContractError("matrix file: truncated entry list");
      m(r, c) = Cplx(re, im);
    }
  }
  return m;
}

ComplexMatrix readMatrixFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("matrix file not found: " + path);
  return readMatrix(in);
}

void writeMatrix(std::ostream& out, const ComplexMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << formatDouble(m(r, c).real()) << ' ' << formatDouble(m(r, c).imag());
    }
    out << '\n';
  }
}

void writeMatrixFile(const std::string& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ContractError("cannot open output file: " + path);
  writeMatrix(out, m);
}

}  // namespace mimostat::matio
