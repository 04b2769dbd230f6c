#ifndef SPDSR_CLI_IO_HPP_
#define SPDSR_CLI_IO_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdsr/matcore.hpp"

namespace spdsr::cli {

/// Malformed input file or option value.  Maps to exit status 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatrixRecord {
  std::string label;  // "line 4" or "matrices[2]"
  SymMat m;
};

struct PairRecord {
  std::string label;
  MatrixRecord x;
  MatrixRecord y;
};

enum class InputFormat { kJson, kCsv };

/// By extension (.json / .csv), else by the first non-blank character.
InputFormat detect_format(const std::string& path, const std::string& text);

/// Matrices are given by their upper triangle only:
///   JSON  {"p": 3, "upper": [m11, m12, m13, m22, m23, m33]}
///   CSV   one matrix per row, 3 values (p = 2) or 6 values (p = 3)
/// A full p x p matrix is rejected.
std::vector<MatrixRecord> read_matrices(const std::string& path);

/// JSON {"pairs": [{"x": M, "y": M}, ...]} or a bare array of such objects;
/// CSV rows taken two at a time.
std::vector<PairRecord> read_pairs(const std::string& path);

std::vector<MatrixRecord> parse_matrices(const std::string& text, InputFormat fmt);
std::vector<PairRecord> parse_pairs(const std::string& text, InputFormat fmt);

/// 17 significant digits.
std::string format_number(double v);

/// "a:b:step" (inclusive of b up to rounding) or "k1,k2,...".  Throws
/// ParseError unless strictly increasing and positive.
std::vector<double> parse_k_grid(const std::string& spec);

}  // namespace spdsr::cli

#endif  // SPDSR_CLI_IO_HPP_
