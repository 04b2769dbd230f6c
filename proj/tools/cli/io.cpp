#include "io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "spdsr/errors.hpp"

namespace spdsr::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

int p_from_width(std::size_t n, const std::string& where) {
  if (n == 3) return 2;
  if (n == 6) return 3;
  if (n == 4 || n == 9) {
    throw ParseError(where + ": " + std::to_string(n) +
                     " values look like a full matrix; give the upper triangle (3 or 6 values)");
  }
  throw ParseError(where + ": expected 3 or 6 values, got " + std::to_string(n));
}

SymMat build(int p, const std::vector<double>& upper, const std::string& where) {
  for (std::size_t i = 0; i < upper.size(); ++i) {
    if (!std::isfinite(upper[i])) throw ParseError(where + ": field " + std::to_string(i + 1) + " is not finite");
  }
  return SymMat::from_upper(p, upper);
}

// ---- CSV

struct CsvRow {
  int line = 0;
  std::vector<std::string> fields;
};

std::vector<CsvRow> csv_rows(const std::string& text) {
  std::vector<CsvRow> rows;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    CsvRow row{n, {}};
    std::string field;
    std::istringstream ls(t);
    while (std::getline(ls, field, ',')) row.fields.push_back(trim(field));
    if (!t.empty() && t.back() == ',') row.fields.emplace_back();
    // a leading header row is recognised by a non-numeric first field
    if (first && !row.fields.empty() && !to_double(row.fields[0])) {
      first = false;
      continue;
    }
    first = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixRecord csv_matrix(const CsvRow& row) {
  const std::string where = "line " + std::to_string(row.line);
  const int p = p_from_width(row.fields.size(), where);
  std::vector<double> v;
  for (std::size_t i = 0; i < row.fields.size(); ++i) {
    const auto d = to_double(row.fields[i]);
    if (!d) throw ParseError(where + ": field " + std::to_string(i + 1) + ": not a number '" + row.fields[i] + "'");
    v.push_back(*d);
  }
  return {where, build(p, v, where)};
}

// ---- JSON

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; translate to line / column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(fmt::format("malformed JSON at line {}, column {}: {}", line, col, e.what()));
  }
}

MatrixRecord json_matrix(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object {\"p\": .., \"upper\": [..]}");
  if (j.contains("matrix") || j.contains("full")) {
    throw ParseError(where + ": full-matrix input is not accepted; give \"upper\"");
  }
  if (!j.contains("p") || !j["p"].is_number_integer()) throw ParseError(where + ".p: expected the integer 2 or 3");
  const int p = j["p"].get<int>();
  if (p != 2 && p != 3) throw ParseError(where + ".p: expected 2 or 3, got " + std::to_string(p));
  if (!j.contains("upper") || !j["upper"].is_array()) throw ParseError(where + ".upper: expected an array");
  const json& u = j["upper"];
  const std::size_t want = static_cast<std::size_t>(p * (p + 1) / 2);
  if (u.size() == static_cast<std::size_t>(p * p) && u.size() != want) {
    throw ParseError(where + ".upper: " + std::to_string(u.size()) +
                     " values look like a full matrix; give the upper triangle");
  }
  if (u.size() != want) {
    throw ParseError(fmt::format("{}.upper: expected {} values for p = {}, got {}", where, want, p, u.size()));
  }
  std::vector<double> v;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!u[i].is_number()) throw ParseError(fmt::format("{}.upper[{}]: expected a number", where, i));
    v.push_back(u[i].get<double>());
  }
  return {where, build(p, v, where)};
}

const json& pair_list(const json& j) {
  if (j.is_array()) return j;
  if (j.is_object() && j.contains("pairs") && j["pairs"].is_array()) return j["pairs"];
  throw ParseError("expected {\"pairs\": [...]} or an array of {\"x\": .., \"y\": ..} objects");
}

}  // namespace

InputFormat detect_format(const std::string& path, const std::string& text) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == "json") return InputFormat::kJson;
    if (ext == "csv") return InputFormat::kCsv;
  }
  const std::string t = trim(text);
  return !t.empty() && (t[0] == '{' || t[0] == '[') ? InputFormat::kJson : InputFormat::kCsv;
}

std::vector<MatrixRecord> parse_matrices(const std::string& text, InputFormat f) {
  std::vector<MatrixRecord> out;
  if (f == InputFormat::kCsv) {
    for (const auto& row : csv_rows(text)) out.push_back(csv_matrix(row));
  } else {
    const json j = parse_json(text);
    if (j.is_object() && j.contains("upper")) {
      out.push_back(json_matrix(j, "matrix"));
    } else if (j.is_object() && j.contains("matrices")) {
      const json& a = j["matrices"];
      if (!a.is_array()) throw ParseError("matrices: expected an array");
      for (std::size_t i = 0; i < a.size(); ++i) out.push_back(json_matrix(a[i], fmt::format("matrices[{}]", i)));
    } else if (j.is_array() && !j.empty() && j[0].is_object() && j[0].contains("upper")) {
      for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_matrix(j[i], fmt::format("[{}]", i)));
    } else {
      for (const auto& p : parse_pairs(text, f)) {
        out.push_back(p.x);
        out.push_back(p.y);
      }
    }
  }
  if (out.empty()) throw ParseError("input contains no matrices");
  return out;
}

std::vector<PairRecord> parse_pairs(const std::string& text, InputFormat f) {
  std::vector<PairRecord> out;
  if (f == InputFormat::kCsv) {
    const auto rows = csv_rows(text);
    if (rows.size() % 2 != 0) {
      throw ParseError(fmt::format("line {}: odd number of matrix rows; pairs need two rows each", rows.back().line));
    }
    for (std::size_t i = 0; i < rows.size(); i += 2) {
      MatrixRecord x = csv_matrix(rows[i]);
      MatrixRecord y = csv_matrix(rows[i + 1]);
      if (x.m.p() != y.m.p()) throw ParseError(y.label + ": dimension differs from the previous row");
      out.push_back({fmt::format("pair {} (lines {}, {})", i / 2 + 1, rows[i].line, rows[i + 1].line), x, y});
    }
  } else {
    const json j = parse_json(text);
    const json& a = pair_list(j);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string where = fmt::format("pairs[{}]", i);
      if (!a[i].is_object() || !a[i].contains("x") || !a[i].contains("y")) {
        throw ParseError(where + ": expected an object with \"x\" and \"y\"");
      }
      MatrixRecord x = json_matrix(a[i]["x"], where + ".x");
      MatrixRecord y = json_matrix(a[i]["y"], where + ".y");
      if (x.m.p() != y.m.p()) throw ParseError(where + ": x and y differ in dimension");
      out.push_back({where, x, y});
    }
  }
  if (out.empty()) throw ParseError("input contains no pairs");
  return out;
}

std::vector<MatrixRecord> read_matrices(const std::string& path) {
  const std::string text = read_file(path);
  return parse_matrices(text, detect_format(path, text));
}

std::vector<PairRecord> read_pairs(const std::string& path) {
  const std::string text = read_file(path);
  return parse_pairs(text, detect_format(path, text));
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::vector<double> parse_k_grid(const std::string& spec) {
  std::vector<double> ks;
  const auto number = [](const std::string& s) {
    const auto d = to_double(trim(s));
    if (!d || !std::isfinite(*d)) throw ParseError("k-grid: not a number '" + s + "'");
    return *d;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(spec);
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ParseError("k-grid: expected start:stop:step");
    const double a = number(parts[0]), b = number(parts[1]), h = number(parts[2]);
    if (h <= 0.0) throw ParseError("k-grid: step must be positive");
    const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
    if (n < 0 || n > 1000000) throw ParseError("k-grid: empty or too large");
    for (long i = 0; i <= n; ++i) ks.push_back(a + static_cast<double>(i) * h);
  } else {
    std::string part;
    std::istringstream in(spec);
    while (std::getline(in, part, ',')) ks.push_back(number(part));
  }
  if (ks.empty()) throw ParseError("k-grid: no values");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] > 0.0)) throw ParseError("k-grid: values must be positive, got " + format_number(ks[i]));
    if (i > 0 && !(ks[i] > ks[i - 1])) throw ParseError("k-grid: values must be strictly increasing");
  }
  return ks;
}

}  // namespace spdsr::cli
