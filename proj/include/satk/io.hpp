// SPDX-License-Identifier: Apache-2.0
//
// Matrix ingestion: Matrix Market (array or coordinate; complex, real or
// integer; general, symmetric or hermitian) and the tool's JSON schema
//   {"dim": m, "entries": [[re, im], ...]}   (m*m pairs, row-major).
#ifndef SATK_IO_HPP
#define SATK_IO_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "linalg.hpp"

namespace satk {

namespace detail {

inline std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline long line_of_offset(const std::string& text, std::size_t offset)
{
  offset = std::min(offset, text.size());
  return 1 + static_cast<long>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline CMatrix finish_matrix(const CMatrix& M)
{
  if (M.rows() < 1) throw InvalidInput("parse_matrix: empty matrix");
  if (M.rows() != M.cols()) throw InvalidInput("parse_matrix: matrix is not square");
  if (!M.allFinite()) throw InvalidInput("parse_matrix: non-finite entry");
  return M;
}

inline CMatrix parse_json_matrix(const std::string& text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("parse_matrix: ") + e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw ParseError("parse_matrix: JSON needs \"dim\" and \"entries\"", 1);
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() < 1)
    throw ParseError("parse_matrix: \"dim\" must be a positive integer", 1);
  const long m = j["dim"].get<long>();
  const auto& entries = j["entries"];
  if (!entries.is_array()) throw ParseError("parse_matrix: \"entries\" must be an array", 1);
  if (static_cast<long>(entries.size()) != m * m) {
    throw ParseError("parse_matrix: expected " + std::to_string(m * m) + " entries, found " +
                         std::to_string(entries.size()),
                     1);
  }
  CMatrix M(m, m);
  for (long k = 0; k < m * m; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError("parse_matrix: entry " + std::to_string(k) + " is not an [re, im] pair", 1);
    M(k / m, k % m) = cplx(e[0].get<double>(), e[1].get<double>());
  }
  return finish_matrix(M);
}

inline CMatrix parse_matrix_market(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  long lineNo = 0;

  auto nextData = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineNo;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '%') continue;
      return true;
    }
    return false;
  };

  if (!std::getline(in, line)) throw ParseError("parse_matrix: empty input", 1);
  ++lineNo;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw ParseError("parse_matrix: missing %%MatrixMarket matrix header", lineNo);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate") throw ParseError("parse_matrix: unknown format '" + format + "'", lineNo);
  if (field != "complex" && field != "real" && field != "integer" && field != "double")
    throw ParseError("parse_matrix: unsupported field '" + field + "'", lineNo);
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian")
    throw ParseError("parse_matrix: unsupported symmetry '" + symmetry + "'", lineNo);
  const bool isComplex = field == "complex";

  if (!nextData(line)) throw ParseError("parse_matrix: missing size line", lineNo + 1);
  std::istringstream sizes(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(sizes >> rows >> cols) || rows < 1 || cols < 1) throw ParseError("parse_matrix: bad size line", lineNo);
  if (format == "coordinate" && !(sizes >> nnz && nnz >= 0)) throw ParseError("parse_matrix: bad size line", lineNo);
  if (rows != cols) throw InvalidInput("parse_matrix: matrix is not square");

  CMatrix M = CMatrix::Zero(rows, cols);
  auto readValue = [&](std::istringstream& s) {
    // strtod, unlike operator>>, accepts inf/nan; those are rejected later as InvalidInput
    auto number = [&](double& out) {
      std::string tok;
      if (!(s >> tok)) return false;
      char* end = nullptr;
      out = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) throw ParseError("parse_matrix: malformed value", lineNo);
      return true;
    };
    double re = 0.0, im = 0.0;
    if (!number(re)) throw ParseError("parse_matrix: malformed value", lineNo);
    if (isComplex && !number(im)) throw ParseError("parse_matrix: missing imaginary part", lineNo);
    std::string extra;
    if (s >> extra) throw ParseError("parse_matrix: trailing data", lineNo);
    return cplx(re, im);
  };
  auto place = [&](long i, long j, cplx v) {
    M(i, j) = v;
    if (i != j) {
      if (symmetry == "symmetric") M(j, i) = v;
      if (symmetry == "hermitian") M(j, i) = std::conj(v);
    }
  };

  if (format == "array") {
    // column-major; symmetric storage lists the lower triangle only
    for (long j = 0; j < cols; ++j)
      for (long i = (symmetry == "general" ? 0 : j); i < rows; ++i) {
        if (!nextData(line)) throw ParseError("parse_matrix: truncated array data", lineNo + 1);
        std::istringstream s(line);
        place(i, j, readValue(s));
      }
  } else {
    for (long k = 0; k < nnz; ++k) {
      if (!nextData(line)) throw ParseError("parse_matrix: truncated coordinate data", lineNo + 1);
      std::istringstream s(line);
      long i = 0, j = 0;
      if (!(s >> i >> j)) throw ParseError("parse_matrix: malformed index pair", lineNo);
      if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("parse_matrix: index out of range", lineNo);
      place(i - 1, j - 1, readValue(s));
    }
  }
  if (nextData(line)) throw ParseError("parse_matrix: unexpected data after the last entry", lineNo);
  return finish_matrix(M);
}

}  // namespace detail

/// Parses matrix text; JSON is recognised by a leading '{'.
inline CMatrix parse_matrix(const std::string& text)
{
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError("parse_matrix: empty input", 1);
  if (text[first] == '{') return detail::parse_json_matrix(text);
  return detail::parse_matrix_market(text);
}

inline std::string read_text_file(const std::string& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline CMatrix parse_matrix_file(const std::string& path) { return parse_matrix(read_text_file(path)); }

/// Inverse of the JSON schema accepted by parse_matrix.
inline nlohmann::json matrix_to_json(const CMatrix& M)
{
  nlohmann::json entries = nlohmann::json::array();
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) entries.push_back({M(i, j).real(), M(i, j).imag()});
  return {{"dim", M.rows()}, {"entries", entries}};
}

inline std::string matrix_to_matrix_market(const CMatrix& M)
{
  std::ostringstream out;
  out.precision(17);
  out << "%%MatrixMarket matrix array complex general\n" << M.rows() << ' ' << M.cols() << '\n';
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = 0; i < M.rows(); ++i) out << M(i, j).real() << ' ' << M(i, j).imag() << '\n';
  return out.str();
}

}  // namespace satk

#endif
