#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "bmdist/errors.hpp"
#include "bmdist/numeric/matrix.hpp"

namespace bmdist {

// Matrix text format:
//   line 1: n
//   n lines of n whitespace-separated tokens, each a decimal literal or "p/q".
//
// Mode selection on read: any "p/q" token, or a file made only of integer
// literals, loads exact; otherwise decimals load as doubles unless
// `force_exact` parses them as exact rationals.
struct MatrixReadOptions {
  bool force_exact = false;
};

inline Matrix read_matrix(std::istream& in, MatrixReadOptions opts = {}) {
  long n = 0;
  std::string header;
  if (!(in >> header)) throw ParseError("missing dimension line");
  if (!is_integer_literal(header)) throw ParseError("dimension must be an integer, got '" + header + "'");
  n = std::stol(header);
  if (n < 1) throw ParseError("dimension must be positive");
  const auto count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<std::string> tokens;
  tokens.reserve(count);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  if (tokens.size() != count) {
    throw ParseError("expected " + std::to_string(count) + " entries, found " + std::to_string(tokens.size()));
  }
  bool any_fraction = false;
  bool all_integer = true;
  for (const auto& t : tokens) {
    any_fraction = any_fraction || is_fraction_literal(t);
    all_integer = all_integer && is_integer_literal(t);
  }
  const auto dim = static_cast<std::size_t>(n);
  if (any_fraction || all_integer || opts.force_exact) {
    std::vector<Rational> d;
    d.reserve(count);
    for (const auto& t : tokens) d.push_back(parse_rational(t));
    return Matrix(RationalMatrix(dim, dim, std::move(d)));
  }
  std::vector<double> d;
  d.reserve(count);
  for (const auto& t : tokens) {
    // Validate with the exact grammar so the two modes accept the same tokens.
    parse_rational(t);
    d.push_back(std::stod(t));
  }
  return Matrix(RealMatrix(dim, dim, std::move(d)));
}

inline Matrix read_matrix_string(const std::string& text, MatrixReadOptions opts = {}) {
  std::istringstream in(text);
  return read_matrix(in, opts);
}

inline Matrix read_matrix_file(const std::string& path, MatrixReadOptions opts = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix(in, opts);
}

// Float tokens always carry a '.' or exponent so they re-read as float.
inline std::string float_token(double x) {
  std::string s = format_double(x);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
  if (!m.square()) throw DimensionError("matrix format holds square matrices only");
  const std::size_t n = m.rows();
  out << n << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ' ';
      if (m.mode() == Mode::exact) {
        out << to_string(m.exact()(i, j));
      } else {
        out << float_token(m.floating()(i, j));
      }
    }
    out << '\n';
  }
}

inline std::string matrix_to_string(const Matrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  return out.str();
}

}  // namespace bmdist
