#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "polyopt/poly.hpp"

namespace polyopt {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ParsedInstance {
  Problem problem;
  /// Per-variable translation applied to clear negative lower bounds:
  /// original x_j = problem-space x_j + shift[j]. All zero for files already
  /// in standard form.
  std::vector<double> shift;
};

/// Parses the line-oriented poly1 format:
///   poly1
///   vars <n>
///   bound <j> <lo> <hi>          one per variable, finite, lo <= hi
///   objective min
///   <coef> [x<j>[^<pow>] ...]    term lines
///   constraint <ge|eq> <rhs>
///   <term lines>
///   end
/// '#' starts a comment; blank lines are skipped. Variables with a negative
/// lower bound are shifted to zero (see ParsedInstance::shift). Errors carry
/// 1-based line and column.
ParsedInstance parse_poly1(const std::string& text);
ParsedInstance parse_poly1_file(const std::string& path);

std::string render_poly1(const Problem& p);
void write_poly1_file(const std::string& path, const Problem& p);

}  // namespace polyopt
