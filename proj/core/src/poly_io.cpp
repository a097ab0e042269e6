#include "polyopt/poly_io.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>

#include "polyopt/metrics.hpp"

namespace polyopt {

namespace {

struct Token {
  std::string text;
  int column = 0;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] == '#') break;
    if (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r') {
      ++pos;
      continue;
    }
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' &&
           line[pos] != '\r' && line[pos] != '#') {
      ++pos;
    }
    out.push_back(Token{line.substr(start, pos - start),
                        static_cast<int>(start) + 1});
  }
  return out;
}

double parse_double(const Token& tok, int line) {
  double v = 0.0;
  const char* end = tok.text.data() + tok.text.size();
  const auto [p, ec] = std::from_chars(tok.text.data(), end, v);
  if (ec != std::errc{} || p != end) {
    throw ParseError(line, tok.column, "expected a number, got '" + tok.text + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(line, tok.column, "number must be finite");
  }
  return v;
}

int parse_int(const Token& tok, int line) {
  int v = 0;
  const char* end = tok.text.data() + tok.text.size();
  const auto [p, ec] = std::from_chars(tok.text.data(), end, v);
  if (ec != std::errc{} || p != end) {
    throw ParseError(line, tok.column, "expected an integer, got '" + tok.text + "'");
  }
  return v;
}

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  const char c = s[0];
  return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

/// "x<j>" or "x<j>^<pow>"
std::pair<int, int> parse_factor(const Token& tok, int line, int num_vars) {
  const std::string& s = tok.text;
  if (s.empty() || s[0] != 'x') {
    throw ParseError(line, tok.column, "expected a factor like x0 or x0^2");
  }
  const std::size_t caret = s.find('^');
  const std::string var_part = s.substr(1, caret == std::string::npos
                                               ? std::string::npos
                                               : caret - 1);
  int var = 0;
  {
    const char* end = var_part.data() + var_part.size();
    const auto [p, ec] = std::from_chars(var_part.data(), end, var);
    if (var_part.empty() || ec != std::errc{} || p != end) {
      throw ParseError(line, tok.column, "bad variable index in '" + s + "'");
    }
  }
  if (var < 0 || var >= num_vars) {
    throw ParseError(line, tok.column, "variable x" + std::to_string(var) +
                                           " out of range");
  }
  int pow = 1;
  if (caret != std::string::npos) {
    const std::string pow_part = s.substr(caret + 1);
    const char* end = pow_part.data() + pow_part.size();
    const auto [p, ec] = std::from_chars(pow_part.data(), end, pow);
    if (pow_part.empty() || ec != std::errc{} || p != end || pow <= 0) {
      throw ParseError(line, tok.column, "bad power in '" + s + "'");
    }
  }
  return {var, pow};
}

}  // namespace

ParsedInstance parse_poly1(const std::string& text) {
  std::vector<std::pair<int, std::vector<Token>>> lines;  // (line no, tokens)
  {
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
      ++no;
      std::vector<Token> toks = tokenize(raw);
      if (!toks.empty()) lines.emplace_back(no, std::move(toks));
    }
  }
  std::size_t at = 0;
  auto need_line = [&](const char* what) -> const std::pair<int, std::vector<Token>>& {
    if (at >= lines.size()) {
      const int last = lines.empty() ? 1 : lines.back().first;
      throw ParseError(last, 1, std::string("unexpected end of file, expected ") + what);
    }
    return lines[at];
  };

  {
    const auto& [no, toks] = need_line("'poly1'");
    if (toks.size() != 1 || toks[0].text != "poly1") {
      throw ParseError(no, toks[0].column, "file must start with 'poly1'");
    }
    ++at;
  }

  int num_vars = 0;
  {
    const auto& [no, toks] = need_line("'vars <n>'");
    if (toks.size() != 2 || toks[0].text != "vars") {
      throw ParseError(no, toks[0].column, "expected 'vars <n>'");
    }
    num_vars = parse_int(toks[1], no);
    if (num_vars <= 0) {
      throw ParseError(no, toks[1].column, "need at least one variable");
    }
    ++at;
  }

  Problem p;
  p.num_vars = num_vars;
  const double unset = std::numeric_limits<double>::quiet_NaN();
  p.box.lo.assign(static_cast<std::size_t>(num_vars), unset);
  p.box.hi.assign(static_cast<std::size_t>(num_vars), unset);

  while (at < lines.size() && lines[at].second[0].text == "bound") {
    const auto& [no, toks] = lines[at];
    if (toks.size() != 4) {
      throw ParseError(no, toks[0].column, "expected 'bound <j> <lo> <hi>'");
    }
    const int j = parse_int(toks[1], no);
    if (j < 0 || j >= num_vars) {
      throw ParseError(no, toks[1].column, "variable x" + std::to_string(j) +
                                               " out of range");
    }
    const std::size_t sj = static_cast<std::size_t>(j);
    if (!std::isnan(p.box.lo[sj])) {
      throw ParseError(no, toks[1].column, "duplicate bound for x" + std::to_string(j));
    }
    p.box.lo[sj] = parse_double(toks[2], no);
    p.box.hi[sj] = parse_double(toks[3], no);
    if (p.box.lo[sj] > p.box.hi[sj]) {
      throw ParseError(no, toks[2].column, "lower bound above upper bound");
    }
    ++at;
  }

  {
    const auto& [no, toks] = need_line("'objective min'");
    for (int j = 0; j < num_vars; ++j) {
      if (std::isnan(p.box.lo[static_cast<std::size_t>(j)])) {
        throw ParseError(no, toks[0].column,
                         "variable x" + std::to_string(j) + " has no bound");
      }
    }
    if (toks.size() != 2 || toks[0].text != "objective" || toks[1].text != "min") {
      throw ParseError(no, toks[0].column, "expected 'objective min'");
    }
    ++at;
  }

  auto parse_terms = [&](Polynomial& body) {
    while (at < lines.size() && looks_numeric(lines[at].second[0].text)) {
      const auto& [no, toks] = lines[at];
      const double coef = parse_double(toks[0], no);
      std::vector<std::pair<int, int>> factors;
      for (std::size_t t = 1; t < toks.size(); ++t) {
        factors.push_back(parse_factor(toks[t], no, num_vars));
      }
      body.add_term(Monomial::from_exponents(factors), coef);
      ++at;
    }
  };

  parse_terms(p.objective);

  while (at < lines.size() && lines[at].second[0].text == "constraint") {
    const auto& [no, toks] = lines[at];
    if (toks.size() != 3) {
      throw ParseError(no, toks[0].column, "expected 'constraint <ge|eq> <rhs>'");
    }
    Constraint c;
    if (toks[1].text == "ge") {
      c.sense = Sense::Ge;
    } else if (toks[1].text == "eq") {
      c.sense = Sense::Eq;
    } else {
      throw ParseError(no, toks[1].column,
                       "unknown sense '" + toks[1].text + "', expected ge or eq");
    }
    c.rhs = parse_double(toks[2], no);
    ++at;
    parse_terms(c.body);
    p.constraints.push_back(std::move(c));
  }

  {
    const auto& [no, toks] = need_line("'end'");
    if (toks.size() != 1 || toks[0].text != "end") {
      throw ParseError(no, toks[0].column,
                       "expected 'end', got '" + toks[0].text + "'");
    }
    ++at;
    if (at < lines.size()) {
      throw ParseError(lines[at].first, lines[at].second[0].column,
                       "content after 'end'");
    }
  }

  ParsedInstance out;
  out.shift.assign(static_cast<std::size_t>(num_vars), 0.0);
  bool shifted = false;
  for (std::size_t j = 0; j < static_cast<std::size_t>(num_vars); ++j) {
    if (p.box.lo[j] < 0.0) {
      out.shift[j] = p.box.lo[j];
      shifted = true;
    }
  }
  if (shifted) {
    p.objective = p.objective.translated(out.shift);
    for (Constraint& c : p.constraints) c.body = c.body.translated(out.shift);
    for (std::size_t j = 0; j < static_cast<std::size_t>(num_vars); ++j) {
      p.box.hi[j] -= out.shift[j];
      p.box.lo[j] -= out.shift[j];
    }
  }
  p.validate();
  out.problem = std::move(p);
  return out;
}

ParsedInstance parse_poly1_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_poly1(buf.str());
}

namespace {

void render_terms(std::ostream& out, const Polynomial& body) {
  for (const auto& [m, coef] : body.terms()) {
    out << format_double(coef);
    for (const auto& [j, pow] : m.factors()) {
      out << " x" << j;
      if (pow > 1) out << '^' << pow;
    }
    out << '\n';
  }
}

}  // namespace

std::string render_poly1(const Problem& p) {
  std::ostringstream out;
  out << "poly1\n";
  out << "vars " << p.num_vars << '\n';
  for (int j = 0; j < p.num_vars; ++j) {
    const std::size_t sj = static_cast<std::size_t>(j);
    out << "bound " << j << ' ' << format_double(p.box.lo[sj]) << ' '
        << format_double(p.box.hi[sj]) << '\n';
  }
  out << "objective min\n";
  render_terms(out, p.objective);
  for (const Constraint& c : p.constraints) {
    out << "constraint " << (c.sense == Sense::Ge ? "ge" : "eq") << ' '
        << format_double(c.rhs) << '\n';
    render_terms(out, c.body);
  }
  out << "end\n";
  return out.str();
}

void write_poly1_file(const std::string& path, const Problem& p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << render_poly1(p);
}

}  // namespace polyopt
