#include "polyopt/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "polyopt/metrics.hpp"
#include "polyopt/rlt.hpp"

namespace polyopt {

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (const double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  if (v.size() % 2 == 1) return v[h];
  return 0.5 * (v[h - 1] + v[h]);
}

double ratio(double num, double den) { return den != 0.0 ? num / den : 0.0; }

void add_edge(std::vector<std::set<int>>& adj, int a, int b) {
  if (a == b) return;
  adj[static_cast<std::size_t>(a)].insert(b);
  adj[static_cast<std::size_t>(b)].insert(a);
}

std::vector<std::vector<int>> to_lists(const std::vector<std::set<int>>& adj) {
  std::vector<std::vector<int>> out(adj.size());
  for (std::size_t v = 0; v < adj.size(); ++v) {
    out[v].assign(adj[v].begin(), adj[v].end());
  }
  return out;
}

/// Greedy agglomerative modularity: merge the pair with the largest gain
/// until one community remains, keeping the best value seen. Ties take the
/// lexicographically smallest pair.
double greedy_modularity(const std::vector<std::vector<int>>& adj) {
  const std::size_t n = adj.size();
  double m2 = 0.0;  // 2m
  for (const auto& nb : adj) m2 += static_cast<double>(nb.size());
  if (m2 == 0.0) return 0.0;

  std::vector<int> comm(n);
  for (std::size_t v = 0; v < n; ++v) comm[v] = static_cast<int>(v);
  std::vector<double> degree(n, 0.0);
  // intra[c]: twice the edges inside c; between[{c,d}]: edges across.
  std::vector<double> intra(n, 0.0);
  std::map<std::pair<int, int>, double> between;
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = static_cast<double>(adj[v].size());
    for (const int w : adj[v]) {
      if (static_cast<int>(v) < w) ++between[{static_cast<int>(v), w}];
    }
  }

  auto q_of = [&](const std::vector<double>& deg, const std::vector<double>& in,
                  const std::vector<bool>& alive) {
    double q = 0.0;
    for (std::size_t c = 0; c < deg.size(); ++c) {
      if (!alive[c]) continue;
      q += in[c] / m2 - (deg[c] / m2) * (deg[c] / m2);
    }
    return q;
  };

  std::vector<bool> alive(n, true);
  std::vector<double> deg = degree;
  double best = q_of(deg, intra, alive);
  std::size_t remaining = n;
  while (remaining > 1 && !between.empty()) {
    // gain of merging c,d: 2*(e_cd/m2 - deg_c*deg_d/m2^2)
    std::pair<int, int> pick = between.begin()->first;
    double pick_gain = -std::numeric_limits<double>::infinity();
    for (const auto& [cd, e] : between) {
      const double gain =
          2.0 * (e / m2 - deg[static_cast<std::size_t>(cd.first)] *
                              deg[static_cast<std::size_t>(cd.second)] / (m2 * m2));
      if (gain > pick_gain) {
        pick_gain = gain;
        pick = cd;
      }
    }
    const auto [c, d] = pick;
    const std::size_t sc = static_cast<std::size_t>(c);
    const std::size_t sd = static_cast<std::size_t>(d);
    intra[sc] += intra[sd] + 2.0 * between[pick];
    deg[sc] += deg[sd];
    alive[sd] = false;
    between.erase(pick);
    // reroute d's cross edges to c
    for (auto it = between.begin(); it != between.end();) {
      auto [a, b] = it->first;
      if (a == d || b == d) {
        const int other = a == d ? b : a;
        const std::pair<int, int> key{std::min(c, other), std::max(c, other)};
        between[key] += it->second;
        it = between.erase(it);
      } else {
        ++it;
      }
    }
    --remaining;
    best = std::max(best, q_of(deg, intra, alive));
  }
  return best;
}

double min_fill_treewidth(std::vector<std::set<int>> adj) {
  const std::size_t n = adj.size();
  std::vector<bool> gone(n, false);
  double width = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    int pick = -1;
    long best_fill = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (gone[v]) continue;
      long fill = 0;
      const auto& nb = adj[v];
      for (auto i = nb.begin(); i != nb.end(); ++i) {
        for (auto j = std::next(i); j != nb.end(); ++j) {
          if (!adj[static_cast<std::size_t>(*i)].count(*j)) ++fill;
        }
      }
      if (pick < 0 || fill < best_fill) {
        pick = static_cast<int>(v);
        best_fill = fill;
      }
    }
    const std::size_t sp = static_cast<std::size_t>(pick);
    width = std::max(width, static_cast<double>(adj[sp].size()));
    const std::vector<int> nb(adj[sp].begin(), adj[sp].end());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        add_edge(adj, nb[i], nb[j]);
      }
    }
    for (const int w : nb) adj[static_cast<std::size_t>(w)].erase(pick);
    adj[sp].clear();
    gone[sp] = true;
  }
  return width;
}

std::vector<const Polynomial*> bodies_of(const Problem& p) {
  std::vector<const Polynomial*> bodies{&p.objective};
  for (const Constraint& c : p.constraints) bodies.push_back(&c.body);
  return bodies;
}

std::set<Monomial, MonomialGradedLess> distinct_monomials(const Problem& p) {
  std::set<Monomial, MonomialGradedLess> monos;
  for (const Polynomial* body : bodies_of(p)) {
    for (const auto& [m, c] : body->terms()) {
      if (!m.is_one()) monos.insert(m);
    }
  }
  return monos;
}

}  // namespace

GraphStats graph_stats(const std::vector<std::vector<int>>& adj) {
  GraphStats s;
  const std::size_t n = adj.size();
  double m2 = 0.0;
  for (const auto& nb : adj) m2 += static_cast<double>(nb.size());
  if (n >= 2) {
    s.density = m2 / (static_cast<double>(n) * static_cast<double>(n - 1));
  }
  s.modularity = greedy_modularity(adj);

  std::vector<std::set<int>> sets(n);
  for (std::size_t v = 0; v < n; ++v) sets[v].insert(adj[v].begin(), adj[v].end());
  s.treewidth = min_fill_treewidth(sets);

  double triples = 0.0;
  double triangles = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double d = static_cast<double>(adj[v].size());
    triples += d * (d - 1.0) / 2.0;
    for (const int a : adj[v]) {
      for (const int b : adj[v]) {
        if (a < b && sets[static_cast<std::size_t>(a)].count(b)) ++triangles;
      }
    }
  }
  triangles /= 3.0;  // counted once per vertex of each triangle
  if (triples > 0.0) s.transitivity = 3.0 * triangles / triples;
  return s;
}

std::vector<std::vector<int>> variable_interaction_graph(const Problem& p) {
  std::vector<std::set<int>> adj(static_cast<std::size_t>(p.num_vars));
  for (const Polynomial* body : bodies_of(p)) {
    for (const auto& [m, c] : body->terms()) {
      const std::vector<int> support = m.support();
      for (std::size_t a = 0; a < support.size(); ++a) {
        for (std::size_t b = a + 1; b < support.size(); ++b) {
          add_edge(adj, support[a], support[b]);
        }
      }
    }
  }
  return to_lists(adj);
}

std::vector<std::vector<int>> constraint_monomial_graph(const Problem& p) {
  const std::set<Monomial, MonomialGradedLess> monos = distinct_monomials(p);
  std::map<Monomial, int, MonomialGradedLess> index;
  const std::vector<const Polynomial*> bodies = bodies_of(p);
  const int nb = static_cast<int>(bodies.size());
  int next = nb;
  for (const Monomial& m : monos) index.emplace(m, next++);

  std::vector<std::set<int>> adj(static_cast<std::size_t>(next));
  for (int b = 0; b < nb; ++b) {
    for (const auto& [m, c] : bodies[static_cast<std::size_t>(b)]->terms()) {
      if (!m.is_one()) add_edge(adj, b, index.at(m));
    }
  }
  return to_lists(adj);
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = {
      "n_vars",
      "var_density_variance",
      "range_mean",
      "range_median",
      "range_variance",
      "appearance_mean",
      "appearance_variance",
      "pct_vars_not_in_deg2",
      "pct_vars_not_in_deg3",
      "n_constraints",
      "pct_eq_constraints",
      "pct_linear_constraints",
      "pct_quadratic_constraints",
      "n_monomials",
      "pct_linear_monomials",
      "pct_quadratic_monomials",
      "pct_linear_relax_columns",
      "pct_quadratic_relax_columns",
      "monomials_per_constraint_mean",
      "pct_monomials_in_objective",
      "coef_mean",
      "coef_variance",
      "degree",
      "monomial_density",
      "vars_per_constraint",
      "vars_per_degree",
      "aux_per_constraint",
      "monomials_per_constraint_ratio",
      "vig_density",
      "vig_modularity",
      "vig_treewidth",
      "vig_transitivity",
      "cmig_density",
      "cmig_modularity",
      "cmig_treewidth",
      "cmig_transitivity",
  };
  return names;
}

std::vector<double> extract_features(const Problem& p) {
  const std::size_t n = static_cast<std::size_t>(p.num_vars);
  const std::set<Monomial, MonomialGradedLess> monos = distinct_monomials(p);
  const double nm = static_cast<double>(monos.size());
  const double ncons = static_cast<double>(p.constraints.size());

  std::vector<double> appearances(n, 0.0);
  std::vector<bool> in_deg2(n, false), in_deg3(n, false);
  for (const Monomial& m : monos) {
    for (const int j : m.support()) {
      const std::size_t sj = static_cast<std::size_t>(j);
      appearances[sj] += 1.0;
      if (m.degree() >= 2) in_deg2[sj] = true;
      if (m.degree() >= 3) in_deg3[sj] = true;
    }
  }
  std::vector<double> densities(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) densities[j] = ratio(appearances[j], nm);

  std::vector<double> ranges(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) ranges[j] = p.box.hi[j] - p.box.lo[j];

  double not2 = 0.0, not3 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!in_deg2[j]) ++not2;
    if (!in_deg3[j]) ++not3;
  }

  double eq = 0.0, lin_cons = 0.0, quad_cons = 0.0;
  for (const Constraint& c : p.constraints) {
    if (c.sense == Sense::Eq) ++eq;
    if (c.body.degree() <= 1) ++lin_cons;
    if (c.body.degree() == 2) ++quad_cons;
  }

  double lin_mono = 0.0, quad_mono = 0.0;
  int max_degree = 0;
  for (const Monomial& m : monos) {
    if (m.degree() == 1) ++lin_mono;
    if (m.degree() == 2) ++quad_mono;
    max_degree = std::max(max_degree, m.degree());
  }

  const LinearRelaxation relax = build_relaxation(p, p.box, compute_jsets(p));
  const double naux = static_cast<double>(relax.num_cols() - relax.num_x);
  double quad_aux = 0.0;
  for (int c = relax.num_x; c < relax.num_cols(); ++c) {
    if (relax.columns[static_cast<std::size_t>(c)].degree() == 2) ++quad_aux;
  }

  std::vector<double> per_cons_share;
  for (const Constraint& c : p.constraints) {
    double k = 0.0;
    for (const auto& [m, coef] : c.body.terms()) {
      if (!m.is_one()) ++k;
    }
    per_cons_share.push_back(ratio(k, nm));
  }
  double obj_monos = 0.0;
  for (const auto& [m, coef] : p.objective.terms()) {
    if (!m.is_one()) ++obj_monos;
  }

  std::vector<double> coefs;
  for (const auto& [m, c] : p.objective.terms()) coefs.push_back(c);
  for (const Constraint& c : p.constraints) {
    for (const auto& [m, v] : c.body.terms()) coefs.push_back(v);
  }

  // C(n + degree - 1, degree), the generator's sampling pool size.
  double pool = 1.0;
  for (int i = 1; i <= max_degree; ++i) {
    pool *= static_cast<double>(p.num_vars - 1 + i) / static_cast<double>(i);
  }

  const GraphStats vig = graph_stats(variable_interaction_graph(p));
  const GraphStats cmig = graph_stats(constraint_monomial_graph(p));

  std::vector<double> f;
  f.push_back(static_cast<double>(p.num_vars));
  f.push_back(variance_of(densities));
  f.push_back(mean_of(ranges));
  f.push_back(median_of(ranges));
  f.push_back(variance_of(ranges));
  f.push_back(mean_of(appearances));
  f.push_back(variance_of(appearances));
  f.push_back(ratio(not2, static_cast<double>(n)));
  f.push_back(ratio(not3, static_cast<double>(n)));
  f.push_back(ncons);
  f.push_back(ratio(eq, ncons));
  f.push_back(ratio(lin_cons, ncons));
  f.push_back(ratio(quad_cons, ncons));
  f.push_back(nm);
  f.push_back(ratio(lin_mono, nm));
  f.push_back(ratio(quad_mono, nm));
  f.push_back(ratio(static_cast<double>(p.num_vars),
                    static_cast<double>(relax.num_cols())));
  f.push_back(ratio(quad_aux, static_cast<double>(relax.num_cols())));
  f.push_back(mean_of(per_cons_share));
  f.push_back(ratio(obj_monos, nm));
  f.push_back(mean_of(coefs));
  f.push_back(variance_of(coefs));
  f.push_back(static_cast<double>(max_degree));
  f.push_back(ratio(nm, pool));
  f.push_back(ratio(static_cast<double>(p.num_vars), ncons));
  f.push_back(ratio(static_cast<double>(p.num_vars),
                    static_cast<double>(max_degree)));
  f.push_back(ratio(naux, ncons));
  f.push_back(ratio(nm, ncons));
  f.push_back(vig.density);
  f.push_back(vig.modularity);
  f.push_back(vig.treewidth);
  f.push_back(vig.transitivity);
  f.push_back(cmig.density);
  f.push_back(cmig.modularity);
  f.push_back(cmig.treewidth);
  f.push_back(cmig.transitivity);
  return f;
}

void write_features_csv(const std::string& path,
                        const std::vector<std::string>& instances,
                        const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "instance";
  for (const std::string& name : feature_names()) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < instances.size(); ++i) {
    out << instances[i];
    for (const double v : rows[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv " + path);
  {
    std::string expected = "instance";
    for (const std::string& name : feature_names()) expected += "," + name;
    if (line != expected) {
      throw std::runtime_error("unexpected features header in " + path);
    }
  }
  std::vector<std::string> instances;
  std::vector<std::vector<double>> rows;
  const std::size_t width = feature_names().size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = line.find(',');
    if (pos == std::string::npos) throw std::runtime_error("bad row: " + line);
    instances.push_back(line.substr(0, pos));
    ++pos;
    while (pos <= line.size()) {
      std::size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      const std::string field = line.substr(pos, next - pos);
      double v = 0.0;
      const auto [q, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc{} || q != field.data() + field.size()) {
        throw std::runtime_error("bad numeric field '" + field + "'");
      }
      row.push_back(v);
      pos = next + 1;
    }
    if (row.size() != width) throw std::runtime_error("bad row width: " + line);
    rows.push_back(std::move(row));
  }
  return {std::move(instances), std::move(rows)};
}

}  // namespace polyopt
