#pragma once

#include <string>
#include <vector>

#include "polyopt/poly.hpp"

namespace polyopt {

struct GraphStats {
  /// 2m / (v(v-1)); 0 for graphs with fewer than two vertices.
  double density = 0.0;
  /// Best Newman modularity seen along a greedy agglomerative merge
  /// sequence (singleton start, best-gain pair merged each step).
  double modularity = 0.0;
  /// Treewidth upper bound from min-fill elimination.
  double treewidth = 0.0;
  /// 3 * triangles / connected triples; 0 when there are no triples.
  double transitivity = 0.0;
};

/// `adj` is a symmetric adjacency list (no self loops).
GraphStats graph_stats(const std::vector<std::vector<int>>& adj);

/// Variables are vertices; co-occurrence in any monomial is an edge.
std::vector<std::vector<int>> variable_interaction_graph(const Problem& p);

/// Bipartite incidence of constraint bodies (objective included) and the
/// problem's distinct non-constant monomials. Its transitivity is
/// structurally zero; the column stays for schema stability.
std::vector<std::vector<int>> constraint_monomial_graph(const Problem& p);

/// Names of the fixed-order feature vector, aligned with
/// extract_features(). Ratios with a zero denominator are reported as 0.
/// Variances are population variances; coefficient statistics cover every
/// body term including constants, while monomial counts exclude the
/// constant monomial.
const std::vector<std::string>& feature_names();

std::vector<double> extract_features(const Problem& p);

void write_features_csv(const std::string& path,
                        const std::vector<std::string>& instances,
                        const std::vector<std::vector<double>>& rows);

/// Returns (instance names, feature rows); validates the header against
/// feature_names().
std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_features_csv(const std::string& path);

}  // namespace polyopt
