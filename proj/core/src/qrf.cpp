#include "polyopt/qrf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace polyopt {

namespace {

constexpr int kMinLeaf = 5;
constexpr double kGainTol = 1e-12;

int uniform_int_draw(std::mt19937_64& g, int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(g() % span);
}

struct TreeBuilder {
  const std::vector<std::vector<double>>& x;
  const std::vector<double>& logy;
  int mtry;
  std::mt19937_64& rng;
  QrfTree& tree;

  int build(std::vector<int> samples) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const std::size_t n = samples.size();

    double sum = 0.0, sum2 = 0.0;
    for (const int i : samples) {
      const double v = logy[static_cast<std::size_t>(i)];
      sum += v;
      sum2 += v * v;
    }
    const double sse_total = sum2 - sum * sum / static_cast<double>(n);
    if (n < 2 * kMinLeaf || sse_total <= kGainTol) {
      tree.nodes[static_cast<std::size_t>(id)].samples = std::move(samples);
      return id;
    }

    const int p = static_cast<int>(x[0].size());
    std::vector<int> feats(static_cast<std::size_t>(p));
    std::iota(feats.begin(), feats.end(), 0);
    for (int i = 0; i < mtry; ++i) {
      const int j = uniform_int_draw(rng, i, p - 1);
      std::swap(feats[static_cast<std::size_t>(i)], feats[static_cast<std::size_t>(j)]);
    }

    int best_feat = -1;
    double best_thresh = 0.0;
    double best_gain = kGainTol;
    std::vector<int> order(samples);
    for (int fi = 0; fi < mtry; ++fi) {
      const int f = feats[static_cast<std::size_t>(fi)];
      const std::size_t sf = static_cast<std::size_t>(f);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double va = x[static_cast<std::size_t>(a)][sf];
        const double vb = x[static_cast<std::size_t>(b)][sf];
        if (va != vb) return va < vb;
        return a < b;
      });
      double lsum = 0.0, lsum2 = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double v = logy[static_cast<std::size_t>(order[k])];
        lsum += v;
        lsum2 += v * v;
        const double xa = x[static_cast<std::size_t>(order[k])][sf];
        const double xb = x[static_cast<std::size_t>(order[k + 1])][sf];
        if (xa == xb) continue;
        const std::size_t nl = k + 1;
        const std::size_t nr = n - nl;
        if (nl < kMinLeaf || nr < kMinLeaf) continue;
        const double rsum = sum - lsum;
        const double rsum2 = sum2 - lsum2;
        const double sse = (lsum2 - lsum * lsum / static_cast<double>(nl)) +
                           (rsum2 - rsum * rsum / static_cast<double>(nr));
        const double gain = sse_total - sse;
        if (gain > best_gain) {
          best_gain = gain;
          best_feat = f;
          best_thresh = 0.5 * (xa + xb);
        }
      }
    }
    if (best_feat < 0) {
      tree.nodes[static_cast<std::size_t>(id)].samples = std::move(samples);
      return id;
    }

    std::vector<int> left, right;
    for (const int i : samples) {
      if (x[static_cast<std::size_t>(i)][static_cast<std::size_t>(best_feat)] <=
          best_thresh) {
        left.push_back(i);
      } else {
        right.push_back(i);
      }
    }
    tree.nodes[static_cast<std::size_t>(id)].feature = best_feat;
    tree.nodes[static_cast<std::size_t>(id)].threshold = best_thresh;
    const int l = build(std::move(left));
    const int r = build(std::move(right));
    tree.nodes[static_cast<std::size_t>(id)].left = l;
    tree.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }
};

const QrfTreeNode& leaf_of(const QrfTree& tree, const std::vector<double>& x) {
  int id = 0;
  while (tree.nodes[static_cast<std::size_t>(id)].feature >= 0) {
    const QrfTreeNode& nd = tree.nodes[static_cast<std::size_t>(id)];
    id = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                 : nd.right;
  }
  return tree.nodes[static_cast<std::size_t>(id)];
}

double weighted_quantile(const QuantileForest& forest,
                         const std::vector<double>& x,
                         const std::vector<const QrfTree*>& trees) {
  std::map<int, double> weight;
  for (const QrfTree* tree : trees) {
    const QrfTreeNode& leaf = leaf_of(*tree, x);
    const double w = 1.0 / static_cast<double>(leaf.samples.size());
    for (const int i : leaf.samples) weight[i] += w;
  }
  std::vector<std::pair<double, double>> dist;  // (target, weight)
  double total = 0.0;
  for (const auto& [i, w] : weight) {
    dist.emplace_back(forest.targets[static_cast<std::size_t>(i)], w);
    total += w;
  }
  std::sort(dist.begin(), dist.end());
  double cum = 0.0;
  for (const auto& [v, w] : dist) {
    cum += w;
    if (cum >= forest.tau * total - 1e-12) return v;
  }
  return dist.empty() ? 0.0 : dist.back().first;
}

}  // namespace

QuantileForest train_forest(const std::vector<std::vector<double>>& x,
                            const std::vector<double>& y, double tau,
                            int num_trees, std::uint64_t seed) {
  if (x.empty() || x.size() != y.size()) {
    throw std::invalid_argument("training data shape mismatch");
  }
  QuantileForest forest;
  forest.tau = tau;
  forest.num_features = static_cast<int>(x[0].size());
  forest.targets = y;

  const int n = static_cast<int>(x.size());
  std::vector<double> logy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    logy[i] = std::log(std::max(y[i], 1e-12));
  }
  const int mtry =
      (forest.num_features + 2) / 3 > 0 ? (forest.num_features + 2) / 3 : 1;

  for (int t = 0; t < num_trees; ++t) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
    QrfTree tree;
    tree.bootstrap_count.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      ++tree.bootstrap_count[static_cast<std::size_t>(
          uniform_int_draw(rng, 0, n - 1))];
    }
    std::vector<int> samples;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < tree.bootstrap_count[static_cast<std::size_t>(i)]; ++k) {
        samples.push_back(i);
      }
    }
    TreeBuilder builder{x, logy, mtry, rng, tree};
    builder.build(std::move(samples));
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

double predict_quantile(const QuantileForest& forest,
                        const std::vector<double>& x) {
  std::vector<const QrfTree*> trees;
  for (const QrfTree& t : forest.trees) trees.push_back(&t);
  return weighted_quantile(forest, x, trees);
}

double predict_quantile_oob(const QuantileForest& forest,
                            const std::vector<double>& x, int i) {
  std::vector<const QrfTree*> trees;
  for (const QrfTree& t : forest.trees) {
    if (t.bootstrap_count[static_cast<std::size_t>(i)] == 0) trees.push_back(&t);
  }
  if (trees.empty()) return predict_quantile(forest, x);
  return weighted_quantile(forest, x, trees);
}

ConfigSelector train_selector(const std::vector<RunRecord>& records,
                              const std::vector<std::string>& instances,
                              const std::vector<std::vector<double>>& x,
                              double tau, int num_trees, std::uint64_t seed) {
  ConfigSelector sel;
  sel.tau = tau;

  std::map<std::string, std::size_t> feature_row;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    feature_row.emplace(instances[i], i);
  }

  std::map<std::string, std::size_t> config_of, instance_of;
  for (const RunRecord& r : records) {
    if (config_of.emplace(r.config, sel.configs.size()).second) {
      sel.configs.push_back(r.config);
    }
    if (instance_of.emplace(r.instance, sel.training_instances.size()).second) {
      sel.training_instances.push_back(r.instance);
      if (!feature_row.count(r.instance)) {
        throw std::runtime_error("no feature row for instance " + r.instance);
      }
    }
  }

  std::vector<std::vector<double>> xt;
  for (const std::string& name : sel.training_instances) {
    xt.push_back(x[feature_row.at(name)]);
  }

  const std::size_t ni = sel.training_instances.size();
  const std::size_t nc = sel.configs.size();
  std::vector<std::vector<double>> pace(nc, std::vector<double>(ni, 0.0));
  std::vector<std::vector<bool>> seen(nc, std::vector<bool>(ni, false));
  for (const RunRecord& r : records) {
    const std::size_t c = config_of.at(r.config);
    const std::size_t i = instance_of.at(r.instance);
    if (seen[c][i]) {
      throw std::runtime_error("duplicate record for " + r.instance + " / " +
                               r.config);
    }
    seen[c][i] = true;
    pace[c][i] = record_pace(r);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t i = 0; i < ni; ++i) {
      if (!seen[c][i]) {
        throw std::runtime_error("missing record for " + sel.training_instances[i] +
                                 " / " + sel.configs[c]);
      }
    }
  }

  for (std::size_t c = 0; c < nc; ++c) {
    sel.forests.push_back(train_forest(xt, pace[c], tau, num_trees,
                                       seed + 1000003 * c));
  }
  return sel;
}

std::vector<double> predict_paces(const ConfigSelector& sel,
                                  const std::vector<double>& x,
                                  const std::string& instance) {
  int train_index = -1;
  for (std::size_t i = 0; i < sel.training_instances.size(); ++i) {
    if (sel.training_instances[i] == instance) {
      train_index = static_cast<int>(i);
      break;
    }
  }
  std::vector<double> out;
  for (const QuantileForest& forest : sel.forests) {
    out.push_back(train_index >= 0
                      ? predict_quantile_oob(forest, x, train_index)
                      : predict_quantile(forest, x));
  }
  return out;
}

std::string select_config(const ConfigSelector& sel,
                          const std::vector<double>& x,
                          const std::string& instance) {
  const std::vector<double> paces = predict_paces(sel, x, instance);
  std::size_t best = 0;
  for (std::size_t c = 1; c < paces.size(); ++c) {
    if (paces[c] < paces[best]) best = c;
  }
  return sel.configs[best];
}

std::string oracle_config(const std::vector<RunRecord>& instance_records) {
  if (instance_records.empty()) {
    throw std::invalid_argument("no records to rank");
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < instance_records.size(); ++c) {
    const RunRecord& a = instance_records[c];
    const RunRecord& b = instance_records[best];
    const double pa = record_pace(a);
    const double pb = record_pace(b);
    if (pa < pb) {
      best = c;
    } else if (pa == pb) {
      const double inf = std::numeric_limits<double>::infinity();
      if (a.gap.value_or(inf) < b.gap.value_or(inf)) best = c;
    }
  }
  return instance_records[best].config;
}

void save_selector(const std::string& path, const ConfigSelector& sel) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "QRF1\n";
  out << "tau " << format_double(sel.tau) << '\n';
  out << "configs " << sel.configs.size() << '\n';
  for (const std::string& c : sel.configs) out << c << '\n';
  out << "instances " << sel.training_instances.size() << '\n';
  for (const std::string& i : sel.training_instances) out << i << '\n';
  for (const QuantileForest& forest : sel.forests) {
    out << "forest " << forest.num_features << ' ' << forest.trees.size() << '\n';
    out << "targets";
    for (const double t : forest.targets) out << ' ' << format_double(t);
    out << '\n';
    for (const QrfTree& tree : forest.trees) {
      out << "tree " << tree.nodes.size() << '\n';
      out << "bag";
      for (const int c : tree.bootstrap_count) out << ' ' << c;
      out << '\n';
      for (const QrfTreeNode& nd : tree.nodes) {
        out << nd.feature << ' ' << format_double(nd.threshold) << ' ' << nd.left
            << ' ' << nd.right << ' ' << nd.samples.size();
        for (const int s : nd.samples) out << ' ' << s;
        out << '\n';
      }
    }
  }
}

namespace {

std::runtime_error bad_model(const std::string& path) {
  return std::runtime_error("malformed model file " + path);
}

}  // namespace

ConfigSelector load_selector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "QRF1") throw bad_model(path);

  ConfigSelector sel;
  std::string word;
  if (!(in >> word >> sel.tau) || word != "tau") throw bad_model(path);
  std::size_t nc = 0;
  if (!(in >> word >> nc) || word != "configs") throw bad_model(path);
  sel.configs.resize(nc);
  for (std::string& c : sel.configs) {
    if (!(in >> c)) throw bad_model(path);
  }
  std::size_t ni = 0;
  if (!(in >> word >> ni) || word != "instances") throw bad_model(path);
  sel.training_instances.resize(ni);
  for (std::string& i : sel.training_instances) {
    if (!(in >> i)) throw bad_model(path);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    QuantileForest forest;
    forest.tau = sel.tau;
    std::size_t num_trees = 0;
    if (!(in >> word >> forest.num_features >> num_trees) || word != "forest") {
      throw bad_model(path);
    }
    if (!(in >> word) || word != "targets") throw bad_model(path);
    forest.targets.resize(ni);
    for (double& t : forest.targets) {
      if (!(in >> t)) throw bad_model(path);
    }
    for (std::size_t t = 0; t < num_trees; ++t) {
      QrfTree tree;
      std::size_t num_nodes = 0;
      if (!(in >> word >> num_nodes) || word != "tree") throw bad_model(path);
      if (!(in >> word) || word != "bag") throw bad_model(path);
      tree.bootstrap_count.resize(ni);
      for (int& b : tree.bootstrap_count) {
        if (!(in >> b)) throw bad_model(path);
      }
      tree.nodes.resize(num_nodes);
      for (QrfTreeNode& nd : tree.nodes) {
        std::size_t ns = 0;
        if (!(in >> nd.feature >> nd.threshold >> nd.left >> nd.right >> ns)) {
          throw bad_model(path);
        }
        nd.samples.resize(ns);
        for (int& s : nd.samples) {
          if (!(in >> s)) throw bad_model(path);
        }
      }
      forest.trees.push_back(std::move(tree));
    }
    sel.forests.push_back(std::move(forest));
  }
  return sel;
}

}  // namespace polyopt
