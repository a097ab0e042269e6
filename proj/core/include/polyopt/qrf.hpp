#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyopt/metrics.hpp"

namespace polyopt {

struct QrfTreeNode {
  /// Split feature, or -1 for a leaf.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  /// Leaf only: training sample indices, repeated per bootstrap multiplicity.
  std::vector<int> samples;
};

struct QrfTree {
  std::vector<QrfTreeNode> nodes;
  /// Bootstrap multiplicity per training sample; zero marks out-of-bag.
  std::vector<int> bootstrap_count;
};

/// Quantile regression forest over a scalar target. Trees split on variance
/// reduction of the log target; leaves keep the raw target multiset, and
/// prediction reads a weighted empirical quantile with each tree
/// contributing 1/leaf-size weight per stored sample.
struct QuantileForest {
  double tau = 0.3;
  int num_features = 0;
  std::vector<double> targets;
  std::vector<QrfTree> trees;
};

QuantileForest train_forest(const std::vector<std::vector<double>>& x,
                            const std::vector<double>& y, double tau,
                            int num_trees, std::uint64_t seed);

double predict_quantile(const QuantileForest& forest,
                        const std::vector<double>& x);

/// Prediction for training sample `i` using only trees whose bootstrap
/// missed it; falls back to the full forest when every tree saw it.
double predict_quantile_oob(const QuantileForest& forest,
                            const std::vector<double>& x, int i);

/// One forest per configuration, predicting the pace of a run from instance
/// features; the configuration with the smallest predicted tau-quantile
/// wins. Conservative quantiles (tau < 0.5) penalize configurations whose
/// pace distribution has a heavy right tail.
struct ConfigSelector {
  double tau = 0.3;
  std::vector<std::string> configs;
  std::vector<std::string> training_instances;
  std::vector<QuantileForest> forests;
};

/// Trains on a rectangular run grid; `instances`/`x` supply one feature row
/// per training instance (any order, matched by name).
ConfigSelector train_selector(const std::vector<RunRecord>& records,
                              const std::vector<std::string>& instances,
                              const std::vector<std::vector<double>>& x,
                              double tau, int num_trees, std::uint64_t seed);

/// Predicted pace quantile per configuration, in selector config order.
/// Instances that were part of training are scored out-of-bag.
std::vector<double> predict_paces(const ConfigSelector& sel,
                                  const std::vector<double>& x,
                                  const std::string& instance);

/// Configuration with the smallest predicted quantile; ties keep the
/// earlier configuration.
std::string select_config(const ConfigSelector& sel,
                          const std::vector<double>& x,
                          const std::string& instance);

/// Best hindsight configuration among one instance's records: smallest
/// pace, then smallest gap (a missing gap loses), then input order.
std::string oracle_config(const std::vector<RunRecord>& instance_records);

void save_selector(const std::string& path, const ConfigSelector& sel);
ConfigSelector load_selector(const std::string& path);

}  // namespace polyopt
