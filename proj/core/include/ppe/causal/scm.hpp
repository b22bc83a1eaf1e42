#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ppe/rng.hpp"

namespace ppe::causal {

using Edge = std::pair<int, int>;

struct Dag {
  int nodes{0};
  std::vector<Edge> edges;     // (parent, child)
  std::vector<bool> costly;

  bool has_edge(int from, int to) const;
  bool adjacent(int u, int v) const;
  std::vector<int> parents(int v) const;
  std::vector<int> cheap_nodes() const;
  std::vector<int> costly_nodes() const;
  bool is_acyclic() const;
};

// Linear-Gaussian structural model: X_j = bias_j + sum_i w_ij X_i + N(0, sd^2).
struct LinearScm {
  Dag dag;
  Eigen::MatrixXd weights;  // weights(i, j) for edge i -> j
  Eigen::VectorXd bias;
  double noise_sd{0.4};
  std::vector<int> order;   // topological order

  Eigen::MatrixXd sample(long rows, CounterRng& rng) const;
};

struct ScmSpec {
  int nodes{6};
  double edge_prob{0.4};
  double noise_sd{0.4};
  int costly{3};
  double weight_lo{0.3};
  double weight_hi{1.0};
};

// Erdos-Renyi DAG over a random topological order with weights and biases
// uniform on [-hi, -lo] U [lo, hi]. The last `costly` node indices are costly.
LinearScm synth_scm(const ScmSpec& spec, std::uint64_t seed);

// d-separation of a and b given cond, via the moralized ancestral graph.
bool d_separated(const Dag& dag, int a, int b, const std::vector<int>& cond);

} // namespace ppe::causal
