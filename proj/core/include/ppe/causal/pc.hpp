#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ppe/causal/scm.hpp"

namespace ppe::causal {

// Partially directed graph. An edge u - v is undirected unless exactly one of
// arrow(u, v), arrow(v, u) is set.
class Pdag {
public:
  explicit Pdag(int nodes = 0);
  static Pdag complete(int nodes);
  static Pdag from_dag(const Dag& dag);

  int nodes() const { return nodes_; }
  bool adjacent(int u, int v) const { return adj_[idx(u, v)]; }
  bool directed(int u, int v) const { return adjacent(u, v) && arrow_[idx(u, v)] && !arrow_[idx(v, u)]; }
  bool undirected(int u, int v) const { return adjacent(u, v) && !arrow_[idx(u, v)] && !arrow_[idx(v, u)]; }

  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  void orient(int u, int v);
  void unorient(int u, int v);

  std::vector<int> neighbors(int u) const;
  std::vector<std::pair<int, int>> skeleton() const;  // u < v
  std::size_t edge_count() const { return skeleton().size(); }

  friend bool operator==(const Pdag&, const Pdag&) = default;

private:
  std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u * nodes_ + v); }
  int nodes_;
  std::vector<bool> adj_;
  std::vector<bool> arrow_;
};

// Answers "a _||_ b | cond?".
using CiOracle = std::function<bool(int, int, const std::vector<int>&)>;

struct PcResult {
  Pdag graph;
  std::map<std::pair<int, int>, std::vector<int>> sepsets;
  std::size_t tests{0};
  std::size_t conflicts{0};
};

// PC-stable skeleton search, v-structures and Meek rules R1-R3.
PcResult pc_search(int nodes, const CiOracle& oracle, int max_cond_size);

void apply_meek_rules(Pdag& graph);

struct AdjacencyScore {
  std::size_t true_edges{0};
  std::size_t found_edges{0};
  std::size_t hits{0};
  double precision{1.0};
  double recall{1.0};
};

AdjacencyScore score_adjacencies(const Dag& truth, const Pdag& found);

void write_dot(std::ostream& out, const Pdag& graph, const std::string& name,
               const std::vector<bool>& costly);

} // namespace ppe::causal
