#include "ppe/causal/pc.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ppe/diagnostics.hpp"

namespace ppe::causal {

Pdag::Pdag(int nodes)
    : nodes_(nodes),
      adj_(static_cast<std::size_t>(nodes * nodes), false),
      arrow_(static_cast<std::size_t>(nodes * nodes), false) {}

Pdag Pdag::complete(int nodes) {
  Pdag g(nodes);
  for (int u = 0; u < nodes; ++u) {
    for (int v = u + 1; v < nodes; ++v) g.add_edge(u, v);
  }
  return g;
}

Pdag Pdag::from_dag(const Dag& dag) {
  Pdag g(dag.nodes);
  for (const auto& [u, v] : dag.edges) {
    g.add_edge(u, v);
    g.orient(u, v);
  }
  return g;
}

void Pdag::add_edge(int u, int v) {
  if (u == v) throw std::invalid_argument("self loops are not allowed");
  adj_[idx(u, v)] = adj_[idx(v, u)] = true;
}

void Pdag::remove_edge(int u, int v) {
  adj_[idx(u, v)] = adj_[idx(v, u)] = false;
  arrow_[idx(u, v)] = arrow_[idx(v, u)] = false;
}

void Pdag::orient(int u, int v) {
  if (!adjacent(u, v)) throw std::logic_error("orienting a missing edge");
  arrow_[idx(u, v)] = true;
  arrow_[idx(v, u)] = false;
}

void Pdag::unorient(int u, int v) { arrow_[idx(u, v)] = arrow_[idx(v, u)] = false; }

std::vector<int> Pdag::neighbors(int u) const {
  std::vector<int> out;
  for (int v = 0; v < nodes_; ++v) {
    if (v != u && adjacent(u, v)) out.push_back(v);
  }
  return out;
}

std::vector<std::pair<int, int>> Pdag::skeleton() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < nodes_; ++u) {
    for (int v = u + 1; v < nodes_; ++v) {
      if (adjacent(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

namespace {

// Calls fn on each size-k subset of items in lexicographic order until fn
// returns true.
template <class Fn>
bool for_each_subset(const std::vector<int>& items, int k, Fn&& fn) {
  const auto n = static_cast<int>(items.size());
  if (k > n) return false;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  std::vector<int> subset(static_cast<std::size_t>(k));
  while (true) {
    for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = items[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
    if (fn(subset)) return true;
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return false;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::pair<int, int> key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

} // namespace

void apply_meek_rules(Pdag& g) {
  const int n = g.nodes();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b || !g.undirected(a, b)) continue;
        bool orient = false;
        for (int c = 0; c < n && !orient; ++c) {
          if (c == a || c == b) continue;
          // R1: c -> a - b, c and b not adjacent.
          if (g.directed(c, a) && !g.adjacent(c, b)) orient = true;
          // R2: a -> c -> b with a - b.
          if (g.directed(a, c) && g.directed(c, b)) orient = true;
        }
        // R3: a - c -> b, a - d -> b, c and d not adjacent.
        for (int c = 0; c < n && !orient; ++c) {
          if (c == a || c == b || !g.undirected(a, c) || !g.directed(c, b)) continue;
          for (int d = c + 1; d < n && !orient; ++d) {
            if (d == a || d == b || !g.undirected(a, d) || !g.directed(d, b)) continue;
            if (!g.adjacent(c, d)) orient = true;
          }
        }
        if (orient) {
          g.orient(a, b);
          changed = true;
        }
      }
    }
  }
}

PcResult pc_search(int nodes, const CiOracle& oracle, int max_cond_size) {
  if (nodes < 2) throw std::invalid_argument("PC needs at least two nodes");
  if (max_cond_size < 0 || max_cond_size > nodes - 2) {
    throw std::invalid_argument("max_cond_size must lie in [0, nodes - 2]");
  }
  PcResult res{Pdag::complete(nodes), {}, 0, 0};
  Pdag& g = res.graph;

  for (int level = 0; level <= max_cond_size; ++level) {
    std::vector<std::vector<int>> snapshot(static_cast<std::size_t>(nodes));
    bool any = false;
    for (int u = 0; u < nodes; ++u) {
      snapshot[static_cast<std::size_t>(u)] = g.neighbors(u);
      if (static_cast<int>(snapshot[static_cast<std::size_t>(u)].size()) - 1 >= level) any = true;
    }
    if (!any) break;
    for (int u = 0; u < nodes; ++u) {
      for (int v : snapshot[static_cast<std::size_t>(u)]) {
        if (!g.adjacent(u, v)) continue;
        std::vector<int> pool;
        for (int w : snapshot[static_cast<std::size_t>(u)]) {
          if (w != v) pool.push_back(w);
        }
        for_each_subset(pool, level, [&](const std::vector<int>& cond) {
          ++res.tests;
          if (!oracle(u, v, cond)) return false;
          g.remove_edge(u, v);
          res.sepsets[key(u, v)] = cond;
          return true;
        });
      }
    }
  }

  // Collider orientation from separating sets.
  std::vector<std::pair<int, int>> proposals;
  for (int k = 0; k < nodes; ++k) {
    const auto nb = g.neighbors(k);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const int a = nb[i];
        const int b = nb[j];
        if (g.adjacent(a, b)) continue;
        const auto it = res.sepsets.find(key(a, b));
        const bool in_sep = it != res.sepsets.end() &&
                            std::find(it->second.begin(), it->second.end(), k) != it->second.end();
        if (!in_sep) {
          proposals.emplace_back(a, k);
          proposals.emplace_back(b, k);
        }
      }
    }
  }
  std::sort(proposals.begin(), proposals.end());
  proposals.erase(std::unique(proposals.begin(), proposals.end()), proposals.end());
  for (const auto& [a, k] : proposals) {
    const bool reverse = std::binary_search(proposals.begin(), proposals.end(), std::make_pair(k, a));
    if (reverse) {
      if (a < k) {
        ++res.conflicts;
        warn(WarningKind::orientation_conflict,
             "conflicting orientation on edge " + std::to_string(a) + " - " + std::to_string(k));
      }
      continue;
    }
    g.orient(a, k);
  }

  apply_meek_rules(g);
  return res;
}

AdjacencyScore score_adjacencies(const Dag& truth, const Pdag& found) {
  AdjacencyScore s;
  s.true_edges = truth.edges.size();
  for (const auto& [u, v] : found.skeleton()) {
    ++s.found_edges;
    if (truth.adjacent(u, v)) ++s.hits;
  }
  if (s.found_edges > 0) s.precision = static_cast<double>(s.hits) / static_cast<double>(s.found_edges);
  if (s.true_edges > 0) s.recall = static_cast<double>(s.hits) / static_cast<double>(s.true_edges);
  return s;
}

void write_dot(std::ostream& out, const Pdag& g, const std::string& name,
               const std::vector<bool>& costly) {
  out << "digraph " << name << " {\n";
  for (int v = 0; v < g.nodes(); ++v) {
    const bool is_costly = static_cast<std::size_t>(v) < costly.size() && costly[static_cast<std::size_t>(v)];
    out << "  X" << v << (is_costly ? " [style=filled, fillcolor=lightgrey];\n" : ";\n");
  }
  for (const auto& [u, v] : g.skeleton()) {
    if (g.directed(u, v)) {
      out << "  X" << u << " -> X" << v << ";\n";
    } else if (g.directed(v, u)) {
      out << "  X" << v << " -> X" << u << ";\n";
    } else {
      out << "  X" << u << " -> X" << v << " [dir=none];\n";
    }
  }
  out << "}\n";
}

} // namespace ppe::causal
