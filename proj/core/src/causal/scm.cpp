#include "ppe/causal/scm.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ppe::causal {

bool Dag::has_edge(int from, int to) const {
  return std::find(edges.begin(), edges.end(), Edge{from, to}) != edges.end();
}

bool Dag::adjacent(int u, int v) const { return has_edge(u, v) || has_edge(v, u); }

std::vector<int> Dag::parents(int v) const {
  std::vector<int> out;
  for (const auto& [p, c] : edges) {
    if (c == v) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Dag::cheap_nodes() const {
  std::vector<int> out;
  for (int v = 0; v < nodes; ++v) {
    if (!costly[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

std::vector<int> Dag::costly_nodes() const {
  std::vector<int> out;
  for (int v = 0; v < nodes; ++v) {
    if (costly[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

bool Dag::is_acyclic() const {
  std::vector<int> indeg(static_cast<std::size_t>(nodes), 0);
  for (const auto& e : edges) ++indeg[static_cast<std::size_t>(e.second)];
  std::vector<int> ready;
  for (int v = 0; v < nodes; ++v) {
    if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  }
  int seen = 0;
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    ++seen;
    for (const auto& [p, c] : edges) {
      if (p == v && --indeg[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    }
  }
  return seen == nodes;
}

Eigen::MatrixXd LinearScm::sample(long rows, CounterRng& rng) const {
  const int d = dag.nodes;
  Eigen::MatrixXd out(rows, d);
  for (long r = 0; r < rows; ++r) {
    for (int v : order) {
      double value = bias(v) + noise_sd * rng.normal();
      for (int p : dag.parents(v)) value += weights(p, v) * out(r, p);
      out(r, v) = value;
    }
  }
  return out;
}

LinearScm synth_scm(const ScmSpec& spec, std::uint64_t seed) {
  if (spec.nodes < 2 || spec.costly < 0 || spec.costly > spec.nodes) {
    throw std::invalid_argument("bad SCM specification");
  }
  if (!(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  CounterRng rng(seed, "scm");
  const auto signed_uniform = [&]() {
    const double mag = spec.weight_lo + (spec.weight_hi - spec.weight_lo) * rng.uniform();
    return rng.uniform() < 0.5 ? -mag : mag;
  };

  LinearScm scm;
  scm.dag.nodes = spec.nodes;
  scm.dag.costly.assign(static_cast<std::size_t>(spec.nodes), false);
  for (int v = spec.nodes - spec.costly; v < spec.nodes; ++v) {
    scm.dag.costly[static_cast<std::size_t>(v)] = true;
  }
  scm.noise_sd = spec.noise_sd;
  scm.order.resize(static_cast<std::size_t>(spec.nodes));
  std::iota(scm.order.begin(), scm.order.end(), 0);
  for (std::size_t i = scm.order.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(scm.order[i], scm.order[j]);
  }

  scm.weights = Eigen::MatrixXd::Zero(spec.nodes, spec.nodes);
  scm.bias.resize(spec.nodes);
  for (std::size_t i = 0; i < scm.order.size(); ++i) {
    for (std::size_t j = i + 1; j < scm.order.size(); ++j) {
      if (rng.uniform() < spec.edge_prob) {
        const int from = scm.order[i];
        const int to = scm.order[j];
        scm.dag.edges.emplace_back(from, to);
        scm.weights(from, to) = signed_uniform();
      }
    }
  }
  std::sort(scm.dag.edges.begin(), scm.dag.edges.end());
  for (int v = 0; v < spec.nodes; ++v) scm.bias(v) = signed_uniform();
  return scm;
}

bool d_separated(const Dag& dag, int a, int b, const std::vector<int>& cond) {
  const auto n = static_cast<std::size_t>(dag.nodes);
  std::vector<bool> keep(n, false);
  std::vector<int> stack{a, b};
  stack.insert(stack.end(), cond.begin(), cond.end());
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (keep[static_cast<std::size_t>(v)]) continue;
    keep[static_cast<std::size_t>(v)] = true;
    for (int p : dag.parents(v)) stack.push_back(p);
  }

  std::vector<std::vector<bool>> moral(n, std::vector<bool>(n, false));
  const auto link = [&](int u, int v) {
    moral[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
    moral[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true;
  };
  for (int v = 0; v < dag.nodes; ++v) {
    if (!keep[static_cast<std::size_t>(v)]) continue;
    const auto pa = dag.parents(v);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      link(pa[i], v);
      for (std::size_t j = i + 1; j < pa.size(); ++j) link(pa[i], pa[j]);
    }
  }

  std::vector<bool> blocked(n, false);
  for (int c : cond) blocked[static_cast<std::size_t>(c)] = true;
  std::vector<bool> seen(n, false);
  std::vector<int> frontier{a};
  seen[static_cast<std::size_t>(a)] = true;
  while (!frontier.empty()) {
    const int v = frontier.back();
    frontier.pop_back();
    if (v == b) return false;
    for (int u = 0; u < dag.nodes; ++u) {
      const auto uu = static_cast<std::size_t>(u);
      if (moral[static_cast<std::size_t>(v)][uu] && !seen[uu] && !blocked[uu] && keep[uu]) {
        seen[uu] = true;
        frontier.push_back(u);
      }
    }
  }
  return true;
}

} // namespace ppe::causal
