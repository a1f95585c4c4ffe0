// Brute-force reference implementations, independent of the library paths
// they check. Everything here is O(2^n)-ish and meant for n <= ~20.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "mixlab/graph.hpp"

namespace oracles {

using mixlab::Edge;
using mixlab::MultiGraph;
using mixlab::Vertex;
using mixlab::VertexSet;

inline VertexSet mask_to_set(std::uint32_t mask, int n) {
  VertexSet s;
  for (int v = 0; v < n; ++v)
    if (mask & (1u << v)) s.push_back(v);
  return s;
}

inline std::uint32_t set_to_mask(const VertexSet& s) {
  std::uint32_t mask = 0;
  for (Vertex v : s) mask |= 1u << v;
  return mask;
}

// Edge-scan counts, no shared code with the library CSR paths.
inline std::size_t brute_boundary(const MultiGraph& g, std::uint32_t mask) {
  std::size_t count = 0;
  for (const Edge& e : g.edge_list()) {
    const bool u_in = mask & (1u << e.u);
    const bool v_in = mask & (1u << e.v);
    if (u_in != v_in) ++count;
  }
  return count;
}

inline std::size_t brute_internal(const MultiGraph& g, std::uint32_t mask) {
  std::size_t count = 0;
  for (const Edge& e : g.edge_list())
    if ((mask & (1u << e.u)) && (mask & (1u << e.v))) ++count;
  return count;
}

inline std::size_t brute_degree_sum(const MultiGraph& g, std::uint32_t mask) {
  std::size_t total = 0;
  for (Vertex v = 0; v < g.order(); ++v)
    if (mask & (1u << v)) total += static_cast<std::size_t>(g.degree(v));
  return total;
}

inline bool brute_connected_subset(const MultiGraph& g, std::uint32_t mask) {
  if (mask == 0) return false;
  std::uint32_t seen = mask & (~mask + 1);  // lowest set bit
  for (;;) {
    std::uint32_t grow = seen;
    for (Vertex v = 0; v < g.order(); ++v) {
      if (!(seen & (1u << v))) continue;
      for (Vertex w : g.neighbors(v))
        if (mask & (1u << w)) grow |= 1u << w;
    }
    if (grow == seen) break;
    seen = grow;
  }
  return seen == mask;
}

// Every connected subset with size in [k_min, k_max], as masks.
inline std::vector<std::uint32_t> brute_connected_subsets(const MultiGraph& g,
                                                          int k_min, int k_max) {
  std::vector<std::uint32_t> out;
  const std::uint32_t top = 1u << g.order();
  for (std::uint32_t mask = 1; mask < top; ++mask) {
    const int k = __builtin_popcount(mask);
    if (k < k_min || k > k_max) continue;
    if (brute_connected_subset(g, mask)) out.push_back(mask);
  }
  return out;
}

inline double brute_conductance(const MultiGraph& g, std::uint32_t mask) {
  const double m = static_cast<double>(g.size());
  const double boundary = static_cast<double>(brute_boundary(g, mask));
  const double ds = static_cast<double>(brute_degree_sum(g, mask));
  return m * boundary / (ds * (2.0 * m - ds));
}

// Dense lazy-walk transition matrix; an independent route to distribution
// evolution.
inline Eigen::MatrixXd dense_kernel(const MultiGraph& g) {
  const int n = g.order();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Vertex i = 0; i < n; ++i) {
    const double d = static_cast<double>(g.degree(i));
    if (d == 0) {
      p(i, i) = 1.0;
      continue;
    }
    p(i, i) = 0.5;
    for (Vertex j : g.neighbors(i)) p(i, j) += 1.0 / (2.0 * d);
  }
  return p;
}

// max over subsets of e(S) - D|S|; second member is the largest maximiser.
inline std::pair<double, std::uint32_t> brute_densest(const MultiGraph& g,
                                                      double D) {
  double best = 0.0;
  std::uint32_t best_mask = 0;
  const std::uint32_t top = 1u << g.order();
  for (std::uint32_t mask = 1; mask < top; ++mask) {
    const double value = static_cast<double>(brute_internal(g, mask)) -
                         D * __builtin_popcount(mask);
    if (value > best + 1e-12 ||
        (std::abs(value - best) <= 1e-12 && best > 0 &&
         __builtin_popcount(mask) > __builtin_popcount(best_mask))) {
      best = value;
      best_mask = mask;
    }
  }
  return {best, best_mask};
}

// Survival-probability fixed point y = 1 - e^{-c y} of the supercritical
// branching process.
inline double giant_fraction_oracle(double c) {
  double y = 0.5;
  for (int i = 0; i < 200; ++i) y = 1.0 - std::exp(-c * y);
  return y;
}

}  // namespace oracles
