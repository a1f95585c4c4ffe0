#include "mixlab/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixlab/walk.hpp"

namespace mixlab {

ContractedPair contract_components(const MultiGraph& g,
                                   std::span<const Vertex> u) {
  const Vertex n = g.order();
  ContractionMap map;
  map.source_n = n;
  map.blocks = components_within(g, u);  // sorted members, ordered by minimum

  std::vector<char> in_u(static_cast<std::size_t>(n), 0);
  for (Vertex v : u) in_u[static_cast<std::size_t>(v)] = 1;

  map.image.assign(static_cast<std::size_t>(n), -1);
  Vertex next = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (!in_u[static_cast<std::size_t>(v)]) {
      map.image[static_cast<std::size_t>(v)] = next;
      map.origin.push_back(v);
      ++next;
    }
  }
  for (const VertexSet& block : map.blocks) {
    for (Vertex v : block) map.image[static_cast<std::size_t>(v)] = next;
    map.ustar.push_back(next);
    map.origin.push_back(-1);
    ++next;
  }

  std::vector<Edge> edges;
  edges.reserve(g.size());
  for (Vertex x = 0; x < n; ++x) {
    const Vertex fx = map.image[static_cast<std::size_t>(x)];
    for (Vertex y : g.neighbors(x)) {
      if (x > y) continue;  // one direction per copy
      const Vertex fy = map.image[static_cast<std::size_t>(y)];
      if (fx != fy) edges.push_back({fx, fy});  // intra-block edges vanish
    }
  }
  ContractedPair out;
  out.gstar = MultiGraph(next, edges);
  out.map = std::move(map);
  return out;
}

namespace {

HatGraph merge_to_vertex(const MultiGraph& g, std::span<const Vertex> absorbed,
                         const std::vector<Vertex>& origin_of_g,
                         bool drop_internal) {
  const Vertex n = g.order();
  HatGraph out;
  if (absorbed.empty()) {
    out.ghat = g;
    out.origin = origin_of_g;
    return out;
  }
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (Vertex v : absorbed) in[static_cast<std::size_t>(v)] = 1;
  std::vector<Vertex> image(static_cast<std::size_t>(n), -1);
  Vertex next = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (!in[static_cast<std::size_t>(v)]) {
      image[static_cast<std::size_t>(v)] = next;
      out.origin.push_back(origin_of_g.empty() ? v
                                               : origin_of_g[static_cast<std::size_t>(v)]);
      ++next;
    }
  }
  const Vertex star = next;
  for (Vertex v : absorbed) image[static_cast<std::size_t>(v)] = star;
  out.origin.push_back(-1);
  out.ustar = star;

  std::vector<Edge> edges;
  edges.reserve(g.size());
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y : g.neighbors(x)) {
      if (x > y) continue;
      const Vertex fx = image[static_cast<std::size_t>(x)];
      const Vertex fy = image[static_cast<std::size_t>(y)];
      if (fx == fy) {
        if (drop_internal) continue;
        throw std::domain_error("merge target is not independent");
      }
      edges.push_back({fx, fy});
    }
  }
  out.ghat = MultiGraph(star + 1, edges);
  return out;
}

}  // namespace

HatGraph contract_to_vertex(const ContractedPair& pair) {
  // U* independence is part of the contract; merging verifies it edge by
  // edge (an internal edge would become a loop).
  HatGraph out = merge_to_vertex(pair.gstar, pair.map.ustar, pair.map.origin,
                                 /*drop_internal=*/false);
  if (out.ghat.size() != pair.gstar.size())
    throw std::logic_error("edge count changed while contracting U*");
  if (out.ustar >= 0) {
    // π̂ equals π* off U*, and π̂(u*) collects π*(U*).
    const double two_e = 2.0 * static_cast<double>(pair.gstar.size());
    double pi_ustar = 0;
    std::vector<char> in(static_cast<std::size_t>(pair.gstar.order()), 0);
    for (Vertex v : pair.map.ustar) {
      in[static_cast<std::size_t>(v)] = 1;
      pi_ustar += static_cast<double>(pair.gstar.degree(v)) / two_e;
    }
    const double got =
        static_cast<double>(out.ghat.degree(out.ustar)) / two_e;
    if (std::abs(got - pi_ustar) > 1e-12)
      throw std::logic_error("π̂(u*) disagrees with π*(U*)");
    Vertex idx = 0;
    for (Vertex v = 0; v < pair.gstar.order(); ++v) {
      if (in[static_cast<std::size_t>(v)]) continue;
      if (pair.gstar.degree(v) != out.ghat.degree(idx))
        throw std::logic_error("degree changed off U* while contracting");
      ++idx;
    }
  }
  return out;
}

HatGraph contract_to_vertex_direct(const MultiGraph& g,
                                   std::span<const Vertex> u) {
  // Contracting U to one vertex and dropping intra-U edges lands exactly on
  // Ĝ: those edges are the ones G* already contracted away or that U*'s
  // independence forbids.
  std::vector<Vertex> identity;
  return merge_to_vertex(g, u, identity, /*drop_internal=*/true);
}

double stationary_tv(const MultiGraph& g, const ContractedPair& pair) {
  if (!is_connected(g) || !is_connected(pair.gstar))
    throw std::domain_error("stationary_tv needs connected graphs");
  const double two_e_g = 2.0 * static_cast<double>(g.size());
  const double two_e_star = 2.0 * static_cast<double>(pair.gstar.size());
  double sum = 0;
  // Shared vertices (v outside U) align by label; each |π_G - π_G*|.
  // Contracted originals contribute π_G, block images contribute π_G*.
  std::vector<char> contracted(static_cast<std::size_t>(g.order()), 0);
  for (const VertexSet& block : pair.map.blocks)
    for (Vertex v : block) contracted[static_cast<std::size_t>(v)] = 1;
  for (Vertex v = 0; v < g.order(); ++v) {
    const double pg = static_cast<double>(g.degree(v)) / two_e_g;
    if (contracted[static_cast<std::size_t>(v)]) {
      sum += pg;
    } else {
      const Vertex w = pair.map.image[static_cast<std::size_t>(v)];
      const double ps = static_cast<double>(pair.gstar.degree(w)) / two_e_star;
      sum += std::abs(pg - ps);
    }
  }
  for (Vertex w : pair.map.ustar)
    sum += static_cast<double>(pair.gstar.degree(w)) / two_e_star;
  return 0.5 * sum;
}

CouplingCheck coupling_survival_check(const MultiGraph& g,
                                      std::span<const Vertex> u, long t_max) {
  if (!is_connected(g))
    throw std::domain_error("coupling check needs a connected graph");
  if (u.empty() || u.size() >= static_cast<std::size_t>(g.order()))
    throw std::invalid_argument("U must be a proper nonempty subset");
  HatGraph hat = contract_to_vertex_direct(g, u);
  CouplingCheck out;

  // Exact structural identity of the killed kernels: for v, w outside U,
  // mult and degree agree between G and Ĝ, so the survival identity holds in
  // exact arithmetic for every t.
  out.kernel_identical = true;
  std::vector<char> in_u(static_cast<std::size_t>(g.order()), 0);
  for (Vertex v : u) in_u[static_cast<std::size_t>(v)] = 1;
  std::vector<Vertex> image(static_cast<std::size_t>(g.order()), -1);
  {
    Vertex next = 0;
    for (Vertex v = 0; v < g.order(); ++v)
      if (!in_u[static_cast<std::size_t>(v)]) image[static_cast<std::size_t>(v)] = next++;
  }
  for (Vertex v = 0; v < g.order() && out.kernel_identical; ++v) {
    if (in_u[static_cast<std::size_t>(v)]) continue;
    const Vertex hv = image[static_cast<std::size_t>(v)];
    if (g.degree(v) != hat.ghat.degree(hv)) {
      out.kernel_identical = false;
      break;
    }
    for (Vertex w : g.neighbors(v)) {
      if (in_u[static_cast<std::size_t>(w)]) continue;
      if (g.multiplicity(v, w) !=
          hat.ghat.multiplicity(hv, image[static_cast<std::size_t>(w)])) {
        out.kernel_identical = false;
        break;
      }
    }
  }

  const VertexSet target_u(u.begin(), u.end());
  const VertexSet target_star{hat.ustar};
  for (Vertex v = 0; v < g.order(); ++v) {
    if (in_u[static_cast<std::size_t>(v)]) continue;
    const auto curve_g =
        hitting_survival(g, target_u, point_mass(g.order(), v), t_max);
    const auto curve_hat = hitting_survival(
        hat.ghat, target_star,
        point_mass(hat.ghat.order(), image[static_cast<std::size_t>(v)]), t_max);
    for (std::size_t t = 0; t < curve_g.size(); ++t)
      out.max_discrepancy =
          std::max(out.max_discrepancy, std::abs(curve_g[t] - curve_hat[t]));
  }
  return out;
}

}  // namespace mixlab
