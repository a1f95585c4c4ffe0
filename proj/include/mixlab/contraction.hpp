#pragma once

#include <vector>

#include "mixlab/graph.hpp"

namespace mixlab {

// Quotient map f: V(G) -> V(G*) contracting each connected component of
// G[U] to a fresh vertex. Surviving vertices come first in the dense
// relabelling (ascending), block images follow in block order (blocks sorted
// by smallest member), so every output can be traced back to source labels.
struct ContractionMap {
  Vertex source_n = 0;
  std::vector<VertexSet> blocks;  // components of G[U]
  std::vector<Vertex> image;      // f, size source_n
  std::vector<Vertex> origin;     // G* id -> source id, or -1 for block images
  VertexSet ustar;                // G* ids of the block images
};

struct ContractedPair {
  MultiGraph gstar;
  ContractionMap map;
};

// G* with E(G*) = {f(x)f(y) : xy in E(G), f(x) != f(y)}: intra-block edges
// vanish, cross edges keep their multiplicity.
ContractedPair contract_components(const MultiGraph& g,
                                   std::span<const Vertex> u);

// G* with U* merged into a single vertex u*. U* must be independent in G*
// (guaranteed when the blocks are maximal components of G[U]); e(Ĝ) = e(G*)
// and the stationary masses match (π̂(v) = π*(v) off U*, π̂(u*) = π*(U*)),
// both re-verified numerically. An empty U* leaves the graph unchanged.
struct HatGraph {
  MultiGraph ghat;
  Vertex ustar = -1;             // -1 when U was empty
  std::vector<Vertex> origin;    // Ĝ id -> source id, or -1 for u*
};

HatGraph contract_to_vertex(const ContractedPair& pair);

// One-stage build of Ĝ straight from (G, U); algebraically identical to the
// two-stage route for hitting U, without the intermediate graph.
HatGraph contract_to_vertex_direct(const MultiGraph& g,
                                   std::span<const Vertex> u);

// d_TV(π_G, π_G*) over the union state space, with both distributions
// zero-extended: shared vertices align by label, block images carry π_G* and
// zero π_G, contracted originals carry π_G and zero π_G*.
double stationary_tv(const MultiGraph& g, const ContractedPair& pair);

// For every start v outside U and every t <= t_max, compares the exact
// survival P[tau_G(delta_v, U) > t] against P[tau_Ĝ(delta_v, u*) > t].
// The identity is exact: the killed kernels agree entry by entry, which is
// also verified in integer arithmetic and reported in kernel_identical.
struct CouplingCheck {
  double max_discrepancy = 0;
  bool kernel_identical = false;
};

CouplingCheck coupling_survival_check(const MultiGraph& g,
                                      std::span<const Vertex> u, long t_max);

}  // namespace mixlab
