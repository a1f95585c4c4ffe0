#pragma once

#include <string>
#include <vector>

#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

// Deterministic constructions used in tests and as perturbation bases.
Graph make_path(Vertex n);
Graph make_cycle(Vertex n);
Graph make_complete(Vertex n);
Graph make_star(Vertex leaves);
Graph make_circulant(Vertex n, std::span<const Vertex> offsets);

// G(n, p): every pair an edge independently with probability p. Sparse p is
// sampled by geometric skipping over the C(n,2) pair sequence, so the cost is
// O(n + m) rather than O(n^2).
Graph gen_gnp(Vertex n, double p, Seed seed);

// G ∪ G(n, eps/n); duplicate edges collapse.
Graph perturb(const Graph& g, double eps, Seed seed);

// Circulant band with offsets 1..k, then every remaining pair independently
// with probability eps/n.
Graph gen_newman_watts(Vertex n, Vertex k, double eps, Seed seed);

// Same vertex set, each edge retained independently with probability p.
// Parallel edges of a multigraph are retained independently.
MultiGraph percolate(const MultiGraph& g, double p, Seed seed);
Graph percolate(const Graph& g, double p, Seed seed);

// Random d-regular graph via the configuration model; pairings with loops or
// parallel edges are rejected wholesale and retried on the next substream.
Graph gen_random_regular(Vertex n, Vertex d, Seed seed, int max_tries = 1000);

// Host description: "complete:n=100", "circulant:n=100,offsets=1;2;3",
// "random-regular:n=100,d=6" or "file:<path>".
struct HostSpec {
  enum class Kind { complete, circulant, random_regular, file };
  Kind kind = Kind::complete;
  Vertex n = 0;
  std::vector<Vertex> offsets;  // circulant
  Vertex d = 0;                 // random-regular
  std::string path;             // file

  static HostSpec parse(const std::string& text);
  std::string to_string() const;
};

Graph materialize_host(const HostSpec& spec, Seed seed);

// Percolates the host without materializing it when the host is complete
// (the complete case routes to the G(n,p) sampler).
Graph percolate_host(const HostSpec& spec, double p, Seed seed);

// Degeneracy via minimum-degree peeling, with a witness ordering in which
// every vertex has at most `value` earlier neighbours.
struct Degeneracy {
  Vertex value = 0;
  std::vector<Vertex> ordering;
};
Degeneracy degeneracy(const MultiGraph& g);

// λ(G) = max(|λ_2|, |λ_n|) of the adjacency operator of a regular graph, via
// power iteration on d·I + A and d·I - A deflated against the all-ones
// vector. Throws if G is not regular or the iteration cap (10·log(n)/tol) is
// reached before the residual drops below tol.
double second_eigenvalue(const MultiGraph& g, double tol);

}  // namespace mixlab
