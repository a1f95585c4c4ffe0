#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mixlab {

using Vertex = std::int32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
};

// A subset of V(G): sorted, duplicate-free vertex ids. Enumeration kernels
// use bitmasks internally at small n; this is the canonical API carrier.
using VertexSet = std::vector<Vertex>;

VertexSet complement_set(Vertex n, std::span<const Vertex> s);

// Labelled undirected multigraph on vertices 0..n-1, stored as CSR with one
// adjacency entry per edge endpoint (parallel edges repeat, loops rejected).
// Immutable after construction; all operations are safe for concurrent
// readers.
class MultiGraph {
 public:
  MultiGraph() = default;
  MultiGraph(Vertex n, std::span<const Edge> edges);

  Vertex order() const { return n_; }
  std::size_t size() const { return m_; }  // edges, counting multiplicity

  Vertex degree(Vertex v) const {
    return static_cast<Vertex>(offset_[v + 1] - offset_[v]);
  }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {target_.data() + offset_[v], offset_[v + 1] - offset_[v]};
  }
  std::size_t multiplicity(Vertex u, Vertex v) const;

  bool is_simple() const;

  // Edges with u < v, sorted, one entry per parallel copy.
  std::vector<Edge> edge_list() const;

  bool operator==(const MultiGraph& o) const {
    return n_ == o.n_ && offset_ == o.offset_ && target_ == o.target_;
  }

 private:
  Vertex n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<Vertex> target_;
};

// Simple graph: a multigraph whose construction rejects parallel edges as
// well as loops. Converts implicitly to const MultiGraph& so every
// multigraph operation applies.
class Graph {
 public:
  Graph() = default;
  Graph(Vertex n, std::span<const Edge> edges);

  operator const MultiGraph&() const { return g_; }
  const MultiGraph& multi() const { return g_; }

  Vertex order() const { return g_.order(); }
  std::size_t size() const { return g_.size(); }
  Vertex degree(Vertex v) const { return g_.degree(v); }
  std::span<const Vertex> neighbors(Vertex v) const { return g_.neighbors(v); }
  std::vector<Edge> edge_list() const { return g_.edge_list(); }

  bool operator==(const Graph& o) const { return g_ == o.g_; }

 private:
  explicit Graph(MultiGraph g) : g_(std::move(g)) {}
  friend Graph simple_from_multi(MultiGraph g);

  MultiGraph g_;
};

// Wraps an already-simple multigraph without copying; throws if it is not.
Graph simple_from_multi(MultiGraph g);

// Set functionals. S must be sorted, duplicate-free and within range; all
// counts respect edge multiplicity.
std::size_t boundary_size(const MultiGraph& g, std::span<const Vertex> s);
std::size_t internal_edges(const MultiGraph& g, std::span<const Vertex> s);
std::size_t degree_sum(const MultiGraph& g, std::span<const Vertex> s);

// True iff G[S] is connected; S must be nonempty.
bool is_connected_set(const MultiGraph& g, std::span<const Vertex> s);

bool is_connected(const MultiGraph& g);

// Partition of V(G) into maximal connected blocks, each sorted, ordered by
// smallest member.
std::vector<VertexSet> connected_components(const MultiGraph& g);

// Connected components of the induced subgraph G[S].
std::vector<VertexSet> components_within(const MultiGraph& g,
                                         std::span<const Vertex> s);

// A maximum-order component together with its order; ties broken towards the
// component containing the smallest vertex label.
std::pair<VertexSet, Vertex> largest_component(const MultiGraph& g);

// G[S] relabelled densely; second element maps new id -> original id
// (ascending, so relative label order is preserved).
std::pair<MultiGraph, std::vector<Vertex>> induced_subgraph(
    const MultiGraph& g, std::span<const Vertex> s);

// Edge-list text format: first line "n m", then m lines "u v" (0-based).
// Strict: loops, out-of-range ids and malformed counts are rejected.
// Repeated lines mean multiplicity in the multigraph reader and are an error
// in the simple reader.
MultiGraph read_multigraph(std::istream& in);
Graph read_graph(std::istream& in);
MultiGraph read_multigraph_file(const std::string& path);
Graph read_graph_file(const std::string& path);
void write_edge_list(const MultiGraph& g, std::ostream& out);
void write_edge_list_file(const MultiGraph& g, const std::string& path);

}  // namespace mixlab
