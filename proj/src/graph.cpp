#include "mixlab/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mixlab {

namespace {

void check_subset(const MultiGraph& g, std::span<const Vertex> s) {
  Vertex prev = -1;
  for (Vertex v : s) {
    if (v < 0 || v >= g.order())
      throw std::invalid_argument("vertex id out of range: " +
                                  std::to_string(v));
    if (v <= prev)
      throw std::invalid_argument("vertex set must be sorted and duplicate-free");
    prev = v;
  }
}

std::vector<char> membership(Vertex n, std::span<const Vertex> s) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (Vertex v : s) in[static_cast<std::size_t>(v)] = 1;
  return in;
}

}  // namespace

VertexSet complement_set(Vertex n, std::span<const Vertex> s) {
  VertexSet out;
  out.reserve(static_cast<std::size_t>(n) - s.size());
  std::size_t i = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (i < s.size() && s[i] == v) {
      ++i;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

MultiGraph::MultiGraph(Vertex n, std::span<const Edge> edges) : n_(n) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  offset_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("loops are not allowed");
    ++offset_[static_cast<std::size_t>(e.u) + 1];
    ++offset_[static_cast<std::size_t>(e.v) + 1];
  }
  for (std::size_t i = 1; i < offset_.size(); ++i) offset_[i] += offset_[i - 1];
  target_.resize(offset_.back());
  std::vector<std::size_t> cursor(offset_.begin(), offset_.end() - 1);
  for (const Edge& e : edges) {
    target_[cursor[static_cast<std::size_t>(e.u)]++] = e.v;
    target_[cursor[static_cast<std::size_t>(e.v)]++] = e.u;
  }
  for (Vertex v = 0; v < n; ++v) {
    std::sort(target_.begin() + static_cast<std::ptrdiff_t>(offset_[v]),
              target_.begin() + static_cast<std::ptrdiff_t>(offset_[v + 1]));
  }
  m_ = edges.size();
}

std::size_t MultiGraph::multiplicity(Vertex u, Vertex v) const {
  auto nb = neighbors(u);
  auto [lo, hi] = std::equal_range(nb.begin(), nb.end(), v);
  return static_cast<std::size_t>(hi - lo);
}

bool MultiGraph::is_simple() const {
  for (Vertex v = 0; v < n_; ++v) {
    auto nb = neighbors(v);
    for (std::size_t i = 1; i < nb.size(); ++i)
      if (nb[i] == nb[i - 1]) return false;
  }
  return true;
}

std::vector<Edge> MultiGraph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : neighbors(u))
      if (u < v) out.push_back({u, v});
  return out;
}

Graph::Graph(Vertex n, std::span<const Edge> edges) : g_(n, edges) {
  if (!g_.is_simple())
    throw std::invalid_argument("parallel edges are not allowed in a simple graph");
}

Graph simple_from_multi(MultiGraph g) {
  if (!g.is_simple())
    throw std::invalid_argument("multigraph has parallel edges");
  Graph out;
  out.g_ = std::move(g);
  return out;
}

std::size_t boundary_size(const MultiGraph& g, std::span<const Vertex> s) {
  check_subset(g, s);
  auto in = membership(g.order(), s);
  std::size_t count = 0;
  for (Vertex v : s)
    for (Vertex w : g.neighbors(v))
      if (!in[static_cast<std::size_t>(w)]) ++count;
  return count;
}

std::size_t internal_edges(const MultiGraph& g, std::span<const Vertex> s) {
  check_subset(g, s);
  auto in = membership(g.order(), s);
  std::size_t endpoints = 0;
  for (Vertex v : s)
    for (Vertex w : g.neighbors(v))
      if (in[static_cast<std::size_t>(w)]) ++endpoints;
  return endpoints / 2;
}

std::size_t degree_sum(const MultiGraph& g, std::span<const Vertex> s) {
  check_subset(g, s);
  std::size_t total = 0;
  for (Vertex v : s) total += static_cast<std::size_t>(g.degree(v));
  return total;
}

bool is_connected_set(const MultiGraph& g, std::span<const Vertex> s) {
  if (s.empty()) throw std::invalid_argument("empty set has no connectivity");
  check_subset(g, s);
  auto in = membership(g.order(), s);
  std::vector<Vertex> stack{s[0]};
  in[static_cast<std::size_t>(s[0])] = 2;
  std::size_t seen = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v)) {
      if (in[static_cast<std::size_t>(w)] == 1) {
        in[static_cast<std::size_t>(w)] = 2;
        ++seen;
        stack.push_back(w);
      }
    }
  }
  return seen == s.size();
}

bool is_connected(const MultiGraph& g) {
  if (g.order() <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  Vertex count = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v)) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == g.order();
}

std::vector<VertexSet> connected_components(const MultiGraph& g) {
  std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
  std::vector<VertexSet> comps;
  std::vector<Vertex> stack;
  for (Vertex r = 0; r < g.order(); ++r) {
    if (seen[static_cast<std::size_t>(r)]) continue;
    VertexSet comp;
    stack.assign(1, r);
    seen[static_cast<std::size_t>(r)] = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

std::vector<VertexSet> components_within(const MultiGraph& g,
                                         std::span<const Vertex> s) {
  check_subset(g, s);
  auto in = membership(g.order(), s);
  std::vector<VertexSet> comps;
  std::vector<Vertex> stack;
  for (Vertex r : s) {
    if (in[static_cast<std::size_t>(r)] != 1) continue;
    VertexSet comp;
    stack.assign(1, r);
    in[static_cast<std::size_t>(r)] = 2;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (in[static_cast<std::size_t>(w)] == 1) {
          in[static_cast<std::size_t>(w)] = 2;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

std::pair<VertexSet, Vertex> largest_component(const MultiGraph& g) {
  if (g.order() < 1) throw std::invalid_argument("empty graph");
  auto comps = connected_components(g);
  const VertexSet* best = &comps[0];
  for (const auto& c : comps)
    if (c.size() > best->size()) best = &c;  // first max wins the label tie
  return {*best, static_cast<Vertex>(best->size())};
}

std::pair<MultiGraph, std::vector<Vertex>> induced_subgraph(
    const MultiGraph& g, std::span<const Vertex> s) {
  check_subset(g, s);
  std::vector<Vertex> to_new(static_cast<std::size_t>(g.order()), -1);
  std::vector<Vertex> to_old(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i)
    to_new[static_cast<std::size_t>(s[i])] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (Vertex v : s) {
    for (Vertex w : g.neighbors(v)) {
      if (v < w && to_new[static_cast<std::size_t>(w)] >= 0)
        edges.push_back({to_new[static_cast<std::size_t>(v)],
                         to_new[static_cast<std::size_t>(w)]});
    }
  }
  return {MultiGraph(static_cast<Vertex>(s.size()), edges), std::move(to_old)};
}

namespace {

MultiGraph parse_edge_list(std::istream& in) {
  long long n = 0, m = 0;
  if (!(in >> n >> m)) throw std::invalid_argument("missing 'n m' header");
  if (n < 0 || m < 0) throw std::invalid_argument("negative n or m");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = 0, v = 0;
    if (!(in >> u >> v))
      throw std::invalid_argument("truncated edge list: expected " +
                                  std::to_string(m) + " edges");
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("edge endpoint out of range on line " +
                                  std::to_string(i + 2));
    if (u == v)
      throw std::invalid_argument("loop rejected on line " +
                                  std::to_string(i + 2));
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  return MultiGraph(static_cast<Vertex>(n), edges);
}

}  // namespace

MultiGraph read_multigraph(std::istream& in) { return parse_edge_list(in); }

Graph read_graph(std::istream& in) {
  MultiGraph g = parse_edge_list(in);
  if (!g.is_simple())
    throw std::invalid_argument("repeated edge rejected in simple-graph input");
  return simple_from_multi(std::move(g));
}

MultiGraph read_multigraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_multigraph(in);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_graph(in);
}

void write_edge_list(const MultiGraph& g, std::ostream& out) {
  out << g.order() << ' ' << g.size() << '\n';
  for (const Edge& e : g.edge_list()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list_file(const MultiGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_edge_list(g, out);
}

}  // namespace mixlab
