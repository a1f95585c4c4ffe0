#include <doctest.h>

#include <sstream>

#include "mixlab/generators.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"
#include "oracles.hpp"

using namespace mixlab;

namespace {

Graph c4() { return make_cycle(4); }
Graph k4() { return make_complete(4); }

Graph random_gnp_connected(int n, Seed seed) {
  for (int tries = 0;; ++tries) {
    Graph g = gen_gnp(n, 0.4, seed);
    if (is_connected(g)) return g;
    seed = seed.next_stream();
    REQUIRE(tries < 100);
  }
}

}  // namespace

TEST_CASE("construction rejects loops and range errors") {
  std::vector<Edge> loop{{0, 0}};
  CHECK_THROWS_AS(MultiGraph(2, loop), std::invalid_argument);
  std::vector<Edge> oob{{0, 5}};
  CHECK_THROWS_AS(MultiGraph(3, oob), std::invalid_argument);
  std::vector<Edge> dup{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(Graph(2, dup), std::invalid_argument);
  MultiGraph multi(2, dup);  // fine as a multigraph
  CHECK(multi.size() == 2);
  CHECK(multi.multiplicity(0, 1) == 2);
  CHECK(multi.multiplicity(1, 0) == 2);
  CHECK_FALSE(multi.is_simple());
}

TEST_CASE("boundary_size matches the spec examples") {
  const VertexSet s0{0};
  CHECK(boundary_size(c4(), s0) == 2);
  const VertexSet all{0, 1, 2, 3};
  CHECK(boundary_size(c4(), all) == 0);
  const VertexSet pair{0, 1};
  CHECK(boundary_size(k4(), pair) == 4);
  const VertexSet bad{0, 9};
  CHECK_THROWS_AS(boundary_size(c4(), bad), std::invalid_argument);
}

TEST_CASE("internal_edges matches the spec examples") {
  const VertexSet all{0, 1, 2, 3};
  CHECK(internal_edges(k4(), all) == 6);
  Graph p4 = make_path(4);
  const VertexSet skip{0, 2};
  CHECK(internal_edges(p4, skip) == 0);
  Graph c6 = make_cycle(6);
  const VertexSet arc{0, 1, 2};
  CHECK(internal_edges(c6, arc) == 2);
}

TEST_CASE("degree_sum identity and examples") {
  const VertexSet s0{0};
  CHECK(degree_sum(c4(), s0) == 2);
  Graph c6 = make_cycle(6);
  const VertexSet arc{0, 1, 2};
  CHECK(degree_sum(c6, arc) == 6);
  const VertexSet pair{0, 1};
  CHECK(degree_sum(k4(), pair) == 6);
}

TEST_CASE("set functional identities on random graphs") {
  Rng rng(Seed{11, 0});
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = gen_gnp(10, 0.35, Seed{100 + static_cast<std::uint64_t>(trial), 0});
    const std::uint32_t mask =
        static_cast<std::uint32_t>(rng.below(1u << 10));
    const VertexSet s = oracles::mask_to_set(mask, 10);
    const VertexSet sc = complement_set(10, s);
    if (!s.empty() && !sc.empty()) {
      CHECK(boundary_size(g, s) == boundary_size(g, sc));
      CHECK(boundary_size(g, s) == oracles::brute_boundary(g, mask));
      CHECK(internal_edges(g, s) == oracles::brute_internal(g, mask));
      CHECK(degree_sum(g, s) ==
            2 * internal_edges(g, s) + boundary_size(g, s));
      CHECK(internal_edges(g, s) + internal_edges(g, sc) +
                boundary_size(g, s) ==
            g.size());
      CHECK(degree_sum(g, s) + degree_sum(g, sc) == 2 * g.size());
    }
  }
}

TEST_CASE("multigraph functionals count multiplicity") {
  std::vector<Edge> edges{{0, 1}, {0, 1}, {1, 2}};
  MultiGraph g(3, edges);
  const VertexSet s{0, 1};
  CHECK(internal_edges(g, s) == 2);
  CHECK(boundary_size(g, s) == 1);
  CHECK(degree_sum(g, s) == 5);
}

TEST_CASE("is_connected_set") {
  Graph p4 = make_path(4);
  const VertexSet run{0, 1, 2};
  CHECK(is_connected_set(p4, run));
  const VertexSet gap{0, 2};
  CHECK_FALSE(is_connected_set(p4, gap));
  const VertexSet single{3};
  CHECK(is_connected_set(p4, single));
  const VertexSet empty;
  CHECK_THROWS_AS(is_connected_set(p4, empty), std::invalid_argument);
}

TEST_CASE("components and largest_component") {
  std::vector<Edge> edges{{0, 1}, {2, 3}};
  Graph g(4, edges);
  auto comps = connected_components(g);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == VertexSet{0, 1});
  CHECK(comps[1] == VertexSet{2, 3});

  // two disjoint edges plus a triangle
  std::vector<Edge> mixed{{0, 1}, {2, 3}, {4, 5}, {5, 6}, {4, 6}};
  Graph h(7, mixed);
  auto [l1, order] = largest_component(h);
  CHECK(order == 3);
  CHECK(l1 == VertexSet{4, 5, 6});

  Graph isolated(3, std::vector<Edge>{});
  auto [v0, one] = largest_component(isolated);
  CHECK(one == 1);
  CHECK(v0 == VertexSet{0});  // tie broken towards the smallest label

  Graph conn = make_cycle(5);
  auto [full, five] = largest_component(conn);
  CHECK(five == 5);
  CHECK(full.size() == 5);
}

TEST_CASE("components_within restricts to G[S]") {
  Graph p5 = make_path(5);
  const VertexSet s{0, 1, 3, 4};
  auto blocks = components_within(p5, s);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0] == VertexSet{0, 1});
  CHECK(blocks[1] == VertexSet{3, 4});
}

TEST_CASE("edge-list io round trip and strict parsing") {
  Graph g = random_gnp_connected(12, Seed{3, 0});
  std::ostringstream out;
  write_edge_list(g, out);
  std::istringstream in(out.str());
  Graph back = read_graph(in);
  CHECK(back == g);

  std::ostringstream out2;
  write_edge_list(back, out2);
  CHECK(out.str() == out2.str());  // byte-identical round trip

  std::istringstream loop("2 1\n0 0\n");
  CHECK_THROWS(read_multigraph(loop));
  std::istringstream oob("2 1\n0 2\n");
  CHECK_THROWS(read_multigraph(oob));
  std::istringstream truncated("3 2\n0 1\n");
  CHECK_THROWS(read_multigraph(truncated));
  std::istringstream repeated("3 2\n0 1\n0 1\n");
  CHECK_THROWS(read_graph(repeated));
  std::istringstream repeated2("3 2\n0 1\n0 1\n");
  MultiGraph m = read_multigraph(repeated2);
  CHECK(m.multiplicity(0, 1) == 2);
}

TEST_CASE("induced_subgraph relabels densely") {
  Graph c6 = make_cycle(6);
  const VertexSet s{1, 2, 4};
  auto [sub, origin] = induced_subgraph(c6, s);
  CHECK(sub.order() == 3);
  CHECK(sub.size() == 1);  // only 1-2 survives
  CHECK(origin == std::vector<Vertex>{1, 2, 4});
}
