#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "mixlab/generators.hpp"
#include "mixlab/graph.hpp"
#include "oracles.hpp"

using namespace mixlab;

namespace {

std::string edge_bytes(const MultiGraph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

}  // namespace

TEST_CASE("gnp endpoint probabilities") {
  CHECK(gen_gnp(20, 0.0, Seed{1, 0}).size() == 0);
  CHECK(gen_gnp(8, 1.0, Seed{1, 0}).size() == 28);
  CHECK_THROWS_AS(gen_gnp(5, 1.5, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS(gen_gnp(5, -0.1, Seed{}), std::invalid_argument);
}

TEST_CASE("gnp determinism and edge-count concentration") {
  const Vertex n = 10000;
  const double p = 1.5 / static_cast<double>(n);
  Graph a = gen_gnp(n, p, Seed{77, 0});
  Graph b = gen_gnp(n, p, Seed{77, 0});
  CHECK(edge_bytes(a) == edge_bytes(b));
  Graph c = gen_gnp(n, p, Seed{77, 1});
  CHECK(edge_bytes(a) != edge_bytes(c));

  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  const double mean = pairs * p;
  const double sigma = std::sqrt(pairs * p * (1.0 - p));
  CHECK(std::abs(static_cast<double>(a.size()) - mean) <= 4.0 * sigma);
}

TEST_CASE("perturb identities") {
  const Vertex n = 64;
  Graph empty(n, std::vector<Edge>{});
  Graph direct = gen_gnp(n, 1.0 / n, Seed{5, 2});
  Graph via = perturb(empty, 1.0, Seed{5, 2});
  CHECK(via == direct);

  Graph kn = make_complete(12);
  CHECK(perturb(kn, 2.0, Seed{5, 0}) == kn);

  Graph path = make_path(1 << 13);
  Graph perturbed = perturb(path, 1.0, Seed{5, 1});
  CHECK(is_connected(perturbed));
  // supergraph property
  for (const Edge& e : path.edge_list())
    CHECK(perturbed.multi().multiplicity(e.u, e.v) == 1);
}

TEST_CASE("newman-watts band and density") {
  Graph c8 = gen_newman_watts(8, 1, 0.0, Seed{1, 0});
  CHECK(c8 == make_cycle(8));
  CHECK_THROWS_AS(gen_newman_watts(8, 4, 1.0, Seed{}), std::invalid_argument);

  const Vertex n = 10000;
  Graph h = gen_newman_watts(n, 2, 1.0, Seed{9, 0});
  CHECK(h.size() >= 2u * static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) CHECK(h.degree(v) >= 4);
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  const double extra_mean = (pairs - 2.0 * n) / static_cast<double>(n);
  const double sigma = std::sqrt(extra_mean);  // Bin(pairs-2n, 1/n) spread
  const double extra =
      static_cast<double>(h.size()) - 2.0 * static_cast<double>(n);
  CHECK(std::abs(extra - extra_mean) <= 4.0 * sigma);
}

TEST_CASE("percolate endpoints and subset property") {
  Graph g = gen_gnp(200, 0.05, Seed{8, 0});
  CHECK(percolate(g, 1.0, Seed{8, 1}) == g);
  CHECK(percolate(g, 0.0, Seed{8, 1}).size() == 0);
  Graph half = percolate(g, 0.5, Seed{8, 2});
  for (const Edge& e : half.edge_list())
    CHECK(g.multi().multiplicity(e.u, e.v) == 1);
}

TEST_CASE("percolated complete host tracks the giant-fraction oracle") {
  const Vertex n = 100000;
  HostSpec spec = HostSpec::parse("complete:n=100000");
  Graph gp = percolate_host(spec, 1.2 / static_cast<double>(n), Seed{21, 0});
  auto [l1, order] = largest_component(gp);
  const double frac = static_cast<double>(order) / static_cast<double>(n);
  const double target = oracles::giant_fraction_oracle(1.2);
  CHECK(std::abs(frac - target) <= 0.02);
  CHECK(target == doctest::Approx(0.3128).epsilon(0.01));
}

TEST_CASE("host spec parsing") {
  HostSpec c = HostSpec::parse("circulant:n=100,offsets=1;2;3");
  CHECK(c.kind == HostSpec::Kind::circulant);
  CHECK(c.n == 100);
  CHECK(c.offsets == std::vector<Vertex>{1, 2, 3});
  CHECK(c.to_string() == "circulant:n=100,offsets=1;2;3");

  HostSpec r = HostSpec::parse("random-regular:n=50,d=4");
  Graph reg = materialize_host(r, Seed{2, 0});
  for (Vertex v = 0; v < 50; ++v) CHECK(reg.degree(v) == 4);

  CHECK_THROWS(HostSpec::parse("bogus:n=4"));
  CHECK_THROWS(HostSpec::parse("circulant:n=10"));
  CHECK(HostSpec::parse("file:/tmp/x.g").path == "/tmp/x.g");
}

TEST_CASE("random regular rejects odd nd and is deterministic") {
  CHECK_THROWS_AS(gen_random_regular(5, 3, Seed{}), std::invalid_argument);
  Graph a = gen_random_regular(40, 3, Seed{4, 0});
  Graph b = gen_random_regular(40, 3, Seed{4, 0});
  CHECK(a == b);
  for (Vertex v = 0; v < 40; ++v) CHECK(a.degree(v) == 3);
}

TEST_CASE("degeneracy values and witness ordering") {
  CHECK(degeneracy(make_path(10)).value == 1);
  CHECK(degeneracy(make_complete(5)).value == 4);
  CHECK(degeneracy(make_cycle(6)).value == 2);
  CHECK(degeneracy(make_star(9)).value == 1);

  Graph g = gen_gnp(60, 0.1, Seed{6, 0});
  Degeneracy d = degeneracy(g);
  std::vector<int> position(60, -1);
  for (std::size_t i = 0; i < d.ordering.size(); ++i)
    position[static_cast<std::size_t>(d.ordering[i])] = static_cast<int>(i);
  for (Vertex v = 0; v < 60; ++v) {
    int before = 0;
    for (Vertex w : g.neighbors(v))
      if (position[static_cast<std::size_t>(w)] <
          position[static_cast<std::size_t>(v)])
        ++before;
    CHECK(before <= d.value);
  }
}

TEST_CASE("second eigenvalue closed forms") {
  CHECK(second_eigenvalue(make_complete(4), 1e-9) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(second_eigenvalue(make_cycle(4), 1e-9) == doctest::Approx(2.0).epsilon(1e-7));

  // disjoint union of two triangles: lambda_2 = d = 2
  std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  Graph two_k3(6, edges);
  CHECK(second_eigenvalue(two_k3, 1e-9) == doctest::Approx(2.0).epsilon(1e-7));

  CHECK_THROWS_AS(second_eigenvalue(make_path(4), 1e-9), std::invalid_argument);

  // connected non-bipartite regular graph: strictly below d
  Graph pet = gen_random_regular(10, 3, Seed{14, 0});
  if (is_connected(pet)) {
    const double lambda = second_eigenvalue(pet, 1e-9);
    CHECK(lambda < 3.0);
  }
}
