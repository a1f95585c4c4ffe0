#include <doctest.h>

#include <cmath>

#include "mixlab/generators.hpp"
#include "mixlab/walk.hpp"
#include "oracles.hpp"

using namespace mixlab;

TEST_CASE("stationary distribution") {
  ProbDist pi = stationary(make_cycle(4));
  for (int v = 0; v < 4; ++v) CHECK(pi[v] == doctest::Approx(0.25));

  ProbDist p3 = stationary(make_path(3));
  CHECK(p3[0] == doctest::Approx(0.25));
  CHECK(p3[1] == doctest::Approx(0.5));
  CHECK(p3[2] == doctest::Approx(0.25));

  ProbDist k2 = stationary(make_path(2));
  CHECK(k2[0] == doctest::Approx(0.5));

  std::vector<Edge> split{{0, 1}, {2, 3}};
  CHECK_THROWS_AS(stationary(MultiGraph(4, split)), std::domain_error);
}

TEST_CASE("step against the dense-kernel oracle") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Graph g = gen_gnp(9, 0.4, Seed{200 + s, 0});
    LazyKernel kernel(g);
    Eigen::MatrixXd p = oracles::dense_kernel(g);
    ProbDist mu = point_mass(9, static_cast<Vertex>(s % 9));
    Eigen::RowVectorXd dense = mu.transpose();
    for (int t = 0; t < 6; ++t) {
      mu = step(kernel, mu);
      dense = dense * p;
      CHECK((mu.transpose() - dense).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(mu.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("step spec examples") {
  Graph path2 = make_path(2);
  LazyKernel k2(path2);
  ProbDist mu = step(k2, point_mass(2, 0));
  CHECK(mu[0] == doctest::Approx(0.5));
  CHECK(mu[1] == doctest::Approx(0.5));

  Graph c4 = make_cycle(4);
  LazyKernel kc4(c4);
  ProbDist one = step(kc4, point_mass(4, 0));
  CHECK(one[0] == doctest::Approx(0.5));
  CHECK(one[1] == doctest::Approx(0.25));
  CHECK(one[2] == doctest::Approx(0.0));
  CHECK(one[3] == doctest::Approx(0.25));

  ProbDist pi = stationary(c4);
  ProbDist fixed = step(kc4, pi);
  CHECK(tv_distance(fixed, pi) < 1e-12);
}

TEST_CASE("tv distance basics") {
  ProbDist a = point_mass(2, 0), b = point_mass(2, 1);
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(a, b) == doctest::Approx(1.0));
  ProbDist c(2);
  c << 0.5, 0.5;
  CHECK(tv_distance(a, c) == doctest::Approx(0.5));
  ProbDist wrong(3);
  CHECK_THROWS_AS(tv_distance(a, wrong), std::invalid_argument);
}

TEST_CASE("mixing time on K2, K_n, C_n") {
  MixOptions opts;
  CHECK(mixing_time(make_path(2), opts).t == 1);
  for (Vertex n : {8, 12, 16})
    CHECK(mixing_time(make_complete(n), opts).t <= 3);
  for (Vertex n : {16, 32, 64}) {
    MixOptions cycle_opts;
    cycle_opts.t_cap = 20L * n * n;  // the cycle mixes in Θ(n²), not 50 ln² n
    const long t = mixing_time(make_cycle(n), cycle_opts).t;
    const double ratio =
        static_cast<double>(t) / (static_cast<double>(n) * n);
    CHECK(ratio >= 0.05);
    CHECK(ratio <= 5.0);
  }
}

TEST_CASE("average mixing equals worst on vertex-transitive graphs") {
  MixOptions opts;
  Graph c8 = make_cycle(8);
  CHECK(avg_mixing_time(c8, opts).t == mixing_time(c8, opts).t);
  CHECK(avg_mixing_time(make_path(2), opts).t == 1);

  Graph star = make_star(9);
  const long t_avg = avg_mixing_time(star, opts).t;
  const long t_max = mixing_time(star, opts).t;
  CHECK(t_avg <= t_max);
}

TEST_CASE("mean curve sits below the max curve") {
  Graph g = perturb(make_path(64), 1.0, Seed{31, 0});
  MixOptions opts;
  MixingReport rep = mixing_time(g, opts);
  REQUIRE(rep.has_curves);
  for (std::size_t t = 0; t < rep.max_tv.size(); ++t)
    CHECK(rep.mean_tv[t] <= rep.max_tv[t] + 1e-12);
  // curves are non-increasing
  for (std::size_t t = 1; t < rep.max_tv.size(); ++t) {
    CHECK(rep.max_tv[t] <= rep.max_tv[t - 1] + 1e-12);
    CHECK(rep.mean_tv[t] <= rep.mean_tv[t - 1] + 1e-12);
  }
}

TEST_CASE("sampled mode is deterministic under the seed") {
  Graph g = perturb(make_path(256), 1.0, Seed{32, 0});
  MixOptions opts;
  opts.mode = MixMode::sampled;
  opts.samples = 32;
  opts.seed = Seed{5, 5};
  MixingReport a = avg_mixing_time(g, opts);
  MixingReport b = avg_mixing_time(g, opts);
  CHECK(a.t == b.t);
  CHECK(a.mean_tv == b.mean_tv);
  CHECK(a.sem == b.sem);
  CHECK(a.starts == 32);
}

TEST_CASE("t_cap reports capped instead of a number") {
  Graph c64 = make_cycle(64);
  MixOptions opts;
  opts.t_cap = 3;  // far below the true mixing time
  MixingReport rep = mixing_time(c64, opts);
  CHECK(rep.capped);
  CHECK(rep.t == -1);
}

TEST_CASE("hitting survival on K2 is geometric") {
  Graph k2 = make_path(2);
  const VertexSet target{0};
  auto curve = hitting_survival(k2, target, point_mass(2, 1), 60);
  for (long t = 0; t <= 60; ++t)
    CHECK(std::abs(curve[static_cast<std::size_t>(t)] - std::pow(0.5, t)) <= 1e-12);

  auto inside = hitting_survival(k2, target, point_mass(2, 0), 5);
  CHECK(inside[0] == 0.0);
}

TEST_CASE("hitting survival is monotone and mass-conserving") {
  Graph g = gen_gnp(12, 0.3, Seed{44, 0});
  const VertexSet target{0, 3};
  ProbDist mu0 = uniform_dist(12);
  auto curve = hitting_survival(g, target, mu0, 50);
  for (std::size_t t = 1; t < curve.size(); ++t)
    CHECK(curve[t] <= curve[t - 1] + 1e-15);

  // absorbed mass accounting: survival + absorbed = 1
  LazyKernel kernel(g);
  std::vector<char> absorb(12, 0);
  for (Vertex v : target) absorb[static_cast<std::size_t>(v)] = 1;
  ProbDist alive = mu0;
  double absorbed = 0;
  for (Vertex v : target) {
    absorbed += alive[v];
    alive[v] = 0;
  }
  ProbDist next(12);
  for (long t = 1; t <= 50; ++t) {
    kernel.apply_left(alive, next);
    for (Vertex v : target) {
      absorbed += next[v];
      next[v] = 0;
    }
    alive.swap(next);
    CHECK(alive.sum() + absorbed == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(alive.sum() == doctest::Approx(curve[static_cast<std::size_t>(t)])
                             .epsilon(1e-12));
  }
}

TEST_CASE("simulate_walk determinism and edge cases") {
  Graph g = make_cycle(6);
  LazyKernel kernel(g);
  auto a = simulate_walk(kernel, 2, 100, Seed{7, 7});
  auto b = simulate_walk(kernel, 2, 100, Seed{7, 7});
  CHECK(a == b);
  CHECK(a.size() == 101);
  CHECK(a[0] == 2);

  auto none = simulate_walk(kernel, 1, 0, Seed{});
  CHECK(none == std::vector<Vertex>{1});

  Graph isolated(2, std::vector<Edge>{});
  LazyKernel ki(isolated);
  CHECK_THROWS_AS(simulate_walk(ki, 0, 5, Seed{}), std::domain_error);
}

TEST_CASE("K2 occupation frequencies") {
  Graph k2 = make_path(2);
  LazyKernel kernel(k2);
  auto traj = simulate_walk(kernel, 0, 100000, Seed{99, 0});
  long at0 = 0;
  for (Vertex v : traj)
    if (v == 0) ++at0;
  const double frac = static_cast<double>(at0) / static_cast<double>(traj.size());
  CHECK(std::abs(frac - 0.5) <= 0.01);
}

TEST_CASE("C4 one-step transition frequencies") {
  Graph c4 = make_cycle(4);
  LazyKernel kernel(c4);
  const int trials = 10000;
  int count[4] = {};
  for (int i = 0; i < trials; ++i) {
    auto traj =
        simulate_walk(kernel, 0, 1, Seed{123, static_cast<std::uint64_t>(i)});
    ++count[traj[1]];
  }
  const double expected[4] = {0.5, 0.25, 0.0, 0.25};
  for (int v = 0; v < 4; ++v) {
    const double p = expected[v];
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(count[v] / static_cast<double>(trials) - p) <=
          4.0 * sigma + 1e-12);
  }
}

TEST_CASE("monte carlo occupation matches exact evolution at t = 5") {
  Graph g = gen_gnp(14, 0.3, Seed{55, 0});
  REQUIRE(is_connected(g));
  LazyKernel kernel(g);
  const long t = 5;
  ProbDist mu = point_mass(14, 3);
  ProbDist next(14);
  for (long i = 0; i < t; ++i) {
    kernel.apply_left(mu, next);
    mu.swap(next);
  }
  const int trials = 10000;
  std::vector<int> count(14, 0);
  for (int i = 0; i < trials; ++i) {
    auto traj =
        simulate_walk(kernel, 3, t, Seed{777, static_cast<std::uint64_t>(i)});
    ++count[static_cast<std::size_t>(traj.back())];
  }
  for (int v = 0; v < 14; ++v) {
    const double p = mu[v];
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(count[static_cast<std::size_t>(v)] / double(trials) - p) <=
          4.0 * sigma + 1e-9);
  }
}

TEST_CASE("ball growth lower bound") {
  CHECK(ball_growth_lower_bound(make_complete(16), 15.0) == 0);
  for (Vertex n : {16, 32, 64}) {
    const long expect = (n / 2 - 1) / 2;
    CHECK(ball_growth_lower_bound(make_cycle(n), 2.0) == expect);
  }
  // paths stay within one of the cycle value
  for (Vertex n : {16, 32, 64}) {
    const long cycle_k = (n / 2 - 1) / 2;
    const long path_k = ball_growth_lower_bound(make_path(n), 2.0);
    CHECK(std::abs(path_k - cycle_k) <= 1);
  }

  // brute-force oracle on a random graph
  Graph g = gen_gnp(40, 0.08, Seed{60, 0});
  const long got = ball_growth_lower_bound(g, 4.0);
  auto half_small = [&](long k) {
    int small = 0;
    for (Vertex v = 0; v < 40; ++v) {
      // BFS truncated at depth k
      std::vector<long> dist(40, -1);
      std::vector<Vertex> queue{v};
      dist[static_cast<std::size_t>(v)] = 0;
      std::size_t head = 0;
      long ball = 1;
      while (head < queue.size()) {
        Vertex x = queue[head++];
        if (dist[static_cast<std::size_t>(x)] >= k) continue;
        for (Vertex w : g.neighbors(x)) {
          if (dist[static_cast<std::size_t>(w)] < 0) {
            dist[static_cast<std::size_t>(w)] =
                dist[static_cast<std::size_t>(x)] + 1;
            queue.push_back(w);
            ++ball;
          }
        }
      }
      if (2 * ball <= 40) ++small;
    }
    return 2 * small >= 40;
  };
  CHECK(half_small(got));
  CHECK_FALSE(half_small(got + 1));
}
