#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

// Probability vector over the vertex set.
using ProbDist = Eigen::VectorXd;

bool is_prob_dist(const ProbDist& mu, double sum_tol = 1e-9);
ProbDist point_mass(Vertex n, Vertex u);
ProbDist uniform_dist(Vertex n);

// Lazy-walk transition operator: P(i,i) = 1/2 and P(i,j) = mult(i,j)/(2 deg i).
// An isolated vertex keeps its mass (P(i,i) = 1), so rows always sum to one.
class LazyKernel {
 public:
  explicit LazyKernel(const MultiGraph& g);

  const MultiGraph& graph() const { return *g_; }

  // out = mu P
  void apply_left(const ProbDist& mu, ProbDist& out) const;

  // out = mu P with the entries listed in `absorb` (precomputed membership
  // mask) zeroed afterwards; used by hitting-time survival iterations.
  void apply_left_absorbing(const ProbDist& mu, ProbDist& out,
                            const std::vector<char>& absorb) const;

  double transition(Vertex i, Vertex j) const;

 private:
  const MultiGraph* g_;
  Eigen::VectorXd inv_two_deg_;
  Eigen::VectorXd diag_;
};

// π(u) = deg(u) / 2e(G). Throws std::domain_error when G is disconnected.
ProbDist stationary(const MultiGraph& g);
double pi_min(const ProbDist& pi);
double pi_max(const ProbDist& pi);

ProbDist step(const LazyKernel& kernel, const ProbDist& mu);

// Half the L1 distance.
double tv_distance(const ProbDist& mu, const ProbDist& nu);

enum class MixMode { exact, sampled };

struct MixOptions {
  double eps = 0.25;  // the standard mixing level
  MixMode mode = MixMode::exact;
  int samples = 256;       // start count in sampled mode
  Seed seed{};             // start sampling
  long t_cap = -1;         // default: 50 * (ln n)^2
  bool keep_curves = true;
  // Per-start evolution stops once its TV falls below eps * tv_floor_factor.
  // Curves are padded with the last value beyond that point; the padding is
  // an upper bound on the true TV, so the reported mean curve overshoots by
  // at most eps * tv_floor_factor.
  double tv_floor_factor = 1e-3;
};

struct MixingReport {
  double eps = 0.25;
  long t = -1;
  bool capped = false;
  MixMode mode = MixMode::exact;
  bool average = false;
  int starts = 0;
  long t_cap = 0;
  bool has_curves = false;
  std::vector<double> max_tv;
  std::vector<double> mean_tv;
  std::vector<double> sem;  // zero in exact mode
};

// Smallest t with max-start TV <= eps (exact mode runs every start).
MixingReport mixing_time(const MultiGraph& g, const MixOptions& opts);

// Smallest t with mean-start TV <= eps; sampled mode averages over
// `samples` uniform starts and reports the standard error of the mean curve.
MixingReport avg_mixing_time(const MultiGraph& g, const MixOptions& opts);

// P[tau > t] for t = 0..t_max where tau is the hitting time of `target`
// from mu0, computed by absorbing iteration.
std::vector<double> hitting_survival(const MultiGraph& g,
                                     std::span<const Vertex> target,
                                     const ProbDist& mu0, long t_max);

// Trajectory of length steps+1; deterministic under seed, neighbour choice
// uniform over the multi-edge multiset.
std::vector<Vertex> simulate_walk(const LazyKernel& kernel, Vertex start,
                                  long steps, Seed seed);

// Largest k such that at least half the vertices have |N^k(v)| <= n/2,
// found by doubling then binary search with exact truncated BFS counts.
// dbar (an upper bound on the average degree) only seeds the search.
long ball_growth_lower_bound(const MultiGraph& g, double dbar);

long default_t_cap(Vertex n);

}  // namespace mixlab
