#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

// Incremental statistics handed to enumeration visitors. boundary() follows
// from deg(S) = 2 e(S) + |∂(S)|.
struct SetStats {
  int k = 0;
  std::size_t internal = 0;
  std::size_t deg_sum = 0;
  std::size_t boundary() const { return deg_sum - 2 * internal; }
};

// members is the current set in insertion order (not sorted). Return false
// to abort the enumeration.
using SetVisitor =
    std::function<bool(std::span<const Vertex>, const SetStats&)>;

// Visits every G-connected set S with k_min <= |S| <= k_max exactly once.
// Each set is generated from its smallest vertex, extending only through
// vertices that are larger than the root and not yet adjacent to the set, so
// no deduplication pass is needed.
void for_each_connected_set(const MultiGraph& g, int k_min, int k_max,
                            const SetVisitor& visit);

// Same enumeration restricted to sets whose minimum vertex is `root`;
// drivers parallelise over roots and merge per-root results in root order.
void for_each_connected_set_from_root(const MultiGraph& g, Vertex root,
                                      int k_min, int k_max,
                                      const SetVisitor& visit);

// Runs the roots in [root_begin, root_end) on one shared enumerator state;
// cheaper than per-root calls when a driver processes root blocks.
void for_each_connected_set_roots(const MultiGraph& g, Vertex root_begin,
                                  Vertex root_end, int k_min, int k_max,
                                  const SetVisitor& visit);

// Collects the sets (sorted) — convenience for tests and small n.
std::vector<VertexSet> enumerate_connected_sets(const MultiGraph& g, int k_min,
                                                int k_max);

// Q_G(S) = |∂(S)| / 4e(G). S must be a proper nonempty subset.
double edge_flow(const MultiGraph& g, std::span<const Vertex> s);

struct ConductanceParts {
  double phi = 0;          // e(G)|∂(S)| / (deg(S) deg(V\S))
  double phi_q_route = 0;  // Q(S) / (π(S) π(V\S)); agrees with phi to 1e-12
  double q = 0;
  double lower_bound = 0;  // |∂(S)| / (2 deg(S)), never above phi
};

ConductanceParts conductance_parts(const MultiGraph& g,
                                   std::span<const Vertex> s);
double conductance(const MultiGraph& g, std::span<const Vertex> s);

// `count` G-connected sets of size exactly k grown by randomised BFS from
// uniform roots. The sampling distribution is not uniform over connected
// sets; everything derived from it is heuristic.
std::vector<VertexSet> sample_connected_sets(const MultiGraph& g, int k,
                                             int count, Seed seed);

enum class ProfileMode { exact, sampled };

struct ProfileLevel {
  int j = 0;
  double p = 0;
  double phi = 1.0;
  std::optional<VertexSet> witness;  // empty when no set hits the window
  std::size_t examined = 0;
};

struct ConductanceProfile {
  std::vector<ProfileLevel> levels;
  ProfileMode mode = ProfileMode::exact;
};

struct ProfileOptions {
  ProfileMode mode = ProfileMode::sampled;
  int exact_n_limit = 30;  // exact mode refuses larger graphs
  int budget = 64;         // random growths in sampled mode
  Seed seed{};
};

// Φ_G(p) over the dyadic levels p = 2^-j, j = 1..ceil(log2 1/π_min). Exact
// mode enumerates every connected set; sampled mode minimises over all
// singletons, all adjacent pairs and `budget` random connected growths.
ConductanceProfile conductance_profile(const MultiGraph& g,
                                       const ProfileOptions& opts);

struct FrBound {
  double sum = 0;    // Σ_j Φ^{-2}(2^{-j})
  double bound = 0;  // C0 * sum
  bool rigorous = false;
  ConductanceProfile profile;
};

FrBound fr_bound(const MultiGraph& g, double c0, const ProfileOptions& opts);

}  // namespace mixlab
