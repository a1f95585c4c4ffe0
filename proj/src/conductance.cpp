#include "mixlab/conductance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mixlab {

namespace {

struct Enumerator {
  const MultiGraph& g;
  int k_min;
  int k_max;
  const SetVisitor& visit;
  Vertex root = 0;
  std::vector<Vertex> members;
  std::vector<char> in_set;
  std::vector<std::size_t> adj_count;  // edge endpoints from v into the set
  SetStats stats;
  bool aborted = false;

  Enumerator(const MultiGraph& graph, int kmin, int kmax, const SetVisitor& v)
      : g(graph), k_min(kmin), k_max(kmax), visit(v) {
    in_set.assign(static_cast<std::size_t>(g.order()), 0);
    adj_count.assign(static_cast<std::size_t>(g.order()), 0);
  }

  void add(Vertex w) {
    for (Vertex u : g.neighbors(w)) {
      if (in_set[static_cast<std::size_t>(u)]) ++stats.internal;
      ++adj_count[static_cast<std::size_t>(u)];
    }
    in_set[static_cast<std::size_t>(w)] = 1;
    stats.deg_sum += static_cast<std::size_t>(g.degree(w));
    ++stats.k;
    members.push_back(w);
  }

  void remove(Vertex w) {
    members.pop_back();
    --stats.k;
    stats.deg_sum -= static_cast<std::size_t>(g.degree(w));
    in_set[static_cast<std::size_t>(w)] = 0;
    for (Vertex u : g.neighbors(w)) {
      --adj_count[static_cast<std::size_t>(u)];
      if (in_set[static_cast<std::size_t>(u)]) --stats.internal;
    }
  }

  void extend(const std::vector<Vertex>& ext) {
    if (stats.k >= k_min && !visit(members, stats)) {
      aborted = true;
      return;
    }
    if (stats.k >= k_max) return;
    for (std::size_t i = 0; i < ext.size() && !aborted; ++i) {
      const Vertex w = ext[i];
      // Exclusive neighbours of w (not in or adjacent to the current set),
      // evaluated before w joins; larger than the root only.
      std::vector<Vertex> next(ext.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                               ext.end());
      Vertex prev = -1;
      for (Vertex u : g.neighbors(w)) {
        if (u == prev) continue;  // parallel copies
        prev = u;
        if (u > root && !in_set[static_cast<std::size_t>(u)] &&
            adj_count[static_cast<std::size_t>(u)] == 0)
          next.push_back(u);
      }
      add(w);
      extend(next);
      remove(w);
    }
  }

  void run(Vertex r) {
    root = r;
    std::vector<Vertex> ext;
    Vertex prev = -1;
    for (Vertex u : g.neighbors(r)) {
      if (u == prev) continue;
      prev = u;
      if (u > r) ext.push_back(u);
    }
    add(r);
    extend(ext);
    remove(r);
  }
};

}  // namespace

void for_each_connected_set_from_root(const MultiGraph& g, Vertex root,
                                      int k_min, int k_max,
                                      const SetVisitor& visit) {
  if (k_min < 1 || k_max < k_min)
    throw std::invalid_argument("need 1 <= k_min <= k_max");
  Enumerator e(g, k_min, k_max, visit);
  e.run(root);
}

void for_each_connected_set_roots(const MultiGraph& g, Vertex root_begin,
                                  Vertex root_end, int k_min, int k_max,
                                  const SetVisitor& visit) {
  if (k_min < 1 || k_max < k_min)
    throw std::invalid_argument("need 1 <= k_min <= k_max");
  Enumerator e(g, k_min, k_max, visit);
  for (Vertex r = root_begin; r < root_end && !e.aborted; ++r) e.run(r);
}

void for_each_connected_set(const MultiGraph& g, int k_min, int k_max,
                            const SetVisitor& visit) {
  for_each_connected_set_roots(g, 0, g.order(), k_min, k_max, visit);
}

std::vector<VertexSet> enumerate_connected_sets(const MultiGraph& g, int k_min,
                                                int k_max) {
  std::vector<VertexSet> out;
  for_each_connected_set(g, k_min, k_max,
                         [&](std::span<const Vertex> members, const SetStats&) {
                           VertexSet s(members.begin(), members.end());
                           std::sort(s.begin(), s.end());
                           out.push_back(std::move(s));
                           return true;
                         });
  return out;
}

namespace {

void check_proper(const MultiGraph& g, std::span<const Vertex> s) {
  if (s.empty() || s.size() >= static_cast<std::size_t>(g.order()))
    throw std::invalid_argument("set must be a proper nonempty subset");
}

ConductanceParts parts_from_counts(std::size_t m, std::size_t boundary,
                                   std::size_t ds) {
  const std::size_t ds_bar = 2 * m - ds;
  if (ds == 0 || ds_bar == 0)
    throw std::domain_error("conductance undefined: one side has no edges");
  ConductanceParts out;
  out.q = static_cast<double>(boundary) / (4.0 * static_cast<double>(m));
  const double pi_s = static_cast<double>(ds) / (2.0 * static_cast<double>(m));
  const double pi_bar =
      static_cast<double>(ds_bar) / (2.0 * static_cast<double>(m));
  out.phi_q_route = out.q / (pi_s * pi_bar);
  out.phi = static_cast<double>(m) * static_cast<double>(boundary) /
            (static_cast<double>(ds) * static_cast<double>(ds_bar));
  out.lower_bound = static_cast<double>(boundary) / (2.0 * static_cast<double>(ds));
  const double tol = 1e-12 * std::max(1.0, std::abs(out.phi));
  if (std::abs(out.phi - out.phi_q_route) > tol)
    throw std::logic_error("conductance: the two formulas disagree");
  if (out.phi + 1e-15 < out.lower_bound)
    throw std::logic_error("conductance fell below its |∂|/(2 deg) lower bound");
  return out;
}

}  // namespace

double edge_flow(const MultiGraph& g, std::span<const Vertex> s) {
  check_proper(g, s);
  if (g.size() == 0) throw std::domain_error("edge_flow: graph has no edges");
  return static_cast<double>(boundary_size(g, s)) /
         (4.0 * static_cast<double>(g.size()));
}

ConductanceParts conductance_parts(const MultiGraph& g,
                                   std::span<const Vertex> s) {
  check_proper(g, s);
  if (g.size() == 0) throw std::domain_error("conductance: graph has no edges");
  const std::size_t boundary = boundary_size(g, s);
  const std::size_t ds = degree_sum(g, s);
  return parts_from_counts(g.size(), boundary, ds);
}

double conductance(const MultiGraph& g, std::span<const Vertex> s) {
  return conductance_parts(g, s).phi;
}

namespace {

// Random connected growth shared by the sampler and the sampled profile.
struct Growth {
  const MultiGraph& g;
  std::vector<char> in_set;
  std::vector<char> in_frontier;
  std::vector<Vertex> frontier;
  std::vector<Vertex> members;
  SetStats stats;

  explicit Growth(const MultiGraph& graph) : g(graph) {
    in_set.assign(static_cast<std::size_t>(g.order()), 0);
    in_frontier.assign(static_cast<std::size_t>(g.order()), 0);
  }

  void reset() {
    for (Vertex v : members) in_set[static_cast<std::size_t>(v)] = 0;
    for (Vertex v : frontier) in_frontier[static_cast<std::size_t>(v)] = 0;
    members.clear();
    frontier.clear();
    stats = SetStats{};
  }

  void add(Vertex w) {
    for (Vertex u : g.neighbors(w))
      if (in_set[static_cast<std::size_t>(u)]) ++stats.internal;
    in_set[static_cast<std::size_t>(w)] = 1;
    stats.deg_sum += static_cast<std::size_t>(g.degree(w));
    ++stats.k;
    members.push_back(w);
    for (Vertex u : g.neighbors(w)) {
      if (!in_set[static_cast<std::size_t>(u)] &&
          !in_frontier[static_cast<std::size_t>(u)]) {
        in_frontier[static_cast<std::size_t>(u)] = 1;
        frontier.push_back(u);
      }
    }
  }

  // Removes and returns a uniformly random frontier vertex.
  Vertex pop_frontier(Rng& rng) {
    const std::size_t i = rng.below(frontier.size());
    const Vertex w = frontier[i];
    frontier[i] = frontier.back();
    frontier.pop_back();
    in_frontier[static_cast<std::size_t>(w)] = 0;
    return w;
  }
};

}  // namespace

std::vector<VertexSet> sample_connected_sets(const MultiGraph& g, int k,
                                             int count, Seed seed) {
  if (k < 1 || k > g.order())
    throw std::invalid_argument("need 1 <= k <= n");
  std::size_t biggest = 0;
  for (const auto& comp : connected_components(g))
    biggest = std::max(biggest, comp.size());
  if (biggest < static_cast<std::size_t>(k))
    throw std::domain_error("no connected set of size k: every component is smaller");
  Rng rng(seed);
  Growth grow(g);
  std::vector<VertexSet> out;
  out.reserve(static_cast<std::size_t>(count));
  long attempts_left = 100L * count + 100;
  while (static_cast<int>(out.size()) < count) {
    if (--attempts_left < 0)
      throw std::runtime_error("sample_connected_sets: attempt budget exhausted");
    grow.reset();
    grow.add(static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(g.order()))));
    while (grow.stats.k < k && !grow.frontier.empty())
      grow.add(grow.pop_frontier(rng));
    if (grow.stats.k < k) continue;  // component too small; re-root
    VertexSet s(grow.members.begin(), grow.members.end());
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

int profile_level_count(const MultiGraph& g) {
  // smallest J with 2^J >= 1/π_min = 2m / d_min
  std::size_t d_min = static_cast<std::size_t>(g.degree(0));
  for (Vertex v = 1; v < g.order(); ++v)
    d_min = std::min(d_min, static_cast<std::size_t>(g.degree(v)));
  const std::size_t two_m = 2 * g.size();
  int j = 0;
  unsigned __int128 lhs = d_min;
  while (lhs < two_m) {
    lhs <<= 1;
    ++j;
  }
  return std::max(1, j);
}

// Levels whose window [p/2, p] contains π = ds/2m: exactly those j with
// m <= ds·2^j <= 2m (ties land in two adjacent windows).
template <typename Fn>
void windows_of(std::size_t ds, std::size_t m, int levels, Fn&& fn) {
  unsigned __int128 v = ds;
  for (int j = 1; j <= levels; ++j) {
    v <<= 1;
    if (v > 2 * static_cast<unsigned __int128>(m)) break;
    if (v >= m) fn(j);
  }
}

struct LevelAccumulator {
  std::vector<ProfileLevel> levels;

  explicit LevelAccumulator(int count) {
    levels.resize(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j) {
      levels[static_cast<std::size_t>(j - 1)].j = j;
      levels[static_cast<std::size_t>(j - 1)].p = std::ldexp(1.0, -j);
    }
  }

  void offer(const MultiGraph& g, std::span<const Vertex> members,
             const SetStats& stats, int levels_total) {
    windows_of(stats.deg_sum, g.size(), levels_total, [&](int j) {
      ProfileLevel& lvl = levels[static_cast<std::size_t>(j - 1)];
      ++lvl.examined;
      const double phi =
          parts_from_counts(g.size(), stats.boundary(), stats.deg_sum).phi;
      if (!lvl.witness || phi < lvl.phi) {
        lvl.phi = phi;
        VertexSet w(members.begin(), members.end());
        std::sort(w.begin(), w.end());
        lvl.witness = std::move(w);
      }
    });
  }
};

}  // namespace

ConductanceProfile conductance_profile(const MultiGraph& g,
                                       const ProfileOptions& opts) {
  if (!is_connected(g))
    throw std::domain_error("conductance profile requires a connected graph");
  if (g.order() < 2)
    throw std::domain_error("conductance profile needs at least two vertices");
  const int levels_total = profile_level_count(g);
  LevelAccumulator acc(levels_total);

  if (opts.mode == ProfileMode::exact) {
    if (g.order() > opts.exact_n_limit)
      throw std::invalid_argument(
          "exact conductance profile refused above n = " +
          std::to_string(opts.exact_n_limit) +
          " (sampled mode is the supported path at this size)");
    for_each_connected_set(
        g, 1, g.order() - 1,
        [&](std::span<const Vertex> members, const SetStats& stats) {
          acc.offer(g, members, stats, levels_total);
          return true;
        });
  } else {
    // All singletons.
    for (Vertex v = 0; v < g.order(); ++v) {
      SetStats st;
      st.k = 1;
      st.internal = 0;
      st.deg_sum = static_cast<std::size_t>(g.degree(v));
      acc.offer(g, std::span<const Vertex>(&v, 1), st, levels_total);
    }
    // All adjacent pairs.
    for (Vertex u = 0; u < g.order(); ++u) {
      Vertex prev = -1;
      for (Vertex v : g.neighbors(u)) {
        if (v <= u || v == prev) continue;
        prev = v;
        const Vertex pair[2] = {u, v};
        SetStats st;
        st.k = 2;
        st.internal = g.multiplicity(u, v);
        st.deg_sum =
            static_cast<std::size_t>(g.degree(u)) + static_cast<std::size_t>(g.degree(v));
        acc.offer(g, std::span<const Vertex>(pair, 2), st, levels_total);
      }
    }
    // Random connected growths; every prefix that lands in a window is a
    // candidate, so one growth feeds all levels.
    Rng rng(opts.seed);
    Growth grow(g);
    const std::size_t two_m = 2 * g.size();
    for (int b = 0; b < opts.budget; ++b) {
      grow.reset();
      grow.add(static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(g.order()))));
      for (;;) {
        if (grow.stats.k > 2)  // singletons and pairs are already covered
          acc.offer(g, grow.members, grow.stats, levels_total);
        if (grow.frontier.empty()) break;
        if (2 * grow.stats.deg_sum > two_m) break;  // π(S) above 1/2: done
        grow.add(grow.pop_frontier(rng));
      }
    }
  }

  ConductanceProfile out;
  out.mode = opts.mode;
  out.levels = std::move(acc.levels);
  return out;
}

FrBound fr_bound(const MultiGraph& g, double c0, const ProfileOptions& opts) {
  if (c0 <= 0) throw std::invalid_argument("C0 must be positive");
  FrBound out;
  out.profile = conductance_profile(g, opts);
  for (const ProfileLevel& lvl : out.profile.levels)
    out.sum += 1.0 / (lvl.phi * lvl.phi);
  out.bound = c0 * out.sum;
  // Sampled minima can miss the true minimum, so the bound is heuristic.
  out.rigorous = opts.mode == ProfileMode::exact;
  return out;
}

}  // namespace mixlab
