#include "mixlab/spreader.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "mixlab/conductance.hpp"
#include "mixlab/parallel.hpp"
#include "mixlab/walk.hpp"

namespace mixlab {

SpreaderParams SpreaderParams::standard(Vertex n, double alpha, double D) {
  if (D < 4.0) throw std::invalid_argument("spreader regime needs D >= 4");
  if (!(alpha > 0.0 && alpha < 1.0 / (D * D)))
    throw std::invalid_argument("spreader regime needs 0 < alpha < 1/D^2");
  SpreaderParams p;
  p.alpha = alpha;
  p.D = D;
  p.beta = 1.0 / (D * D);
  p.gamma = alpha * alpha / 4.0;
  const double ln = std::log(std::max<double>(2.0, n));
  p.k_lo = static_cast<long>(std::ceil(std::pow(ln, 0.2)));
  p.k_lo = std::max<long>(1, p.k_lo);
  p.k_hi = static_cast<long>(std::floor((1.0 - p.beta) * static_cast<double>(n)));
  return p;
}

SpreaderParams SpreaderParams::with_gamma(double gamma_override) const {
  if (gamma_override <= 0) throw std::invalid_argument("gamma must be positive");
  SpreaderParams p = *this;
  p.gamma = gamma_override;
  return p;
}

SpreaderParams SpreaderParams::with_window(long lo, long hi) const {
  if (lo < 1 || hi < lo) throw std::invalid_argument("need 1 <= k_lo <= k_hi");
  SpreaderParams p = *this;
  p.k_lo = lo;
  p.k_hi = hi;
  return p;
}

bool is_thin(const MultiGraph& g, std::span<const Vertex> s, double alpha) {
  if (s.empty()) throw std::invalid_argument("empty set");
  return static_cast<double>(boundary_size(g, s)) <
         alpha * static_cast<double>(s.size());
}

bool is_loaded(const MultiGraph& g, std::span<const Vertex> s, double D) {
  if (s.empty()) throw std::invalid_argument("empty set");
  return static_cast<double>(internal_edges(g, s)) >
         D * static_cast<double>(s.size());
}

bool is_bad(const MultiGraph& g, std::span<const Vertex> s, double gamma) {
  if (s.empty()) throw std::invalid_argument("empty set");
  const std::size_t ds = degree_sum(g, s);
  if (ds == 0) throw std::domain_error("isolated set: boundary ratio undefined");
  return static_cast<double>(boundary_size(g, s)) <
         gamma * static_cast<double>(ds);
}

BadDecomposition bad_implies_thin_or_loaded(const MultiGraph& g,
                                            std::span<const Vertex> s,
                                            double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("need 0 < alpha <= 1");
  BadDecomposition out;
  const std::size_t boundary = boundary_size(g, s);
  const std::size_t internal = internal_edges(g, s);
  const std::size_t ds = 2 * internal + boundary;
  out.precondition_bad =
      ds > 0 && static_cast<double>(boundary) <
                    (alpha * alpha / 4.0) * static_cast<double>(ds);
  out.boundary_le_2e = boundary <= 2 * internal;
  out.thin =
      static_cast<double>(boundary) < alpha * static_cast<double>(s.size());
  out.loaded = static_cast<double>(internal) >
               (1.0 / alpha) * static_cast<double>(s.size());
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::partial:
      return "partial";
  }
  return {};
}

namespace {

// ---- Dinic max flow on int64 capacities -------------------------------

struct Dinic {
  struct Arc {
    int to;
    long long cap;
    int rev;
  };
  std::vector<std::vector<Arc>> adj;
  std::vector<int> level, iter;

  explicit Dinic(int n) : adj(static_cast<std::size_t>(n)) {}

  void add_edge(int from, int to, long long cap) {
    adj[static_cast<std::size_t>(from)].push_back(
        {to, cap, static_cast<int>(adj[static_cast<std::size_t>(to)].size())});
    adj[static_cast<std::size_t>(to)].push_back(
        {from, 0,
         static_cast<int>(adj[static_cast<std::size_t>(from)].size()) - 1});
  }

  bool bfs(int s, int t) {
    level.assign(adj.size(), -1);
    std::queue<int> q;
    level[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const Arc& a : adj[static_cast<std::size_t>(v)]) {
        if (a.cap > 0 && level[static_cast<std::size_t>(a.to)] < 0) {
          level[static_cast<std::size_t>(a.to)] =
              level[static_cast<std::size_t>(v)] + 1;
          q.push(a.to);
        }
      }
    }
    return level[static_cast<std::size_t>(t)] >= 0;
  }

  long long dfs(int v, int t, long long f) {
    if (v == t) return f;
    for (int& i = iter[static_cast<std::size_t>(v)];
         i < static_cast<int>(adj[static_cast<std::size_t>(v)].size()); ++i) {
      Arc& a = adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
      if (a.cap > 0 && level[static_cast<std::size_t>(v)] <
                           level[static_cast<std::size_t>(a.to)]) {
        long long d = dfs(a.to, t, std::min(f, a.cap));
        if (d > 0) {
          a.cap -= d;
          adj[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)]
              .cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  long long max_flow(int s, int t) {
    long long flow = 0;
    while (bfs(s, t)) {
      iter.assign(adj.size(), 0);
      long long f;
      while ((f = dfs(s, t, std::numeric_limits<long long>::max())) > 0)
        flow += f;
    }
    return flow;
  }

  // Nodes that can still reach t in the residual network; the complement is
  // the largest source side among minimum cuts.
  std::vector<char> reaches_sink(int t) const {
    std::vector<char> mark(adj.size(), 0);
    std::vector<int> stack{t};
    mark[static_cast<std::size_t>(t)] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const Arc& a : adj[static_cast<std::size_t>(v)]) {
        // arc a.to -> v has residual iff the reverse arc stored here has cap
        const Arc& rev =
            adj[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)];
        if (rev.cap > 0 && !mark[static_cast<std::size_t>(a.to)]) {
          mark[static_cast<std::size_t>(a.to)] = 1;
          stack.push_back(a.to);
        }
      }
    }
    return mark;
  }
};

// Best rational a/b for x with b bounded (continued fractions).
std::pair<long long, long long> to_rational(double x, long long max_den) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int i = 0; i < 64; ++i) {
    const double af = std::floor(v);
    const long long a = static_cast<long long>(af);
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > max_den || q2 <= 0) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = v - af;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  if (q1 <= 0) return {static_cast<long long>(std::llround(x)), 1};
  return {p1, q1};
}

}  // namespace

std::optional<VertexSet> loaded_set_witness(const MultiGraph& g, double D) {
  if (D <= 0) throw std::invalid_argument("D must be positive");
  const Vertex n = g.order();
  if (n == 0 || g.size() == 0) return std::nullopt;
  const auto [num, den] = to_rational(D, 1 << 20);

  // Distinct edges with multiplicity.
  struct DistinctEdge {
    Vertex u, v;
    long long mult;
  };
  std::vector<DistinctEdge> edges;
  for (Vertex u = 0; u < n; ++u) {
    auto nb = g.neighbors(u);
    for (std::size_t i = 0; i < nb.size();) {
      std::size_t j = i;
      while (j < nb.size() && nb[j] == nb[i]) ++j;
      if (u < nb[i])
        edges.push_back({u, nb[i], static_cast<long long>(j - i)});
      i = j;
    }
  }

  // max_S e(S) - D|S| > 0  <=>  max flow < den * m in the decision network:
  // s -> edge (den*mult), edge -> endpoints (inf), vertex -> t (num).
  const int s = 0;
  const int t = 1;
  const int vertex_base = 2;
  const int edge_base = vertex_base + n;
  Dinic dinic(edge_base + static_cast<int>(edges.size()));
  long long total = 0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    total += den * edges[i].mult;
  const long long inf = total + static_cast<long long>(n) * num + 1;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int enode = edge_base + static_cast<int>(i);
    dinic.add_edge(s, enode, den * edges[i].mult);
    dinic.add_edge(enode, vertex_base + edges[i].u, inf);
    dinic.add_edge(enode, vertex_base + edges[i].v, inf);
  }
  for (Vertex v = 0; v < n; ++v)
    dinic.add_edge(vertex_base + v, t, num);

  const long long flow = dinic.max_flow(s, t);
  if (flow >= total) return std::nullopt;

  const std::vector<char> to_sink = dinic.reaches_sink(t);
  VertexSet witness;
  for (Vertex v = 0; v < n; ++v)
    if (!to_sink[static_cast<std::size_t>(vertex_base + v)])
      witness.push_back(v);
  return witness;
}

namespace {

S3Report check_s3(const MultiGraph& g, const SpreaderParams& params) {
  S3Report out;
  const Vertex n = g.order();
  const long k_target = static_cast<long>(
      std::ceil(params.alpha * static_cast<double>(n) - 1e-12));
  auto witness = loaded_set_witness(g, params.D);
  if (!witness) {
    out.verdict = Verdict::pass;
    out.note = "no D-loaded set exists at any size";
    return out;
  }
  if (k_target > n) {
    out.verdict = Verdict::pass;
    out.note = "alpha*n exceeds n; the size condition is vacuous";
    return out;
  }
  VertexSet w = *witness;
  auto density = [&](const VertexSet& set) {
    return static_cast<double>(internal_edges(g, set)) /
           static_cast<double>(set.size());
  };
  if (static_cast<long>(w.size()) >= k_target) {
    out.verdict = Verdict::fail;
    out.witness_density = density(w);
    out.witness = std::move(w);
    out.note = "maximal loaded set reaches alpha*n";
    return out;
  }
  // Pad greedily towards alpha*n; if the padded set is still loaded the
  // failure is definite, otherwise the check stays inconclusive.
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  std::vector<long> gain(static_cast<std::size_t>(n), 0);
  for (Vertex v : w) in[static_cast<std::size_t>(v)] = 1;
  for (Vertex v : w)
    for (Vertex u : g.neighbors(v))
      if (!in[static_cast<std::size_t>(u)]) ++gain[static_cast<std::size_t>(u)];
  VertexSet padded = w;
  while (static_cast<long>(padded.size()) < k_target) {
    Vertex best = -1;
    long best_gain = -1;
    for (Vertex v = 0; v < n; ++v) {
      if (in[static_cast<std::size_t>(v)]) continue;
      if (gain[static_cast<std::size_t>(v)] > best_gain) {
        best_gain = gain[static_cast<std::size_t>(v)];
        best = v;
      }
    }
    if (best < 0) break;
    in[static_cast<std::size_t>(best)] = 1;
    padded.push_back(best);
    for (Vertex u : g.neighbors(best))
      if (!in[static_cast<std::size_t>(u)]) ++gain[static_cast<std::size_t>(u)];
  }
  std::sort(padded.begin(), padded.end());
  if (static_cast<long>(padded.size()) >= k_target &&
      is_loaded(g, padded, params.D)) {
    out.verdict = Verdict::fail;
    out.padded = true;
    out.witness_density = density(padded);
    out.witness = std::move(padded);
    out.note = "loaded witness padded to alpha*n stays loaded";
    return out;
  }
  out.verdict = Verdict::partial;
  out.witness_density = density(w);
  out.witness = std::move(w);
  out.note =
      "a loaded set exists below alpha*n and padding is not loaded: inconclusive, refine";
  return out;
}

constexpr std::size_t kWitnessCap = 4;
constexpr Vertex kRootBlock = 64;

struct RootAccumulator {
  std::vector<std::size_t> thin_count;  // indexed by k - k_lo
  std::vector<std::size_t> loaded_count;
  std::vector<std::vector<VertexSet>> thin_sets;  // up to kWitnessCap per k
  std::vector<std::vector<VertexSet>> loaded_sets;
  std::vector<Vertex> bad_vertices;
};

}  // namespace

SpreaderScan spreader_scan(const MultiGraph& g, const SpreaderParams& params,
                           long k_cap) {
  if (k_cap < 0) throw std::invalid_argument("k_cap must be non-negative");
  const Vertex n = g.order();
  const double nd = static_cast<double>(n);
  const long k_top = std::min<long>({params.k_hi, k_cap, n});
  const long k_lo = params.k_lo;
  const std::size_t n_k =
      k_top >= k_lo ? static_cast<std::size_t>(k_top - k_lo + 1) : 0;

  const std::size_t n_blocks =
      n == 0 ? 0
             : (static_cast<std::size_t>(n) + kRootBlock - 1) / kRootBlock;
  std::vector<RootAccumulator> acc(n_blocks);

  if (n_k > 0) {
    parallel_blocks(
        static_cast<std::size_t>(n), kRootBlock,
        [&](std::size_t b, std::size_t lo, std::size_t hi) {
          RootAccumulator& a = acc[b];
          a.thin_count.assign(n_k, 0);
          a.loaded_count.assign(n_k, 0);
          a.thin_sets.resize(n_k);
          a.loaded_sets.resize(n_k);
          for_each_connected_set_roots(
              g, static_cast<Vertex>(lo), static_cast<Vertex>(hi),
              static_cast<int>(k_lo), static_cast<int>(k_top),
              [&](std::span<const Vertex> members, const SetStats& st) {
                const std::size_t idx =
                    static_cast<std::size_t>(st.k - k_lo);
                const std::size_t boundary = st.boundary();
                const double size = static_cast<double>(st.k);
                const bool thin =
                    static_cast<double>(boundary) < params.alpha * size;
                const bool loaded = static_cast<double>(st.internal) >
                                    (1.0 / params.alpha) * size;
                const bool bad =
                    st.deg_sum > 0 &&
                    static_cast<double>(boundary) <
                        params.gamma * static_cast<double>(st.deg_sum);
                if (thin) {
                  ++a.thin_count[idx];
                  if (a.thin_sets[idx].size() < kWitnessCap) {
                    VertexSet s(members.begin(), members.end());
                    std::sort(s.begin(), s.end());
                    a.thin_sets[idx].push_back(std::move(s));
                  }
                }
                if (loaded) {
                  ++a.loaded_count[idx];
                  if (a.loaded_sets[idx].size() < kWitnessCap) {
                    VertexSet s(members.begin(), members.end());
                    std::sort(s.begin(), s.end());
                    a.loaded_sets[idx].push_back(std::move(s));
                  }
                }
                if (bad)
                  a.bad_vertices.insert(a.bad_vertices.end(), members.begin(),
                                        members.end());
                return true;
              });
        });
  }

  // Merge in block order.
  std::vector<std::size_t> thin_count(n_k, 0), loaded_count(n_k, 0);
  std::vector<std::vector<VertexSet>> thin_sets(n_k), loaded_sets(n_k);
  std::vector<char> in_u(static_cast<std::size_t>(n), 0);
  for (const RootAccumulator& a : acc) {
    for (std::size_t i = 0; i < a.thin_count.size(); ++i) {
      thin_count[i] += a.thin_count[i];
      loaded_count[i] += a.loaded_count[i];
      for (const VertexSet& s : a.thin_sets[i])
        if (thin_sets[i].size() < kWitnessCap) thin_sets[i].push_back(s);
      for (const VertexSet& s : a.loaded_sets[i])
        if (loaded_sets[i].size() < kWitnessCap) loaded_sets[i].push_back(s);
    }
    for (Vertex v : a.bad_vertices) in_u[static_cast<std::size_t>(v)] = 1;
  }

  SpreaderScan out;
  auto build_condition = [&](const std::vector<std::size_t>& counts,
                             const std::vector<std::vector<VertexSet>>& sets) {
    ConditionReport rep;
    rep.k_checked = n_k > 0 ? k_top : std::min(k_cap, params.k_hi);
    long first_fail = -1;
    for (std::size_t i = 0; i < n_k; ++i) {
      const long k = k_lo + static_cast<long>(i);
      PerKCount pk;
      pk.k = k;
      pk.count = counts[i];
      pk.threshold = nd * std::exp(-std::sqrt(static_cast<double>(k)));
      rep.per_k.push_back(pk);
      if (first_fail < 0 && static_cast<double>(counts[i]) >= pk.threshold)
        first_fail = k;
    }
    if (first_fail >= 0) {
      rep.verdict = Verdict::fail;
      rep.witnesses = sets[static_cast<std::size_t>(first_fail - k_lo)];
    } else if (k_top >= params.k_hi || params.k_hi < k_lo) {
      rep.verdict = Verdict::pass;
    } else {
      rep.verdict = Verdict::partial;
    }
    return rep;
  };
  out.certificate.s1 = build_condition(thin_count, thin_sets);
  out.certificate.s2 = build_condition(loaded_count, loaded_sets);
  out.certificate.s3 = check_s3(g, params);

  BadSetReport& bad = out.bad;
  for (Vertex v = 0; v < n; ++v)
    if (in_u[static_cast<std::size_t>(v)]) bad.u.push_back(v);
  bad.blocks = components_within(g, bad.u);
  bad.deg_u = degree_sum(g, bad.u);
  bad.pi_u = g.size() > 0 ? static_cast<double>(bad.deg_u) /
                                (2.0 * static_cast<double>(g.size()))
                          : 0.0;
  const double ln = std::log(std::max(2.0, nd));
  bad.size_threshold = nd * std::exp(-std::pow(ln, 1.0 / 11.0));
  bad.pi_threshold = std::exp(-std::pow(ln, 1.0 / 11.0));
  bad.partial = k_top < params.k_hi;
  bad.k_checked = n_k > 0 ? k_top : std::min(k_cap, params.k_hi);
  return out;
}

SpreaderCertificate spreader_check(const MultiGraph& g,
                                   const SpreaderParams& params, long k_cap) {
  return spreader_scan(g, params, k_cap).certificate;
}

BadSetReport bad_set_union(const MultiGraph& g, const SpreaderParams& params,
                           long k_cap) {
  return spreader_scan(g, params, k_cap).bad;
}

}  // namespace mixlab
