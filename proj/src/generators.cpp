#include "mixlab/generators.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mixlab {

namespace {

std::vector<Edge> dedup(std::vector<Edge> edges) {
  for (Edge& e : edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u < b.u || (a.u == b.u && a.v < b.v);
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) {
                            return a.u == b.u && a.v == b.v;
                          }),
              edges.end());
  return edges;
}

// Appends the pairs selected by Bernoulli(p) over the lexicographic sequence
// of all C(n,2) pairs, using geometric gaps.
void sample_pairs(Vertex n, double p, Rng& rng, std::vector<Edge>& out) {
  if (p <= 0.0 || n < 2) return;
  const std::size_t total =
      static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) - 1) / 2;
  if (p >= 1.0) {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) out.push_back({u, v});
    return;
  }
  const double log_q = std::log1p(-p);
  std::size_t idx = 0;            // next candidate pair
  Vertex row = 0;
  std::size_t row_start = 0;      // index of pair (row, row+1)
  std::size_t row_len = static_cast<std::size_t>(n) - 1;
  for (;;) {
    const double u = rng.next_unit();
    const double gap = std::floor(std::log1p(-u) / log_q);
    if (gap >= static_cast<double>(total)) break;  // guards inf/overflow
    idx += static_cast<std::size_t>(gap);
    if (idx >= total) break;
    while (idx >= row_start + row_len) {
      row_start += row_len;
      --row_len;
      ++row;
    }
    const Vertex col = row + 1 + static_cast<Vertex>(idx - row_start);
    out.push_back({row, col});
    ++idx;
  }
}

}  // namespace

Graph make_path(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, static_cast<Vertex>(v + 1)});
  return Graph(n, edges);
}

Graph make_cycle(Vertex n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v)
    edges.push_back({v, static_cast<Vertex>((v + 1) % n)});
  return Graph(n, edges);
}

Graph make_complete(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, edges);
}

Graph make_star(Vertex leaves) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return Graph(leaves + 1, edges);
}

Graph make_circulant(Vertex n, std::span<const Vertex> offsets) {
  std::vector<Edge> edges;
  for (Vertex o : offsets) {
    if (o < 1 || 2 * o >= n)
      throw std::invalid_argument("circulant offset must satisfy 1 <= o < n/2");
    for (Vertex v = 0; v < n; ++v)
      edges.push_back({v, static_cast<Vertex>((v + o) % n)});
  }
  return Graph(n, dedup(std::move(edges)));
}

Graph gen_gnp(Vertex n, double p, Seed seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("gnp probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  if (p > 0.0 && n >= 2)
    edges.reserve(static_cast<std::size_t>(
        p * static_cast<double>(n) * (static_cast<double>(n) - 1) / 2 * 1.2 + 16));
  sample_pairs(n, p, rng, edges);
  return Graph(n, edges);
}

Graph perturb(const Graph& g, double eps, Seed seed) {
  if (eps < 0) throw std::invalid_argument("eps must be non-negative");
  const Vertex n = g.order();
  Graph r = gen_gnp(n, n > 0 ? eps / static_cast<double>(n) : 0.0, seed);
  std::vector<Edge> edges = g.edge_list();
  std::vector<Edge> extra = r.edge_list();
  edges.insert(edges.end(), extra.begin(), extra.end());
  return Graph(n, dedup(std::move(edges)));
}

Graph gen_newman_watts(Vertex n, Vertex k, double eps, Seed seed) {
  if (k < 1 || 2 * k >= n)
    throw std::invalid_argument("newman-watts requires 1 <= k < n/2");
  if (eps < 0) throw std::invalid_argument("eps must be non-negative");
  std::vector<Edge> edges;
  for (Vertex o = 1; o <= k; ++o)
    for (Vertex v = 0; v < n; ++v)
      edges.push_back({v, static_cast<Vertex>((v + o) % n)});
  // Bernoulli(eps/n) over all pairs; band pairs that fire collapse in the
  // union, which leaves the remaining pairs independent as required.
  Rng rng(seed);
  sample_pairs(n, eps / static_cast<double>(n), rng, edges);
  return Graph(n, dedup(std::move(edges)));
}

MultiGraph percolate(const MultiGraph& g, double p, Seed seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("retention probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> kept;
  for (const Edge& e : g.edge_list())
    if (rng.next_unit() < p) kept.push_back(e);
  return MultiGraph(g.order(), kept);
}

Graph percolate(const Graph& g, double p, Seed seed) {
  return simple_from_multi(percolate(g.multi(), p, seed));
}

Graph gen_random_regular(Vertex n, Vertex d, Seed seed, int max_tries) {
  if (d < 0 || d >= n) throw std::invalid_argument("need 0 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw std::invalid_argument("n*d must be even");
  std::vector<Vertex> stubs(static_cast<std::size_t>(n) * d);
  for (Vertex v = 0; v < n; ++v)
    for (Vertex i = 0; i < d; ++i) stubs[static_cast<std::size_t>(v) * d + i] = v;
  Seed attempt = seed;
  for (int t = 0; t < max_tries; ++t, attempt = attempt.next_stream()) {
    Rng rng(attempt);
    for (std::size_t i = stubs.size(); i > 1; --i)
      std::swap(stubs[i - 1], stubs[rng.below(i)]);
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
      if (stubs[i] == stubs[i + 1]) ok = false;
      edges.push_back({stubs[i], stubs[i + 1]});
    }
    if (!ok) continue;
    MultiGraph m(n, edges);
    if (!m.is_simple()) continue;
    return simple_from_multi(std::move(m));
  }
  throw std::runtime_error("configuration model: no simple pairing within retry cap");
}

HostSpec HostSpec::parse(const std::string& text) {
  HostSpec spec;
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("host spec needs '<kind>:<params>'");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "file") {
    spec.kind = Kind::file;
    spec.path = rest;
    if (spec.path.empty()) throw std::invalid_argument("file host needs a path");
    return spec;
  }
  if (kind == "complete") {
    spec.kind = Kind::complete;
  } else if (kind == "circulant") {
    spec.kind = Kind::circulant;
  } else if (kind == "random-regular") {
    spec.kind = Kind::random_regular;
  } else {
    throw std::invalid_argument("unknown host kind: " + kind);
  }
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    const std::string item = rest.substr(pos, comma - pos);
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("host param needs key=value: " + item);
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key == "n") {
      spec.n = static_cast<Vertex>(std::stol(val));
    } else if (key == "d") {
      spec.d = static_cast<Vertex>(std::stol(val));
    } else if (key == "offsets") {
      std::size_t p2 = 0;
      while (p2 < val.size()) {
        auto semi = val.find(';', p2);
        if (semi == std::string::npos) semi = val.size();
        spec.offsets.push_back(
            static_cast<Vertex>(std::stol(val.substr(p2, semi - p2))));
        p2 = semi + 1;
      }
    } else {
      throw std::invalid_argument("unknown host param: " + key);
    }
    pos = comma + 1;
  }
  if (spec.n <= 0) throw std::invalid_argument("host needs n > 0");
  if (spec.kind == Kind::circulant && spec.offsets.empty())
    throw std::invalid_argument("circulant host needs offsets");
  if (spec.kind == Kind::random_regular && spec.d <= 0)
    throw std::invalid_argument("random-regular host needs d > 0");
  return spec;
}

std::string HostSpec::to_string() const {
  switch (kind) {
    case Kind::complete:
      return "complete:n=" + std::to_string(n);
    case Kind::circulant: {
      std::string s = "circulant:n=" + std::to_string(n) + ",offsets=";
      for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(offsets[i]);
      }
      return s;
    }
    case Kind::random_regular:
      return "random-regular:n=" + std::to_string(n) + ",d=" + std::to_string(d);
    case Kind::file:
      return "file:" + path;
  }
  return {};
}

Graph materialize_host(const HostSpec& spec, Seed seed) {
  switch (spec.kind) {
    case HostSpec::Kind::complete:
      return make_complete(spec.n);
    case HostSpec::Kind::circulant:
      return make_circulant(spec.n, spec.offsets);
    case HostSpec::Kind::random_regular:
      return gen_random_regular(spec.n, spec.d, seed);
    case HostSpec::Kind::file:
      return read_graph_file(spec.path);
  }
  throw std::logic_error("unreachable");
}

Graph percolate_host(const HostSpec& spec, double p, Seed seed) {
  if (spec.kind == HostSpec::Kind::complete)
    return gen_gnp(spec.n, p, seed);
  // One substream for the host, the next for the percolation coins.
  Graph host = materialize_host(spec, seed);
  return percolate(host, p, seed.next_stream());
}

Degeneracy degeneracy(const MultiGraph& g) {
  const Vertex n = g.order();
  Degeneracy out;
  if (n == 0) return out;
  std::vector<Vertex> deg(static_cast<std::size_t>(n));
  Vertex max_deg = 0;
  for (Vertex v = 0; v < n; ++v) {
    deg[static_cast<std::size_t>(v)] = g.degree(v);
    max_deg = std::max(max_deg, deg[static_cast<std::size_t>(v)]);
  }
  // Bucket queue over current degrees with lazy invalidation.
  std::vector<std::vector<Vertex>> bucket(static_cast<std::size_t>(max_deg) + 1);
  for (Vertex v = 0; v < n; ++v)
    bucket[static_cast<std::size_t>(deg[static_cast<std::size_t>(v)])].push_back(v);
  std::vector<char> removed(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> peel;
  peel.reserve(static_cast<std::size_t>(n));
  Vertex lo = 0;
  Vertex value = 0;
  for (Vertex round = 0; round < n; ++round) {
    Vertex v = -1;
    while (v < 0) {
      while (bucket[static_cast<std::size_t>(lo)].empty()) ++lo;
      Vertex cand = bucket[static_cast<std::size_t>(lo)].back();
      bucket[static_cast<std::size_t>(lo)].pop_back();
      if (!removed[static_cast<std::size_t>(cand)] &&
          deg[static_cast<std::size_t>(cand)] == lo)
        v = cand;
    }
    removed[static_cast<std::size_t>(v)] = 1;
    value = std::max(value, lo);
    peel.push_back(v);
    for (Vertex w : g.neighbors(v)) {
      if (removed[static_cast<std::size_t>(w)]) continue;
      Vertex& dw = deg[static_cast<std::size_t>(w)];
      --dw;
      bucket[static_cast<std::size_t>(dw)].push_back(w);
    }
    if (lo > 0) --lo;
  }
  out.value = value;
  // Reverse peel order: each vertex then has at most `value` earlier
  // neighbours.
  out.ordering.assign(peel.rbegin(), peel.rend());
  return out;
}

namespace {

// Power iteration for the top eigenvalue of a symmetric PSD operator
// restricted to the orthogonal complement of the all-ones vector.
double deflated_top(const MultiGraph& g, double shift_sign, double d,
                    double tol, long cap) {
  const Vertex n = g.order();
  Eigen::VectorXd x(n);
  std::uint64_t state = 0x6d69786c61623031ULL;
  for (Vertex v = 0; v < n; ++v) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    x[v] = static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53 - 0.5;
  }
  auto deflate = [&](Eigen::VectorXd& v) { v.array() -= v.mean(); };
  auto apply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    out.setZero(n);
    for (Vertex v = 0; v < n; ++v) {
      const double w = shift_sign * in[v];
      for (Vertex u : g.neighbors(v)) out[u] += w;
    }
    out += d * in;  // d*I +/- A
  };
  deflate(x);
  if (x.norm() == 0.0) x[0] = 1.0, x[n - 1] = -1.0;
  x.normalize();
  Eigen::VectorXd y(n);
  double theta = 0.0;
  for (long it = 0; it < cap; ++it) {
    apply(x, y);
    deflate(y);
    theta = x.dot(y);
    const double resid = (y - theta * x).norm();
    if (resid <= tol) return theta;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;  // complement is an exact kernel
    x = y / norm;
  }
  throw std::runtime_error("second_eigenvalue: power iteration hit the cap before reaching tol");
}

}  // namespace

double second_eigenvalue(const MultiGraph& g, double tol) {
  if (tol <= 0) throw std::invalid_argument("tol must be positive");
  const Vertex n = g.order();
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  const Vertex d = g.degree(0);
  for (Vertex v = 1; v < n; ++v)
    if (g.degree(v) != d)
      throw std::invalid_argument("second_eigenvalue requires a regular graph");
  const long cap = std::max<long>(
      1000, static_cast<long>(10.0 * std::log(static_cast<double>(n)) / tol));
  const double dd = static_cast<double>(d);
  const double lambda_2 = deflated_top(g, +1.0, dd, tol, cap) - dd;  // top of A+dI
  const double lambda_n = dd - deflated_top(g, -1.0, dd, tol, cap);  // bottom of A
  return std::max(std::abs(lambda_2), std::abs(lambda_n));
}

}  // namespace mixlab
