#include "mixlab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixlab/parallel.hpp"

namespace mixlab {

namespace {

constexpr std::size_t kStartBlock = 64;

void check_dims(const ProbDist& mu, Vertex n, const char* what) {
  if (mu.size() != n)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

bool is_prob_dist(const ProbDist& mu, double sum_tol) {
  if ((mu.array() < 0.0).any()) return false;
  return std::abs(mu.sum() - 1.0) <= sum_tol;
}

ProbDist point_mass(Vertex n, Vertex u) {
  if (u < 0 || u >= n) throw std::invalid_argument("point mass out of range");
  ProbDist mu = ProbDist::Zero(n);
  mu[u] = 1.0;
  return mu;
}

ProbDist uniform_dist(Vertex n) {
  if (n <= 0) throw std::invalid_argument("empty vertex set");
  return ProbDist::Constant(n, 1.0 / static_cast<double>(n));
}

LazyKernel::LazyKernel(const MultiGraph& g) : g_(&g) {
  const Vertex n = g.order();
  inv_two_deg_.resize(n);
  diag_.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    const Vertex d = g.degree(v);
    inv_two_deg_[v] = d > 0 ? 1.0 / (2.0 * static_cast<double>(d)) : 0.0;
    diag_[v] = d > 0 ? 0.5 : 1.0;
  }
}

void LazyKernel::apply_left(const ProbDist& mu, ProbDist& out) const {
  const Vertex n = g_->order();
  check_dims(mu, n, "apply_left");
  out = diag_.cwiseProduct(mu);
  for (Vertex i = 0; i < n; ++i) {
    const double w = mu[i] * inv_two_deg_[i];
    if (w == 0.0) continue;
    for (Vertex j : g_->neighbors(i)) out[j] += w;
  }
}

void LazyKernel::apply_left_absorbing(const ProbDist& mu, ProbDist& out,
                                      const std::vector<char>& absorb) const {
  apply_left(mu, out);
  for (Vertex v = 0; v < g_->order(); ++v)
    if (absorb[static_cast<std::size_t>(v)]) out[v] = 0.0;
}

double LazyKernel::transition(Vertex i, Vertex j) const {
  if (i == j) return diag_[i];
  return static_cast<double>(g_->multiplicity(i, j)) * inv_two_deg_[i];
}

ProbDist stationary(const MultiGraph& g) {
  if (g.size() == 0) throw std::domain_error("stationary: graph has no edges");
  if (!is_connected(g))
    throw std::domain_error("stationary: graph is disconnected");
  ProbDist pi(g.order());
  const double denom = 2.0 * static_cast<double>(g.size());
  for (Vertex v = 0; v < g.order(); ++v)
    pi[v] = static_cast<double>(g.degree(v)) / denom;
  return pi;
}

double pi_min(const ProbDist& pi) { return pi.minCoeff(); }
double pi_max(const ProbDist& pi) { return pi.maxCoeff(); }

ProbDist step(const LazyKernel& kernel, const ProbDist& mu) {
  ProbDist out;
  kernel.apply_left(mu, out);
  return out;
}

double tv_distance(const ProbDist& mu, const ProbDist& nu) {
  if (mu.size() != nu.size())
    throw std::invalid_argument("tv_distance: dimension mismatch");
  return 0.5 * (mu - nu).cwiseAbs().sum();
}

long default_t_cap(Vertex n) {
  const double ln = std::log(std::max<double>(2.0, n));
  return std::max<long>(16, static_cast<long>(50.0 * ln * ln));
}

namespace {

// TV-to-stationarity curve from one start, evolved until the TV drops to
// stop_tv (or t_cap). TV is monotone non-increasing for an exact evolution;
// this is checked at every step.
struct StartCurve {
  std::vector<double> tv;
  bool capped = false;
};

StartCurve evolve_tv_curve(const LazyKernel& kernel, const ProbDist& pi,
                           Vertex start, double stop_tv, long t_cap) {
  StartCurve out;
  ProbDist mu = point_mass(static_cast<Vertex>(pi.size()), start);
  ProbDist next(pi.size());
  double tv = tv_distance(mu, pi);
  out.tv.push_back(tv);
  long t = 0;
  while (tv > stop_tv) {
    if (t >= t_cap) {
      out.capped = true;
      break;
    }
    kernel.apply_left(mu, next);
    mu.swap(next);
    ++t;
    const double tv_next = tv_distance(mu, pi);
    if (tv_next > tv + 1e-12)
      throw std::logic_error("TV to stationarity increased along an exact evolution");
    tv = tv_next;
    out.tv.push_back(tv);
  }
  return out;
}

struct BlockReduce {
  std::vector<double> max_tv;
  std::vector<double> sum_tv;
  std::vector<double> sum_sq;
  // Tail aggregates: the per-start final values, used to extend curves that
  // stopped before the block's horizon (the TV beyond a stop stays at or
  // below its recorded floor value).
  double tail_max = 0.0;
  double tail_sum = 0.0;
  double tail_sum_sq = 0.0;
  long worst_t_eps = 0;  // max over starts of first time TV <= eps
  bool capped = false;
  bool need_eps_time = true;
};

struct EvolveSummary {
  long worst_t_eps = 0;
  bool capped = false;
  std::vector<double> max_tv;
  std::vector<double> mean_tv;
  std::vector<double> sem;
  int starts = 0;
};

EvolveSummary evolve_starts(const MultiGraph& g, const std::vector<Vertex>& starts,
                            double eps, double stop_tv, long t_cap,
                            bool keep_curves) {
  const LazyKernel kernel(g);
  const ProbDist pi = stationary(g);
  const std::size_t n_blocks =
      (starts.size() + kStartBlock - 1) / kStartBlock;
  std::vector<BlockReduce> blocks(n_blocks);

  parallel_blocks(starts.size(), kStartBlock, [&](std::size_t b, std::size_t lo,
                                                  std::size_t hi) {
    BlockReduce& acc = blocks[b];
    for (std::size_t i = lo; i < hi; ++i) {
      StartCurve curve = evolve_tv_curve(kernel, pi, starts[i], stop_tv, t_cap);
      acc.capped = acc.capped || curve.capped;
      // first t with TV <= eps (curves end at stop_tv <= eps unless capped)
      long t_eps = t_cap + 1;
      for (std::size_t t = 0; t < curve.tv.size(); ++t) {
        if (curve.tv[t] <= eps) {
          t_eps = static_cast<long>(t);
          break;
        }
      }
      acc.worst_t_eps = std::max(acc.worst_t_eps, t_eps);
      if (!keep_curves) continue;
      if (curve.tv.size() > acc.max_tv.size()) {
        // extend block curves with their tail aggregates
        const std::size_t old = acc.max_tv.size();
        acc.max_tv.resize(curve.tv.size(), 0.0);
        acc.sum_tv.resize(curve.tv.size(), 0.0);
        acc.sum_sq.resize(curve.tv.size(), 0.0);
        for (std::size_t t = old; t < acc.max_tv.size(); ++t) {
          acc.max_tv[t] = acc.tail_max;
          acc.sum_tv[t] = acc.tail_sum;
          acc.sum_sq[t] = acc.tail_sum_sq;
        }
      }
      const double last = curve.tv.back();
      for (std::size_t t = 0; t < acc.max_tv.size(); ++t) {
        const double v = t < curve.tv.size() ? curve.tv[t] : last;
        acc.max_tv[t] = std::max(acc.max_tv[t], v);
        acc.sum_tv[t] += v;
        acc.sum_sq[t] += v * v;
      }
      acc.tail_max = std::max(acc.tail_max, last);
      acc.tail_sum += last;
      acc.tail_sum_sq += last * last;
    }
  });

  EvolveSummary out;
  out.starts = static_cast<int>(starts.size());
  for (const BlockReduce& acc : blocks) {
    out.worst_t_eps = std::max(out.worst_t_eps, acc.worst_t_eps);
    out.capped = out.capped || acc.capped;
  }
  if (keep_curves) {
    std::size_t horizon = 0;
    for (const BlockReduce& acc : blocks)
      horizon = std::max(horizon, acc.max_tv.size());
    out.max_tv.assign(horizon, 0.0);
    out.mean_tv.assign(horizon, 0.0);
    std::vector<double> sum_sq(horizon, 0.0);
    for (const BlockReduce& acc : blocks) {
      for (std::size_t t = 0; t < horizon; ++t) {
        const double mx = t < acc.max_tv.size() ? acc.max_tv[t] : acc.tail_max;
        const double sm = t < acc.sum_tv.size() ? acc.sum_tv[t] : acc.tail_sum;
        const double sq = t < acc.sum_sq.size() ? acc.sum_sq[t] : acc.tail_sum_sq;
        out.max_tv[t] = std::max(out.max_tv[t], mx);
        out.mean_tv[t] += sm;
        sum_sq[t] += sq;
      }
    }
    const double count = static_cast<double>(starts.size());
    out.sem.assign(horizon, 0.0);
    for (std::size_t t = 0; t < horizon; ++t) {
      out.mean_tv[t] /= count;
      if (starts.size() > 1) {
        const double var =
            std::max(0.0, (sum_sq[t] - count * out.mean_tv[t] * out.mean_tv[t]) /
                              (count - 1.0));
        out.sem[t] = std::sqrt(var / count);
      }
    }
  }
  return out;
}

std::vector<Vertex> pick_starts(const MultiGraph& g, const MixOptions& opts) {
  std::vector<Vertex> starts;
  if (opts.mode == MixMode::exact) {
    starts.resize(static_cast<std::size_t>(g.order()));
    for (Vertex v = 0; v < g.order(); ++v)
      starts[static_cast<std::size_t>(v)] = v;
  } else {
    if (opts.samples < 1)
      throw std::invalid_argument("sampled mode needs samples >= 1");
    Rng rng(opts.seed);
    starts.reserve(static_cast<std::size_t>(opts.samples));
    for (int i = 0; i < opts.samples; ++i)
      starts.push_back(
          static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(g.order()))));
  }
  return starts;
}

void check_mix_args(const MultiGraph& g, const MixOptions& opts) {
  if (!(opts.eps > 0.0 && opts.eps < 1.0))
    throw std::invalid_argument("eps must lie in (0, 1)");
  if (!is_connected(g))
    throw std::domain_error("mixing time requires a connected graph");
}

}  // namespace

MixingReport mixing_time(const MultiGraph& g, const MixOptions& opts) {
  check_mix_args(g, opts);
  const long t_cap = opts.t_cap > 0 ? opts.t_cap : default_t_cap(g.order());
  std::vector<Vertex> starts = pick_starts(g, opts);
  // Worst-case search only needs each start down to eps; curves want the
  // decay below it.
  const double stop_tv =
      opts.keep_curves ? opts.eps * opts.tv_floor_factor : opts.eps;
  EvolveSummary s =
      evolve_starts(g, starts, opts.eps, stop_tv, t_cap, opts.keep_curves);
  MixingReport rep;
  rep.eps = opts.eps;
  rep.mode = opts.mode;
  rep.average = false;
  rep.starts = s.starts;
  rep.t_cap = t_cap;
  rep.capped = s.capped;
  rep.t = s.capped ? -1 : s.worst_t_eps;
  rep.has_curves = opts.keep_curves;
  rep.max_tv = std::move(s.max_tv);
  rep.mean_tv = std::move(s.mean_tv);
  rep.sem = std::move(s.sem);
  return rep;
}

MixingReport avg_mixing_time(const MultiGraph& g, const MixOptions& opts) {
  check_mix_args(g, opts);
  const long t_cap = opts.t_cap > 0 ? opts.t_cap : default_t_cap(g.order());
  std::vector<Vertex> starts = pick_starts(g, opts);
  EvolveSummary s = evolve_starts(g, starts, opts.eps,
                                  opts.eps * opts.tv_floor_factor, t_cap,
                                  /*keep_curves=*/true);
  MixingReport rep;
  rep.eps = opts.eps;
  rep.mode = opts.mode;
  rep.average = true;
  rep.starts = s.starts;
  rep.t_cap = t_cap;
  rep.capped = s.capped;
  rep.has_curves = opts.keep_curves;
  long t_avg = -1;
  for (std::size_t t = 0; t < s.mean_tv.size(); ++t) {
    if (s.mean_tv[t] <= opts.eps) {
      t_avg = static_cast<long>(t);
      break;
    }
  }
  if (t_avg < 0) rep.capped = true;
  rep.t = rep.capped ? -1 : t_avg;
  if (opts.keep_curves) {
    rep.max_tv = std::move(s.max_tv);
    rep.mean_tv = std::move(s.mean_tv);
    rep.sem = std::move(s.sem);
  }
  return rep;
}

std::vector<double> hitting_survival(const MultiGraph& g,
                                     std::span<const Vertex> target,
                                     const ProbDist& mu0, long t_max) {
  if (target.empty()) throw std::invalid_argument("empty target set");
  check_dims(mu0, g.order(), "hitting_survival");
  if (!is_prob_dist(mu0))
    throw std::invalid_argument("mu0 is not a probability distribution");
  std::vector<char> absorb(static_cast<std::size_t>(g.order()), 0);
  for (Vertex v : target) {
    if (v < 0 || v >= g.order())
      throw std::invalid_argument("target vertex out of range");
    absorb[static_cast<std::size_t>(v)] = 1;
  }
  const LazyKernel kernel(g);
  ProbDist alive = mu0;
  for (Vertex v : target) alive[v] = 0.0;
  std::vector<double> survival;
  survival.reserve(static_cast<std::size_t>(t_max) + 1);
  survival.push_back(alive.sum());
  ProbDist next(g.order());
  for (long t = 1; t <= t_max; ++t) {
    kernel.apply_left_absorbing(alive, next, absorb);
    alive.swap(next);
    survival.push_back(alive.sum());
  }
  return survival;
}

std::vector<Vertex> simulate_walk(const LazyKernel& kernel, Vertex start,
                                  long steps, Seed seed) {
  const MultiGraph& g = kernel.graph();
  if (start < 0 || start >= g.order())
    throw std::invalid_argument("start vertex out of range");
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  if (g.degree(start) == 0 && steps > 0)
    throw std::domain_error("walk cannot move from an isolated vertex");
  Rng rng(seed);
  std::vector<Vertex> traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);
  Vertex x = start;
  traj.push_back(x);
  for (long t = 0; t < steps; ++t) {
    if (rng.next_unit() >= 0.5) {
      auto nb = g.neighbors(x);
      x = nb[rng.below(nb.size())];
    }
    traj.push_back(x);
  }
  return traj;
}

namespace {

// True iff at least half the vertices have |N^k(v)| <= n/2.
bool half_balls_small(const MultiGraph& g, long k) {
  const Vertex n = g.order();
  const std::size_t limit2 = static_cast<std::size_t>(n);  // 2 * (n/2)
  const std::size_t n_blocks = (static_cast<std::size_t>(n) + 255) / 256;
  std::vector<std::size_t> small_per_block(n_blocks, 0);
  parallel_blocks(static_cast<std::size_t>(n), 256,
                  [&](std::size_t b, std::size_t lo, std::size_t hi) {
    std::vector<long> dist(static_cast<std::size_t>(n), -1);
    std::vector<Vertex> queue(static_cast<std::size_t>(n));
    std::size_t count = 0;
    for (std::size_t sv = lo; sv < hi; ++sv) {
      const Vertex s = static_cast<Vertex>(sv);
      std::fill(dist.begin(), dist.end(), -1);
      std::size_t head = 0, tail = 0;
      queue[tail++] = s;
      dist[sv] = 0;
      std::size_t ball = 1;
      bool big = 2 * ball > limit2;
      while (head < tail && !big) {
        const Vertex v = queue[head++];
        if (dist[static_cast<std::size_t>(v)] >= k) break;
        for (Vertex w : g.neighbors(v)) {
          if (dist[static_cast<std::size_t>(w)] < 0) {
            dist[static_cast<std::size_t>(w)] =
                dist[static_cast<std::size_t>(v)] + 1;
            queue[tail++] = w;
            ++ball;
            if (2 * ball > limit2) {
              big = true;
              break;
            }
          }
        }
      }
      if (!big) ++count;
    }
    small_per_block[b] = count;
  });
  std::size_t total = 0;
  for (std::size_t c : small_per_block) total += c;
  return 2 * total >= static_cast<std::size_t>(n);
}

}  // namespace

long ball_growth_lower_bound(const MultiGraph& g, double dbar) {
  if (dbar < 1.0) throw std::invalid_argument("dbar must be at least 1");
  const Vertex n = g.order();
  if (n < 2) return 0;
  if (!half_balls_small(g, 1)) return 0;  // k = 0 always holds for n >= 2
  // The property is monotone non-increasing in k: double up from a
  // growth-rate guess to bracket the flip, then binary search.
  long lo = 1;   // holds
  long hi = -1;  // fails
  long probe = std::max<long>(
      2, static_cast<long>(std::log(static_cast<double>(n) / 2.0) /
                           std::log(std::max(2.0, 2.0 * dbar))));
  while (probe < n) {
    if (half_balls_small(g, probe)) {
      lo = std::max(lo, probe);
      probe *= 2;
    } else {
      hi = probe;
      break;
    }
  }
  if (hi < 0) {
    if (half_balls_small(g, n)) return n;  // balls never exceed n/2
    hi = n;
  }
  while (lo + 1 < hi) {
    const long mid = lo + (hi - lo) / 2;
    if (half_balls_small(g, mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace mixlab
