#include "mixlab/fvtl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixlab/walk.hpp"

namespace mixlab {

ReducedKernel::ReducedKernel(const MultiGraph& g, Vertex u) : g_(&g), u_(u) {
  if (g.order() < 2)
    throw std::invalid_argument("reduced kernel needs at least two vertices");
  if (u < 0 || u >= g.order())
    throw std::invalid_argument("removed vertex out of range");
  inv_two_deg_.resize(g.order());
  for (Vertex v = 0; v < g.order(); ++v) {
    const Vertex d = g.degree(v);
    inv_two_deg_[v] = d > 0 ? 1.0 / (2.0 * static_cast<double>(d)) : 0.0;
  }
}

void ReducedKernel::apply_right(const Eigen::VectorXd& y,
                                Eigen::VectorXd& out) const {
  const Vertex n = g_->order();
  if (y.size() != n)
    throw std::invalid_argument("reduced kernel: dimension mismatch");
  out.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    if (v == u_) {
      out[v] = 0.0;
      continue;
    }
    double acc = 0.0;
    for (Vertex w : g_->neighbors(v))
      if (w != u_) acc += y[w];
    out[v] = 0.5 * y[v] + inv_two_deg_[v] * acc;
  }
}

double ReducedKernel::removed_column(Vertex v) const {
  if (v == u_) return 0.5;
  return static_cast<double>(g_->multiplicity(v, u_)) * inv_two_deg_[v];
}

LambdaU lambda_u(const MultiGraph& g, Vertex u, double tol, long cap) {
  if (tol <= 0) throw std::invalid_argument("tol must be positive");
  if (!is_connected(g)) throw std::domain_error("lambda_u needs a connected graph");
  const Vertex n = g.order();
  if (n < 2) throw std::invalid_argument("lambda_u needs n >= 2");
  if (u < 0 || u >= n) throw std::invalid_argument("u out of range");

  LambdaU out;
  {
    VertexSet rest;
    for (Vertex v = 0; v < n; ++v)
      if (v != u) rest.push_back(v);
    out.reducible = !is_connected_set(g, rest);
  }

  // P_u is similar to the symmetric S(v,w) = 1/2 δ + mult(v,w)/(2 sqrt(dv dw))
  // via D^{1/2}; iterate S so the symmetric residual bounds |θ - λ| by tol.
  Eigen::VectorXd inv_sqrt_deg(n);
  for (Vertex v = 0; v < n; ++v)
    inv_sqrt_deg[v] =
        g.degree(v) > 0 ? 1.0 / std::sqrt(static_cast<double>(g.degree(v))) : 0.0;
  auto apply_sym = [&](const Eigen::VectorXd& z, Eigen::VectorXd& res) {
    res.resize(n);
    Eigen::VectorXd scaled = z.cwiseProduct(inv_sqrt_deg);
    for (Vertex v = 0; v < n; ++v) {
      if (v == u) {
        res[v] = 0.0;
        continue;
      }
      double acc = 0.0;
      for (Vertex w : g.neighbors(v))
        if (w != u) acc += scaled[w];
      res[v] = 0.5 * z[v] + 0.5 * inv_sqrt_deg[v] * acc;
    }
  };

  Eigen::VectorXd z = Eigen::VectorXd::Constant(n, 1.0);
  z[u] = 0.0;
  z.normalize();
  Eigen::VectorXd sz(n);
  for (long it = 1; it <= cap; ++it) {
    apply_sym(z, sz);
    const double theta = z.dot(sz);
    const double resid = (sz - theta * z).norm();
    out.iterations = it;
    if (resid <= tol) {
      out.lambda = theta;
      return out;
    }
    const double norm = sz.norm();
    if (norm == 0.0) {
      out.lambda = 0.0;
      return out;
    }
    z = sz / norm;
  }
  throw std::runtime_error("lambda_u: power iteration hit the cap before reaching tol" +
                           std::string(out.reducible
                                           ? " (P_u is reducible: G - u is disconnected)"
                                           : ""));
}

double returns_RT(const MultiGraph& g, Vertex u, long T) {
  if (T < 0) throw std::invalid_argument("T must be non-negative");
  if (u < 0 || u >= g.order()) throw std::invalid_argument("u out of range");
  const LazyKernel kernel(g);
  ProbDist mu = point_mass(g.order(), u);
  ProbDist next(g.order());
  double total = mu[u];
  for (long t = 1; t <= T; ++t) {
    kernel.apply_left(mu, next);
    mu.swap(next);
    total += mu[u];
  }
  return total;
}

namespace {

std::vector<double> survival_from(const MultiGraph& g, Vertex u,
                                  const ProbDist& start, long t_top) {
  const VertexSet target{u};
  return hitting_survival(g, target, start, t_top);
}

}  // namespace

FvtlReport fvtl_report(const MultiGraph& g, Vertex u, const FvtlOptions& opts) {
  if (!is_connected(g))
    throw std::domain_error("fvtl_report needs a connected graph");
  FvtlReport rep;
  rep.u = u;
  rep.T = opts.T;

  LambdaU lam = lambda_u(g, u, opts.tol, opts.iter_cap);
  rep.lambda = lam.lambda;
  rep.reducible = lam.reducible;
  rep.lambda_iterations = lam.iterations;

  rep.r_t = returns_RT(g, u, opts.T);

  const ProbDist pi = stationary(g);
  const double pi_u = pi[u];

  // Grid: far enough for the geometric tail to reach e^{-20}.
  long grid_top = opts.grid_cap;
  if (rep.lambda < 1.0) {
    const double want = std::ceil(20.0 / (1.0 - rep.lambda));
    if (want < static_cast<double>(grid_top))
      grid_top = std::max<long>(1, static_cast<long>(want));
  }
  rep.grid_top = grid_top;

  const std::vector<double> surv = survival_from(g, u, pi, grid_top);
  double worst = 0.0;
  for (long t = 0; t < static_cast<long>(surv.size()); ++t) {
    const double geom = std::pow(rep.lambda, static_cast<double>(t));
    if (geom <= 0.0) break;
    worst = std::max(worst, std::abs(surv[static_cast<std::size_t>(t)] / geom - 1.0));
  }
  rep.stat_hitting = worst;
  rep.stat_prob = std::abs((1.0 - rep.lambda) / (pi_u / rep.r_t) - 1.0);

  // Thinned survival curve for reports.
  const std::size_t keep = 257;
  const std::size_t stride = std::max<std::size_t>(1, surv.size() / keep);
  for (std::size_t t = 0; t < surv.size(); t += stride)
    rep.survival.emplace_back(static_cast<long>(t), surv[t]);
  if ((surv.size() - 1) % stride != 0)
    rep.survival.emplace_back(static_cast<long>(surv.size() - 1), surv.back());

  // HP diagnostics.
  rep.hp.hp2_t_pi_max = static_cast<double>(opts.T) * pi_max(pi);
  rep.hp.hp2_prime_t_pi_u = static_cast<double>(opts.T) * pi_u;
  rep.hp.hp3_pi_min_n2 = pi_min(pi) * static_cast<double>(g.order()) *
                         static_cast<double>(g.order());
  rep.hp.hp1_threshold =
      opts.hp1_threshold > 0
          ? opts.hp1_threshold
          : std::pow(static_cast<double>(g.order()), -3.0);
  if (opts.hp1) {
    const LazyKernel kernel(g);
    std::vector<Vertex> starts;
    rep.hp.hp1_exact = g.order() <= opts.hp1_exact_n_limit;
    if (rep.hp.hp1_exact) {
      for (Vertex v = 0; v < g.order(); ++v) starts.push_back(v);
    } else {
      Rng rng(opts.seed);
      for (int i = 0; i < opts.hp1_samples; ++i)
        starts.push_back(static_cast<Vertex>(
            rng.below(static_cast<std::uint64_t>(g.order()))));
    }
    double dev = 0.0;
    ProbDist mu(g.order()), next(g.order());
    for (Vertex x : starts) {
      mu = point_mass(g.order(), x);
      for (long t = 0; t < opts.T; ++t) {
        kernel.apply_left(mu, next);
        mu.swap(next);
      }
      dev = std::max(dev, (mu - pi).cwiseAbs().maxCoeff());
    }
    rep.hp.hp1_max_dev = dev;
  }
  return rep;
}

double low_hitting_mass(const MultiGraph& g, Vertex u, long t0) {
  if (t0 < 0) throw std::invalid_argument("t0 must be non-negative");
  if (u < 0 || u >= g.order()) throw std::invalid_argument("u out of range");
  const std::vector<double> surv =
      survival_from(g, u, uniform_dist(g.order()), t0);
  return 1.0 - surv.back();
}

}  // namespace mixlab
