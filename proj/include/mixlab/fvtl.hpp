#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

// The u-deleted transition operator P_u, kept on the full coordinate space
// with the u entry pinned to zero. Rows sum below one exactly for the
// neighbours of u: 1 - rowsum(v) = P(v, u).
class ReducedKernel {
 public:
  ReducedKernel(const MultiGraph& g, Vertex u);

  Vertex removed() const { return u_; }
  const MultiGraph& graph() const { return *g_; }

  // out = P_u y (right multiplication), coordinates off u only.
  void apply_right(const Eigen::VectorXd& y, Eigen::VectorXd& out) const;

  // P(v, u) of the full kernel: the mass each row loses to the deletion.
  double removed_column(Vertex v) const;

 private:
  const MultiGraph* g_;
  Vertex u_;
  Eigen::VectorXd inv_two_deg_;
};

struct LambdaU {
  double lambda = 0;
  bool reducible = false;  // G - u is disconnected (Perron hypothesis fails)
  long iterations = 0;
};

// Spectral radius of P_u by power iteration on its symmetrised similarity
// transform, started from the uniform positive vector; the residual of the
// symmetric operator bounds the eigenvalue error by tol. Throws when the
// iteration cap is exhausted first.
LambdaU lambda_u(const MultiGraph& g, Vertex u, double tol,
                 long cap = 1'000'000);

// R_T(u) = sum_{t=0}^T mu_t^u(u), exact evolution from the point mass at u.
double returns_RT(const MultiGraph& g, Vertex u, long T);

struct HpDiagnostics {
  std::optional<double> hp1_max_dev;  // max_{x,y} |mu_T^x(y) - pi(y)|
  bool hp1_exact = false;             // all starts vs a sampled subset
  double hp1_threshold = 0;           // caller threshold (default n^-3)
  double hp2_t_pi_max = 0;            // T * pi_max
  double hp2_prime_t_pi_u = 0;        // T * pi(u)
  double hp3_pi_min_n2 = 0;           // pi_min * n^2
};

struct FvtlOptions {
  long T = 0;                 // return-mass horizon
  double tol = 1e-10;         // lambda_u tolerance
  long iter_cap = 1'000'000;  // lambda_u power-iteration cap
  long grid_cap = 1'000'000;  // survival grid cap (else ceil(20/(1-lambda)))
  bool hp1 = false;           // the double loop is costly; off by default
  int hp1_exact_n_limit = 2000;
  int hp1_samples = 16;       // sampled starts above the exact limit
  double hp1_threshold = -1;  // <= 0: use n^-3
  Seed seed{};                // hp1 start sampling
};

struct FvtlReport {
  Vertex u = -1;
  long T = 0;
  double lambda = 0;
  bool reducible = false;
  long lambda_iterations = 0;
  double r_t = 0;
  // sup over the grid of |P[tau(pi, u) > t] / lambda^t - 1|
  double stat_hitting = 0;
  // |(1 - lambda) / (pi(u) / R_T) - 1|
  double stat_prob = 0;
  long grid_top = 0;
  HpDiagnostics hp;
  // Survival curve P[tau(pi,u) > t] thinned to at most 257 grid points.
  std::vector<std::pair<long, double>> survival;
};

FvtlReport fvtl_report(const MultiGraph& g, Vertex u, const FvtlOptions& opts);

// (1/n) sum_v P[tau(delta_v, u) <= t0], computed through one absorbing
// evolution from the uniform start (the survival functional is linear in the
// start distribution).
double low_hitting_mass(const MultiGraph& g, Vertex u, long t0);

}  // namespace mixlab
