#pragma once

#include <vector>

#include "pxlab/checks.hpp"
#include "pxlab/exponent.hpp"
#include "pxlab/grid.hpp"
#include "pxlab/operators.hpp"
#include "pxlab/simulator.hpp"

namespace pxlab {

/// First Dirichlet eigenpair of the discrete p(x)-Laplacian, normalized to int |Phi|^p(x) = 1.
struct EigenPair {
  double lambda1 = 0.0;
  ScalarField phi;
  double M = 0.0;  // max Phi
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

/// int |grad Phi|^p / int |Phi|^p.
double rayleigh_quotient(const ScalarField& phi, const ExponentSamples& p);

/// ||L(Phi) + lambda |Phi|^(p-2) Phi||_2 / (lambda || |Phi|^(p-1) ||_2).
double eigen_residual(const ScalarField& phi, const ExponentSamples& p, double lambda,
                      double eps_reg = kDefaultEpsReg);

/// Nonlinear inverse iteration Phi <- normalize(A(Phi)^-1 lambda |Phi|^(p-2) Phi), where
/// A(Phi) is the operator with the diffusivity frozen at Phi; each update is damped
/// by backtracking until the residual decreases. Negatives are clipped to 1e-12.
EigenPair first_eigenpair(const Grid& grid, const ExponentField& p, double tol = 1e-9, int max_iters = 500,
                          double eps_reg = kDefaultEpsReg);

/// min{1, (1 + lambda1)^(r - p-) / (e M), min u0 / (e M)}.
double epsilon_bound(const EigenPair& pair, const ScalarField& u0, double r, double p_minus);

/// min{1, (1 + lambda1)^(1 / (r - p-)) / (e M), min u0 / (e M)}. Below it the barrier
/// inequality holds at every cell and time in [0, T].
double epsilon_sufficient_bound(const EigenPair& pair, const ScalarField& u0, double r, double p_minus);

/// eps e^(1 - t/T) Phi.
ScalarField barrier(const EigenPair& pair, double eps, double T, double t);

struct BarrierCheck {
  bool holds = false;
  double worst_margin = 0.0;  // max over cells and times of the left-hand side (<= 0 passes)
  double worst_time = 0.0;
  ScalarField margin;         // per cell, at worst_time
};

/// lambda1 w^(p(x)-1) - lambda1 w^r / (eps Phi + lambda1 w) <= 0 at t in {0, T/2, T}.
BarrierCheck check_barrier_inequality(const EigenPair& pair, double eps, const ExponentSamples& p, double r,
                                      double T);

/// w <= v <= u at every shared record, slack 1e-6 ||u0||_inf. Needs snapshots in both runs.
CheckResult check_ordering(const SimResult& sim, const SimResult& aux, const EigenPair& pair, double eps, double T);

}  // namespace pxlab
