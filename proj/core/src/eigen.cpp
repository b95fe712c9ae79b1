#include "pxlab/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pxlab/error.hpp"
#include "pxlab/function_spaces.hpp"
#include "pxlab/linear_solver.hpp"

namespace pxlab {
namespace {

constexpr double kClip = 1e-12;

ScalarField normalized(ScalarField v, const ExponentSamples& p) {
  for (double& x : v.values) x = std::max(x, kClip);
  const double n = luxemburg_norm(v, p);
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("eigen iterate has no finite norm");
  for (double& x : v.values) x /= n;
  return v;
}

double quotient_lambda(const ScalarField& phi, const ExponentSamples& p, double eps_reg) {
  const auto L = px_laplacian(phi, p, eps_reg);
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s -= L[i] * phi[i];
  return s * phi.grid.cell_volume() / modular(phi, p);
}

double min_value(const ScalarField& u) { return *std::min_element(u.values.begin(), u.values.end()); }

double max_value(const ScalarField& u) { return *std::max_element(u.values.begin(), u.values.end()); }

void require_bound_inputs(const EigenPair& pair, const ScalarField& u0, double r, double p_minus) {
  if (!(min_value(u0) > 0.0)) throw InvalidArgument("epsilon bound needs min u0 > 0");
  if (!(r < p_minus)) throw InvalidArgument("epsilon bound needs r < p-");
  if (!(pair.M > 0.0)) throw InvalidArgument("eigenfunction has no positive maximum");
}

}  // namespace

double rayleigh_quotient(const ScalarField& phi, const ExponentSamples& p) {
  const double den = modular(phi, p);
  if (!(den > 0.0)) throw InvalidArgument("Rayleigh quotient of a zero field");
  return gradient_modular(gradient_faces(phi), p) / den;
}

double eigen_residual(const ScalarField& phi, const ExponentSamples& p, double lambda, double eps_reg) {
  const auto L = px_laplacian(phi, p, eps_reg);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double a = std::abs(phi[i]);
    const double q = a == 0.0 ? 0.0 : std::pow(a, p.cell[i] - 1.0);
    const double rhs = std::copysign(q, phi[i]);
    num += (L[i] + lambda * rhs) * (L[i] + lambda * rhs);
    den += q * q;
  }
  if (!(den > 0.0) || !(lambda > 0.0)) throw InvalidArgument("eigen residual needs lambda > 0 and Phi != 0");
  return std::sqrt(num / den) / lambda;
}

EigenPair first_eigenpair(const Grid& grid, const ExponentField& pf, double tol, int max_iters, double eps_reg) {
  const auto p = sample(pf, grid);
  ScalarField phi = ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
    double v = 1.0;
    for (int d = 0; d < grid.dim; ++d) v *= std::sin(std::numbers::pi * x[d] / grid.extent[d]);
    return v;
  });
  phi = normalized(phi, p);
  EigenPair out;
  double lam = quotient_lambda(phi, p, eps_reg);
  double res = eigen_residual(phi, p, lam, eps_reg);
  out.residual_history.push_back(res);
  int it = 0;
  for (; it < max_iters && res > tol; ++it) {
    const auto d = face_diffusivity(gradient_faces(phi), p, eps_reg);
    const LaggedOperator op(grid, d);
    ScalarField rhs(grid);
    for (std::size_t i = 0; i < phi.size(); ++i) rhs[i] = lam * std::pow(phi[i], p.cell[i] - 1.0);
    const ScalarField psi = normalized(op.solve(0.0, 1.0, rhs), p);

    bool accepted = false;
    double tau = 1.0;
    for (int j = 0; j < 30; ++j, tau *= 0.5) {
      ScalarField cand(grid);
      for (std::size_t i = 0; i < phi.size(); ++i) cand[i] = (1.0 - tau) * phi[i] + tau * psi[i];
      cand = normalized(std::move(cand), p);
      const double cl = quotient_lambda(cand, p, eps_reg);
      const double cr = eigen_residual(cand, p, cl, eps_reg);
      if (cr < res) {
        phi = std::move(cand);
        lam = cl;
        res = cr;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    out.residual_history.push_back(res);
  }
  out.lambda1 = lam;
  out.M = max_value(phi);
  out.phi = std::move(phi);
  out.residual = res;
  out.iterations = it;
  out.converged = res <= tol;
  return out;
}

double epsilon_bound(const EigenPair& pair, const ScalarField& u0, double r, double p_minus) {
  require_bound_inputs(pair, u0, r, p_minus);
  const double eM = std::numbers::e * pair.M;
  return std::min({1.0, std::pow(1.0 + pair.lambda1, r - p_minus) / eM, min_value(u0) / eM});
}

double epsilon_sufficient_bound(const EigenPair& pair, const ScalarField& u0, double r, double p_minus) {
  require_bound_inputs(pair, u0, r, p_minus);
  const double eM = std::numbers::e * pair.M;
  return std::min({1.0, std::pow(1.0 + pair.lambda1, 1.0 / (r - p_minus)) / eM, min_value(u0) / eM});
}

ScalarField barrier(const EigenPair& pair, double eps, double T, double t) {
  if (!(T > 0.0)) throw InvalidArgument("barrier needs T > 0");
  ScalarField w = pair.phi;
  const double f = eps * std::exp(1.0 - t / T);
  for (double& v : w.values) v *= f;
  return w;
}

BarrierCheck check_barrier_inequality(const EigenPair& pair, double eps, const ExponentSamples& p, double r,
                                      double T) {
  BarrierCheck out;
  out.worst_margin = -kInfinity;
  const double lam = pair.lambda1;
  for (double t : {0.0, 0.5 * T, T}) {
    const auto w = barrier(pair, eps, T, t);
    ScalarField m(w.grid);
    double worst = -kInfinity;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double wi = w[i];
      if (wi > 0.0) {
        m[i] = lam * std::pow(wi, p.cell[i] - 1.0) - lam * std::pow(wi, r) / (eps * pair.phi[i] + lam * wi);
      }
      worst = std::max(worst, m[i]);
    }
    if (worst > out.worst_margin) {
      out.worst_margin = worst;
      out.worst_time = t;
      out.margin = std::move(m);
    }
  }
  out.holds = out.worst_margin <= 0.0;
  return out;
}

CheckResult check_ordering(const SimResult& sim, const SimResult& aux, const EigenPair& pair, double eps, double T) {
  if (!(sim.final_field.grid == aux.final_field.grid) || !(sim.final_field.grid == pair.phi.grid))
    throw InvalidArgument("ordering check needs a common grid");
  if (sim.snapshots.size() != sim.records.size() || aux.snapshots.size() != aux.records.size())
    throw InvalidArgument("ordering check needs snapshots at every record");
  CheckResult c;
  c.name = "ordering";
  const double slack = 1e-6 * sim.records.front().linf;
  std::size_t shared = 0;
  for (std::size_t k = 0, j = 0; k < sim.records.size() && j < aux.records.size();) {
    const double t = sim.records[k].t;
    if (aux.records[j].t < t) { ++j; continue; }
    if (aux.records[j].t > t) { ++k; continue; }
    if (t > T) break;
    const auto w = barrier(pair, eps, T, t);
    const auto& u = sim.snapshots[k].values;
    const auto& v = aux.snapshots[j].values;
    double worst = kInfinity;
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::min({worst, v[i] - w[i] + slack, u[i] - v[i] + slack});
    if (c.margins.empty() || worst < c.worst_margin) c.worst_margin = worst;
    c.times.push_back(t);
    c.margins.push_back(worst);
    ++shared;
    ++k;
    ++j;
  }
  if (shared == 0) {
    c.verdict = Verdict::inconclusive;
    c.note = "no shared record times";
  } else {
    c.verdict = c.worst_margin >= 0.0 ? Verdict::pass : Verdict::fail;
    c.note = std::to_string(shared) + " shared records";
  }
  return c;
}

}  // namespace pxlab
