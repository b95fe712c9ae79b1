#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pxlab/simulator.hpp"

namespace pxlab {

enum class Provenance { unavailable, estimated, formula, root_found, derived };
std::string to_string(Provenance p);

/// A constant together with where it came from. `note` explains an absent value.
struct Quantity {
  double value = std::numeric_limits<double>::quiet_NaN();
  Provenance provenance = Provenance::unavailable;
  std::string note;

  bool defined() const { return provenance != Provenance::unavailable; }
  static Quantity make(double v, Provenance p) { return {v, p, {}}; }
  static Quantity missing(std::string why) { return {std::numeric_limits<double>::quiet_NaN(), Provenance::unavailable, std::move(why)}; }
};

/// alpha / p+ - (B1^r / r) max{alpha^(r/p-), alpha^(r/p+)}.
double h_of_alpha(double alpha, double p_minus, double p_plus, double r, double B1);

struct CriticalConstants {
  double B1 = 1.0;
  double alpha1 = 1.0;
  double E1_printed = 0.0;
  double E1_peak = 0.0;  // h(alpha1)
};

/// Requires r > p+.
CriticalConstants critical_constants(double B, double p_minus, double p_plus, double r);

/// Root of h(alpha) = E0 on the decreasing branch alpha > alpha1. Requires E0 < E1_peak.
double solve_alpha2(double E0, const CriticalConstants& c, double p_minus, double p_plus, double r,
                    double tol = 1e-12);

struct BlowUpConstants {
  double C0 = 0.0;                // general form with the E1 passed in
  double C0_general_printed = 0.0;  // general form with E1_printed
  double C0_display = 0.0;        // the closed display, which assumes E1_printed
  double M = 0.0;                 // max{alpha2^(r/p-), alpha2^(r/p+)}
  bool positive = false;
};

/// C0 = [(r - p+)/r - p+ E1 / (B1^r M)] |Omega|^((2-r)/2) 2^(r/2). Accepts r >= 2, r > p+.
BlowUpConstants blow_up_constants(double alpha2, const CriticalConstants& c, double E1_used, double p_minus,
                                  double p_plus, double r, double omega_measure);

/// G0^(1 - r/2) / ((r/2 - 1) C0) with G0 = (1/2) int u0^2. Requires r > 2.
double blow_up_time_bound(double G0_half, double C0, double r);

struct ExtinctionConstants {
  double p_minus = 0.0;
  double p_plus = 0.0;
  double r = 2.0;
  double u0_l2 = 0.0;
  double C1 = 0.0;
  double y0 = 0.0;  // ||u0||_2^(2 - p+)
  double K1 = std::numeric_limits<double>::quiet_NaN();
  double F_u0 = std::numeric_limits<double>::quiet_NaN();
  double T1 = std::numeric_limits<double>::infinity();
  bool small_data = false;

  double g(double t) const;
  /// max(g, 0)^(1 / (2 - p+)).
  double envelope(double t) const;
};

/// Both branches: r = 2 (K1) and 1 < r < 2 (F(u0)). Requires 2N/(N+2) < p- <= p+ < r <= 2.
ExtinctionConstants extinction_constants(double u0_l2, double C1, double p_minus, double p_plus, double r,
                                         double omega_measure, int dim);

/// (1/2) min{C2^(-p+), C2^(-p-)}.
double derive_C1(double C2, double p_minus, double p_plus);

struct OdeTrajectory {
  std::vector<double> t;
  std::vector<double> y;
  double hitting_time = std::numeric_limits<double>::infinity();
};

/// y' = ((2 - p+)/2) (Bc y^((r - p+)/(2 - p+)) - A) by RK4, clamped at zero.
OdeTrajectory comparison_ode(double y0, double A, double Bc, double p_plus, double r, double dt, double horizon);

struct FastDiffusion {
  double s = 0.0;
  double beta = 0.0;
  double kappa = 0.0;  // exponent applied to G(0) inside the logarithm of T3
  bool valid = false;  // 1 < p- < 2N/(N+2), 1 < p+ < N p- / (N - p-)
  bool s_positive = false;
};

FastDiffusion fast_diffusion_constants(int dim, double p_minus, double p_plus);

/// Extinction time estimate with G0 = int u0^(s+1); infinity when C2/C3 <= G0^kappa.
double fast_diffusion_T3(const FastDiffusion& fd, int dim, double p_minus, double p_plus, double C2, double C3,
                         double G0);

/// Everything the constants depend on besides the exponents.
struct TheoryInputs {
  int dim = 1;
  double omega = 1.0;
  double p_minus = 2.0;
  double p_plus = 2.0;
  double r = 2.0;
  std::optional<double> B;     // ||u||_r <= B ||grad u||_p(.)
  std::optional<double> C2;    // ||u||_2 <= C2 ||grad u||_p(.)
  std::optional<double> C_fd;  // critical embedding constant for the fast-diffusion block
  EnergyRecord initial;
  double grad_norm_p = 0.0;    // Luxemburg norm of grad u0
  double u0_min = 0.0;         // min of u0 over cells
  double u0_linf = 0.0;
  double G_fd0 = 0.0;          // int u0^(s+1)
};

struct TheoryConstants {
  Quantity B, C2, B1, alpha1, E1_printed, E1_peak, E1_used, alpha2, C0, C0_general_printed, C0_display, T_star;
  Quantity C1, K1, F_u0, T1, s, beta, kappa, C2_fd, C3_fd, T3;
  std::optional<ExtinctionConstants> extinction;
  std::optional<CriticalConstants> critical;
};

TheoryConstants compute_theory(const TheoryInputs& in);

enum class Regime {
  blow_up,
  global_L2_growth,
  global_Linf_growth,
  extinction_small_data,
  non_extinction,
  fast_diffusion_extinction,
  unknown
};
std::string to_string(Regime r);

struct Hypothesis {
  std::string name;
  bool holds = false;
  std::string witness;
};

struct RegimeReport {
  std::vector<Hypothesis> hypotheses;  // H1 H2 H5 H6 H7 H8 H9 H10 H11
  std::vector<std::string> satisfied_blocks;
  Regime regime = Regime::unknown;
  std::string explanation;

  const Hypothesis& at(const std::string& name) const;
};

RegimeReport classify_regime(const TheoryInputs& in, const TheoryConstants& c);

}  // namespace pxlab
