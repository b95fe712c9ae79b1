#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "pxlab/exponent.hpp"
#include "pxlab/grid.hpp"

namespace pxlab {

inline constexpr double kDefaultLuxemburgTol = 1e-12;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Weighted sample set defining a modular  rho(lambda) = sum_i w_i |v_i / lambda|^(p_i).
struct ModularTerms {
  std::vector<double> values;
  std::vector<double> exponents;
  std::vector<double> weights;

  double evaluate(double lambda = 1.0) const;
};

/// Samples of |u| at cell centers weighted by the cell volume.
ModularTerms cell_terms(const ScalarField& u, const ExponentSamples& p);
/// Face gradient magnitudes weighted by face_weight / N.
ModularTerms gradient_terms(const FaceVectorField& g, const ExponentSamples& p);

/// Midpoint quadrature of the integral of |u|^p(x).
double modular(const ScalarField& u, const ExponentSamples& p);

/// inf{lambda > 0 : rho(u / lambda) <= 1} by bisection on a bracket taken from
/// the norm-modular sandwich. Zero for a zero field.
double luxemburg_norm(const ModularTerms& terms, double tol = kDefaultLuxemburgTol);
double luxemburg_norm(const ScalarField& u, const ExponentSamples& p, double tol = kDefaultLuxemburgTol);
/// Luxemburg norm of the discrete gradient of u.
double gradient_luxemburg_norm(const ScalarField& u, const ExponentSamples& p,
                               double tol = kDefaultLuxemburgTol);

/// (integral |u|^r)^(1/r) by midpoint quadrature; r = infinity gives max |u|.
double lr_norm(const ScalarField& u, double r);

struct EmbeddingEstimate {
  double constant = 0.0;
  ScalarField maximizer;
  std::vector<double> per_start;
};

/// ||u||_r / ||grad u||_p(.) for a nonzero field.
double embedding_ratio(const ScalarField& u, const ExponentSamples& p, double target_r);

/// Lower estimate of the discrete constant B in ||u||_r <= B ||grad u||_p(.)
/// by multi-start gradient ascent of embedding_ratio.
EmbeddingEstimate estimate_embedding_constant(const Grid& grid, const ExponentSamples& p, double target_r,
                                              int restarts, int iters, std::uint64_t seed = kDefaultSeed);

/// Critical Sobolev exponent N p / (N - p) for p < N, infinity otherwise.
double sobolev_exponent(int dim, double p);

}  // namespace pxlab
