#pragma once

#include <array>
#include <span>
#include <vector>

#include "pxlab/exponent.hpp"
#include "pxlab/grid.hpp"

namespace pxlab {

inline constexpr double kDefaultEpsReg = 1e-8;

/// Face gradients with the half-cell Dirichlet convention: a wall face sees
/// (u_cell - 0) / (h/2). Tangential components at a face average the central
/// differences of the adjacent cells (ghost value -u beyond a wall).
FaceVectorField gradient_faces(const ScalarField& u);

/// Quadrature weight of a face normal to `axis`: h^N inside, h^N / 2 on a wall.
double face_weight(const Grid& grid, int axis, int face_coord);

/// Regularized diffusivity (|grad u|^2 + eps^2)^((p - 2) / 2) at every face.
std::array<std::vector<double>, 3> face_diffusivity(const FaceVectorField& g,
                                                    const ExponentSamples& p, double eps_reg);

/// Discrete div(|grad u|^(p-2) grad u): per cell, sum over axes of (F_right - F_left) / h
/// with F = D * normal gradient. Throws NumericalError on a non-finite result.
ScalarField px_laplacian(const ScalarField& u, const ExponentSamples& p, double eps_reg = kDefaultEpsReg);

/// Same operator with a precomputed face diffusivity.
ScalarField flux_divergence(const FaceVectorField& g, const std::array<std::vector<double>, 3>& diffusivity);

/// Pointwise |u|^(r-2) u, zero at u = 0.
ScalarField source_term(const ScalarField& u, double r);
double source_value(double u, double r);

/// Axis-averaged face quadrature of |grad u|^p(x) and of (1/p) |grad u|^p(x).
double gradient_modular(const FaceVectorField& g, const ExponentSamples& p);
double gradient_energy(const FaceVectorField& g, const ExponentSamples& p);

/// Net outward boundary flux, sum over wall faces of F . n h^(N-1).
double boundary_flux(const FaceVectorField& g, const std::array<std::vector<double>, 3>& diffusivity);

/// Transposes the linear map u -> (face gradient components). `cotangent[a][c]`
/// holds, for faces normal to axis a, the cotangent of component c.
ScalarField gradient_adjoint(const Grid& grid,
                             const std::array<std::array<std::vector<double>, 3>, 3>& cotangent);

/// All Cartesian components of the face gradient, indexed [axis][component][face].
std::array<std::array<std::vector<double>, 3>, 3> gradient_components(const ScalarField& u);

}  // namespace pxlab
