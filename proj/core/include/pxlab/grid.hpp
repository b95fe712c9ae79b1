#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pxlab {

/// Uniform cell-centered box grid in 1, 2 or 3 dimensions.
///
/// Unknowns live at cell centers; the walls of the box carry the homogeneous
/// Dirichlet condition. Flattened indices run with x fastest.
struct Grid {
  int dim = 1;
  std::array<int, 3> cells{1, 1, 1};
  std::array<double, 3> extent{1.0, 1.0, 1.0};

  static Grid make(std::span<const int> cells, std::span<const double> extent);
  static Grid uniform(int dim, int cells_per_axis, double extent = 1.0);

  double spacing(int axis) const { return extent[axis] / cells[axis]; }
  double min_spacing() const;
  double cell_volume() const;
  double measure() const;
  std::size_t size() const;
  double center(int axis, int i) const { return (i + 0.5) * spacing(axis); }
  std::array<double, 3> center(const std::array<int, 3>& idx) const;

  std::size_t index(int i, int j = 0, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(cells[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(cells[1]) * k);
  }
  std::array<int, 3> unravel(std::size_t flat) const;

  /// Faces normal to `axis`, including both walls.
  std::array<int, 3> face_shape(int axis) const;
  std::size_t face_count(int axis) const;
  std::size_t face_index(int axis, const std::array<int, 3>& idx) const;
  std::array<int, 3> unravel_face(int axis, std::size_t flat) const;

  bool operator==(const Grid& other) const;
};

/// Cell-centered samples of a scalar field on a grid.
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  ScalarField(const Grid& g, std::vector<double> v);

  static ScalarField from_function(const Grid& g,
                                   const std::function<double(const std::array<double, 3>&)>& f);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Face-normal gradient components and full gradient magnitudes at every face.
struct FaceVectorField {
  Grid grid;
  std::array<std::vector<double>, 3> normal;
  std::array<std::vector<double>, 3> magnitude;
};

}  // namespace pxlab
