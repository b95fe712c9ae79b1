#include "pxlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pxlab/error.hpp"

namespace pxlab {

Grid Grid::make(std::span<const int> cells, std::span<const double> extent) {
  if (cells.empty() || cells.size() > 3) {
    throw InvalidArgument("grid dimension must be 1, 2 or 3");
  }
  if (extent.size() != cells.size()) {
    throw InvalidArgument("grid extent count must match cell count");
  }
  Grid g;
  g.dim = static_cast<int>(cells.size());
  for (int a = 0; a < g.dim; ++a) {
    if (cells[a] < 3) {
      throw InvalidArgument("grid needs at least 3 cells per axis, got " + std::to_string(cells[a]));
    }
    if (!(extent[a] > 0.0) || !std::isfinite(extent[a])) {
      throw InvalidArgument("grid extent must be positive and finite");
    }
    g.cells[a] = cells[a];
    g.extent[a] = extent[a];
  }
  return g;
}

Grid Grid::uniform(int dim, int cells_per_axis, double extent) {
  std::array<int, 3> c{cells_per_axis, cells_per_axis, cells_per_axis};
  std::array<double, 3> e{extent, extent, extent};
  return make(std::span<const int>(c.data(), static_cast<std::size_t>(dim)),
              std::span<const double>(e.data(), static_cast<std::size_t>(dim)));
}

double Grid::min_spacing() const {
  double h = spacing(0);
  for (int a = 1; a < dim; ++a) h = std::min(h, spacing(a));
  return h;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

double Grid::measure() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= extent[a];
  return v;
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(cells[a]);
  return n;
}

std::array<double, 3> Grid::center(const std::array<int, 3>& idx) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = center(a, idx[a]);
  return x;
}

std::array<int, 3> Grid::unravel(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  idx[0] = static_cast<int>(flat % cells[0]);
  flat /= cells[0];
  idx[1] = static_cast<int>(flat % cells[1]);
  idx[2] = static_cast<int>(flat / cells[1]);
  return idx;
}

std::array<int, 3> Grid::face_shape(int axis) const {
  std::array<int, 3> s = cells;
  s[axis] += 1;
  for (int a = dim; a < 3; ++a) s[a] = 1;
  return s;
}

std::size_t Grid::face_count(int axis) const {
  auto s = face_shape(axis);
  return static_cast<std::size_t>(s[0]) * s[1] * s[2];
}

std::size_t Grid::face_index(int axis, const std::array<int, 3>& idx) const {
  auto s = face_shape(axis);
  return static_cast<std::size_t>(idx[0]) +
         static_cast<std::size_t>(s[0]) *
             (static_cast<std::size_t>(idx[1]) + static_cast<std::size_t>(s[1]) * idx[2]);
}

std::array<int, 3> Grid::unravel_face(int axis, std::size_t flat) const {
  auto s = face_shape(axis);
  std::array<int, 3> idx{0, 0, 0};
  idx[0] = static_cast<int>(flat % s[0]);
  flat /= s[0];
  idx[1] = static_cast<int>(flat % s[1]);
  idx[2] = static_cast<int>(flat / s[1]);
  return idx;
}

bool Grid::operator==(const Grid& other) const {
  if (dim != other.dim) return false;
  for (int a = 0; a < dim; ++a) {
    if (cells[a] != other.cells[a] || extent[a] != other.extent[a]) return false;
  }
  return true;
}

ScalarField::ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw InvalidArgument("field length " + std::to_string(values.size()) +
                          " does not match grid size " + std::to_string(grid.size()));
  }
}

ScalarField ScalarField::from_function(const Grid& g,
                                       const std::function<double(const std::array<double, 3>&)>& f) {
  ScalarField u(g);
  for (std::size_t c = 0; c < u.size(); ++c) u[c] = f(g.center(g.unravel(c)));
  return u;
}

}  // namespace pxlab
