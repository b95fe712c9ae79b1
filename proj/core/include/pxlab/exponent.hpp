#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pxlab/grid.hpp"

namespace pxlab {

struct Extrema {
  double p_minus = 0.0;
  double p_plus = 0.0;
};

enum class ExponentKind { constant, affine, sinusoidal, sampled };

/// The variable exponent p(x).
///
///   constant    p = value
///   affine      p = base + sum_a slope[a] * x_a
///   sinusoidal  p = base + amplitude * prod_a sin(pi x_a / L_a)
///   sampled     one value per grid cell
class ExponentField {
 public:
  static ExponentField constant(double value);
  static ExponentField affine(double base, std::vector<double> slope);
  static ExponentField sinusoidal(double base, double amplitude);
  static ExponentField sampled(std::vector<double> values);

  ExponentKind kind() const { return kind_; }
  double base() const { return base_; }
  double amplitude() const { return amplitude_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  /// Evaluates p at cell `flat` of `grid`.
  double at_cell(const Grid& grid, std::size_t flat) const;

  const std::optional<Extrema>& cached_extrema() const { return extrema_; }
  void cache_extrema(const Extrema& e) { extrema_ = e; }

 private:
  ExponentKind kind_ = ExponentKind::constant;
  double base_ = 2.0;
  double amplitude_ = 0.0;
  std::vector<double> coeffs_;
  std::optional<Extrema> extrema_;
};

/// p evaluated once on a grid: at cell centers and at faces (arithmetic mean
/// of the two adjacent cells, the single adjacent cell on a wall).
struct ExponentSamples {
  Grid grid;
  std::vector<double> cell;
  std::array<std::vector<double>, 3> face;
  double p_minus = 0.0;
  double p_plus = 0.0;
};

/// Min and max of p over cell and face samples; caches them on `p`.
/// Throws InvalidArgument when p_minus <= 1 or a sample is not finite.
Extrema extrema(ExponentField& p, const Grid& grid);

/// Samples p on `grid`, validating 1 < p_minus <= p_plus < inf.
ExponentSamples sample(const ExponentField& p, const Grid& grid);

struct LogHolderReport {
  double sup_modulus = 0.0;
  bool satisfied = true;
  std::size_t pairs_examined = 0;
  bool exhaustive = true;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Sup over sampled center pairs with 0 < |x - y| < 1 of |p(x) - p(y)| ln(1/|x - y|).
/// Exhaustive in 1D below 512 cells, otherwise `random_pairs` random pairs.
LogHolderReport log_holder_estimate(const ExponentField& p, const Grid& grid, double cap = 1e3,
                                    std::uint64_t seed = kDefaultSeed,
                                    std::size_t random_pairs = 200000);

}  // namespace pxlab
