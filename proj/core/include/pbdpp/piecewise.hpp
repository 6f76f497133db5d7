#pragma once

#include <vector>

#include "pbdpp/rng.hpp"

namespace pbdpp {

/// Piecewise-constant density on a sub-range of [0,1]: values[i] on
/// (breaks[i], breaks[i+1]). Not necessarily normalized.
struct PiecewiseDensity {
  std::vector<double> breaks;
  std::vector<double> values;

  static PiecewiseDensity lebesgue() { return {{0.0, 1.0}, {1.0}}; }

  void validate() const;
  double total() const;
  double value_at(double x) const;
  /// Draw from the normalized density by piecewise-linear inverse CDF.
  double sample(Rng& rng) const;
};

}  // namespace pbdpp
