#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace thermo {

/// Three-valued outcome of a finite-depth check on a limiting property.
enum class Verdict { Certified, Evidence, Refuted };
std::string to_string(Verdict v);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y ≈ slope·x + intercept. A constant series has
/// r_squared = 1.
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

inline constexpr double kDefaultSlopeThreshold = 0.05;
inline constexpr double kMinRSquared = 0.99;
inline constexpr std::size_t kMinTrendPoints = 3;

/// Linear growth: slope above threshold with a tight fit on enough points.
bool growth_detected(const LinearFit& fit, double slope_threshold = kDefaultSlopeThreshold);

}  // namespace thermo
