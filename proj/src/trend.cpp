#include "thermo/trend.hpp"

#include "thermo/numeric.hpp"

#include <algorithm>

namespace thermo {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "CERTIFIED";
    case Verdict::Evidence: return "EVIDENCE";
    case Verdict::Refuted: return "REFUTED";
  }
  return "UNKNOWN";
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw SpecError("fit series differ in length");
  LinearFit fit;
  fit.points = xs.size();
  if (xs.empty()) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 1e-30 * std::max(1.0, my * my)) {
    fit.r_squared = 1.0;
  } else {
    double sse = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
      sse += e * e;
    }
    fit.r_squared = 1.0 - sse / syy;
  }
  return fit;
}

bool growth_detected(const LinearFit& fit, double slope_threshold) {
  return fit.points >= kMinTrendPoints && fit.slope > slope_threshold && fit.r_squared >= kMinRSquared;
}

}  // namespace thermo
