#pragma once

#include "thermo/factor.hpp"
#include "thermo/log_linear.hpp"
#include "thermo/potential.hpp"
#include "thermo/seq_table.hpp"
#include "thermo/sequence_checks.hpp"
#include "thermo/trend.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace thermo {

struct ChebyshevFit {
  std::shared_ptr<const LocallyConstantPotential> h;
  std::size_t range = 1;
  std::size_t n_fit = 1;
  double t_star = 0.0;
  std::optional<LogLinear> t_star_exact;
  /// Every fitted row satisfies |L − S h| ≤ t* in exact arithmetic.
  bool exact_verified = false;
  double achieved = 0.0;  // recomputed max |log g_n − S_n h| over points
  Word achieved_witness;
  std::size_t points = 0;
  std::size_t columns = 0;
  std::size_t pivots = 0;
};

/// Chebyshev fit of S_n h to log g_n at n = n_fit over points, i.e. words y'
/// of length n_fit + r − 1 paired with log g_n of their n-prefix. Solved as
/// the dual LP by a deterministic tableau simplex: exact on counting tables
/// (values are linear combinations of logarithms), floating point otherwise.
ChebyshevFit fit_h(const SeqTable& gt, std::shared_ptr<const Language> image, std::size_t range,
                   std::size_t n_fit, NumericMode mode = NumericMode::Auto);

struct AchievedDefect {
  double value = 0.0;
  Word witness;
};

/// max over points y' of |log g_n(y'_1…y'_n) − S_n h(y')|.
AchievedDefect achieved_defect(const SeqTable& gt, const LocallyConstantPotential& h, std::size_t n);

struct PeriodicDefect {
  PeriodicPoint point;
  std::vector<std::size_t> depths;  // jq
  std::vector<double> values;       // d_{y,j}
  std::optional<std::vector<LogLinear>> exact;
  bool exact_zero() const;
  /// Some d_{y,j} < 0 in exact arithmetic.
  bool exact_negative() const;
};

/// d_{y,j} = (1/(jq)) (log g_{jq}(block^j) − S_{jq} h(y)) for j = 1..J with
/// jq ≤ depth_max.
PeriodicDefect periodic_defect(const SeqTable& gt, const LocallyConstantPotential& h, const PeriodicPoint& y,
                               std::size_t max_multiple);

struct UniformDefect {
  std::size_t n = 0;
  double value = 0.0;
  Word witness;
  std::optional<bool> exact_zero;
};

/// (1/n) max_y |log g_n(y) − sup_[y] S_n h|.
UniformDefect uniform_defect(const SeqTable& gt, const LocallyConstantPotential& h, std::size_t n);

/// Canonical primitive blocks b, |b| ≤ max_period, with b^∞ in the table's
/// language up to its depth.
std::vector<PeriodicPoint> table_periodic_points(const SeqTable& t, std::size_t max_period);

struct C2Certificate {
  Word u;
  Symbol first_symbol = 0;  // a_{i0} in the domain alphabet
  Symbol last_symbol = 0;   // b_{j0}
  Word fiber_word;
  Word bridge;
  PeriodicPoint y_star;
  double log_m = 0.0;
  double log_l = 0.0;  // log(L1·L2) or log(L²)
  double log_variation = 0.0;
  double log_bound = 0.0;  // m − log L − 2 log M_n
  bool l_squared = false;
  std::vector<double> slack;  // j = 1..
  std::vector<bool> exact_checked;
  bool verified = true;
};

/// Periodic certificate for image word u: the best preimage end-symbol
/// pair, an X-bridge of length ≤ gap back to its start and the slacks of
/// log g_{j(n+q)}((u π(w))^j) − j (log K + log g_n(u)).
C2Certificate c2_certificate(const SeqTable& gt, const OneBlockFactor& pi, const LocallyConstantPotential& f,
                             std::span<const Symbol> u, std::optional<std::size_t> gap, std::size_t max_multiple,
                             bool l_squared = false);

/// Lower bound on lim_j d_{y*,j} implied by a certificate:
/// (log K + log g_n(u) − S_{n+q} h(y*)) / (n + q).
struct LimitBound {
  Word u;
  PeriodicPoint y_star;
  double lower = 0.0;
  std::optional<LogLinear> exact_lower;  // counting path with exact h
};

LimitBound certificate_limit_bound(const SeqTable& gt, const OneBlockFactor& pi, const LocallyConstantPotential& f,
                                   const LocallyConstantPotential& h, const C2Certificate& cert);

struct CompensationReport {
  Verdict verdict = Verdict::Evidence;
  std::string reason;
  std::vector<PeriodicDefect> periodic;
  std::vector<UniformDefect> uniform;
  LinearFit uniform_fit;
  DefectProfile profile;
  std::optional<PeriodicDefect> refuting_orbit;
  std::vector<LimitBound> bounds;
  std::optional<LimitBound> refuting_bound;
  std::size_t depth = 0;
  std::size_t max_period = 0;
};

/// Aggregates periodic defects, uniform defects and the defect-profile
/// growth test into a three-valued verdict for the candidate h. With the
/// factor and potential at hand, each orbit block b also yields a
/// certificate for u = b^k (|u| ≤ depth/2) whose limit bound can refute h.
CompensationReport compensation_verdict(const SeqTable& gt, const LocallyConstantPotential& h,
                                        const std::vector<PeriodicPoint>& orbits,
                                        double slope_threshold = kDefaultSlopeThreshold,
                                        const OneBlockFactor* pi = nullptr,
                                        const LocallyConstantPotential* f = nullptr);

CompensationReport compensation_verdict(const OneBlockFactor& pi, const LocallyConstantPotential& f,
                                        const LocallyConstantPotential& h, std::size_t depth,
                                        std::size_t max_period = 6, NumericMode mode = NumericMode::Auto,
                                        double slope_threshold = kDefaultSlopeThreshold);

}  // namespace thermo
