#pragma once

#include "thermo/log_linear.hpp"
#include "thermo/seq_table.hpp"
#include "thermo/trend.hpp"

#include <optional>
#include <string>
#include <vector>

namespace thermo {

/// log Z_n = log Σ_{|w|=n} f_n(w).
double partition_sum(const SeqTable& t, std::size_t n);
/// Exact Z_n on the counting path.
BigInt partition_count(const SeqTable& t, std::size_t n);

struct PressureEstimate {
  std::vector<double> log_z;     // index n-1
  std::vector<double> per_n;     // (1/n) log Z_n
  double fekete_upper = 0.0;     // min_n (1/n) log Z_n
  std::size_t fekete_depth = 0;  // minimizing n
  double extrapolated = 0.0;
  /// (1/n) log Z_n at the minimizing n, exactly, when counts are available
  /// and factor within the cap.
  std::optional<LogLinear> fekete_exact;
};

/// The finite sequence (1/n) log Z_n, its running minimum and an Aitken
/// estimate from the increments log Z_n − log Z_{n−1}.
PressureEstimate pressure_estimate(const SeqTable& t);

struct SplitWitness {
  Word word;
  std::size_t n = 0;
  std::size_t m = 0;
  double slack = 0.0;
};

struct SubadditivityReport {
  bool holds = true;
  double worst_slack = kNegInf;  // max of log f_{n+m}(y) − log f_n(y) − log f_m(σ^n y)
  std::optional<SplitWitness> witness;
  std::size_t splits_checked = 0;
};

/// All splits of all stored words. On the counting path the verdict uses
/// exact integer comparison; otherwise slack must not exceed tol.
SubadditivityReport check_subadditive(const SeqTable& t, double tol = 1e-12);

/// Z_{n+m} ≤ Z_n Z_m for all n + m ≤ depth_max. The witness word is empty.
SubadditivityReport check_partition_subadditive(const SeqTable& t, double tol = 1e-12);

struct D2Entry {
  std::size_t n = 0;
  std::size_t m = 0;
  double log_d = 0.0;  // min over (u,v) of the best bridged ratio
  bool bridged = true;
  Word worst_u, worst_v, worst_w;
};

struct D2Report {
  std::size_t gap = 0;
  std::vector<D2Entry> entries;
  bool all_bridged = true;
  /// Exact tables whose every best ratio is at least 1 need no decay.
  bool exact_nonnegative = false;
  LinearFit diagonal_fit;  // −log D_{n,n} against n
  Verdict verdict = Verdict::Evidence;
  std::optional<double> log_d(std::size_t n, std::size_t m) const;
};

/// For each (u, v) at depths (n, m) with n, m ≤ max_nm and n + m + gap ≤
/// depth_max, the best bridge w with |w| ≤ gap maximizing
/// log f_{n+m+|w|}(uwv) − log f_n(u) − log f_m(v).
D2Report check_d2(const SeqTable& t, std::size_t gap, std::size_t max_nm,
                  double slope_threshold = kDefaultSlopeThreshold);

struct DefectEntry {
  std::size_t n = 0;
  std::size_t m = 0;
  double log_c = 0.0;
  Word witness;
  /// C_{n,m} itself on the counting path.
  std::optional<Rational> exact_c;
};

struct DefectGrowth {
  std::size_t n = 0;
  LinearFit fit;
  bool growth = false;
};

struct DefectProfile {
  std::size_t depth_max = 0;
  std::vector<DefectEntry> entries;  // ordered by (n, m)
  std::vector<DefectGrowth> growth;  // one fit per n with enough points
  bool growth_flag = false;
  std::optional<DefectEntry> growth_witness;
  bool exact_zero = false;  // every C_{n,m} equals 1 exactly
  const DefectEntry* find(std::size_t n, std::size_t m) const;
};

/// log C_{n,m} = max_y |log f_{n+m}(y) − log f_n(y) − log f_m(σ^n y)| for all
/// n, m ≥ 1 with n + m ≤ depth_max, plus a per-n growth test in m.
DefectProfile defect_profile(const SeqTable& t, double slope_threshold = kDefaultSlopeThreshold);

/// CSV with header n,m,logC,D; D_{n,m} is filled in when a D2 report covers (n, m).
std::string to_csv(const DefectProfile& profile, const D2Report* d2 = nullptr);

}  // namespace thermo
