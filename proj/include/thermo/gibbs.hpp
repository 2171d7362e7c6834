#pragma once

#include "thermo/factor.hpp"
#include "thermo/markov.hpp"
#include "thermo/potential.hpp"
#include "thermo/seq_table.hpp"
#include "thermo/trend.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace thermo {

/// Perron data of the transfer matrix of a locally constant potential and
/// the Gibbs Markov measure it induces.
struct GibbsData {
  double lambda = 0.0;
  double pressure = 0.0;  // log lambda
  std::vector<Word> states;
  std::vector<double> left, right;  // unit 1-norm, positive
  double eigen_residual = 0.0;
  std::size_t iterations = 0;
  /// Set when the eigenvalue is an integer and the eigenvectors were solved
  /// exactly (zero potential).
  std::optional<Rational> exact_lambda;
  std::shared_ptr<const MarkovMeasure> measure;
};

/// Transfer matrix on k-block states (k = max(r−1, 1)) with weights e^f,
/// solved by shifted power iteration from the uniform vector.
GibbsData transfer_pressure(std::shared_ptr<const Sft> sft, const LocallyConstantPotential& f);

/// Entropy rate −Σ_s π_s Σ_t P_st log P_st.
double entropy(const MarkovMeasure& mu);

struct IntegralReport {
  std::vector<double> values;        // (1/n) ∫ log f_n dm, index n-1
  std::vector<double> running_inf;   // min over n' ≤ n
  bool subadditive = true;           // a_{n+m} ≤ a_n + a_m for a_n = ∫ log f_n dm
  std::size_t witness_n = 0, witness_m = 0;
  double witness_excess = 0.0;
  double kingman_upper() const { return running_inf.back(); }
};

/// (1/n) Σ_{|w|=n} m[w] log f_n(w) for n = 1..depth. The measure must live
/// on a shift whose alphabet matches the table and charge only table words.
IntegralReport integrate_table(const SeqTable& t, const MarkovMeasure& m, std::size_t depth,
                               double tol = 1e-12);

/// Cylinder masses aligned with the words of a table.
struct MassTable {
  std::vector<std::vector<double>> mass;                  // [n-1][idx]
  std::optional<std::vector<std::vector<Rational>>> exact;
  std::size_t depth_max() const { return mass.size(); }
};

/// μ[w] for the table's words; the table alphabet must equal μ's.
MassTable cylinder_masses(const MarkovMeasure& mu, const SeqTable& t);
/// πμ[y] for the table's words; the table alphabet must equal π's target.
MassTable pushforward_masses(const MarkovMeasure& mu, const OneBlockFactor& pi, const SeqTable& t);

enum class GibbsClass { Gibbs, WeakGibbs, Neither };
std::string to_string(GibbsClass c);

struct WeakGibbsReport {
  double pressure = 0.0;
  std::string pressure_source;
  std::vector<double> log_c;  // index n-1; +inf when some word has zero mass
  std::vector<Word> witness;
  std::optional<std::vector<Rational>> exact_c;
  LinearFit fit;
  GibbsClass classification = GibbsClass::Neither;
  Verdict status = Verdict::Evidence;
};

/// C_n = max_u max(ρ, 1/ρ) with ρ = μ[u] / (e^{−nP} f_n(u)). Exact constants
/// are produced when masses and table are exact and P = log(exact_lambda).
WeakGibbsReport weak_gibbs_constants(const MassTable& masses, const SeqTable& t, double pressure,
                                     std::string pressure_source,
                                     std::optional<Rational> exact_lambda = std::nullopt,
                                     double slope_threshold = kDefaultSlopeThreshold);

struct SandwichReport {
  bool holds = true;
  bool exact = false;
  std::size_t words_checked = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // log C_n + log M_n − |log ratio|
  Word witness;
  std::size_t witness_depth = 0;
};

/// 1/(C_n M_n) ≤ πμ[y] / (e^{−nP} g_n(y)) ≤ C_n M_n for every stored y.
/// The exact form needs exact masses, counts, constants and M_n = 1.
SandwichReport check_sandwich(const MassTable& image_masses, const SeqTable& g, double pressure,
                              const WeakGibbsReport& source_constants, double tol = 1e-9);
SandwichReport check_sandwich_exact(const MassTable& image_masses, const SeqTable& g, const Rational& lambda,
                                    const WeakGibbsReport& source_constants);

}  // namespace thermo
