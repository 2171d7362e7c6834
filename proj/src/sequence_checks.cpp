#include "thermo/sequence_checks.hpp"

#include "thermo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thermo {

namespace {

std::uint64_t ipow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Index of a stored subword; a table whose language is not closed under
// subwords cannot be checked.
std::size_t require(const SeqTable& t, std::size_t n, std::uint64_t code) {
  auto idx = t.find(n, code);
  if (!idx) {
    throw SpecError("table is missing subword '" + format_word(decode(code, n, t.alphabet_size()), t.alphabet()) +
                    "'");
  }
  return *idx;
}

struct SplitScan {
  double worst = kNegInf;
  std::size_t worst_idx = 0;
  bool exact_violation = false;
  std::size_t exact_idx = 0;
};

}  // namespace

double partition_sum(const SeqTable& t, std::size_t n) {
  double acc = kNegInf;
  for (double v : t.level(n).log_values) acc = log_add(acc, v);
  return acc;
}

BigInt partition_count(const SeqTable& t, std::size_t n) {
  if (!t.exact()) throw SpecError("partition count requires an exact table");
  BigInt z = 0;
  for (const auto& c : t.level(n).counts) z += c;
  return z;
}

PressureEstimate pressure_estimate(const SeqTable& t) {
  const std::size_t depth = t.depth_max();
  if (depth < 3) throw SpecError("pressure estimate needs depth >= 3");
  PressureEstimate est;
  for (std::size_t n = 1; n <= depth; ++n) {
    double lz = partition_sum(t, n);
    est.log_z.push_back(lz);
    est.per_n.push_back(lz / static_cast<double>(n));
  }
  est.fekete_depth = 1;
  est.fekete_upper = est.per_n[0];
  for (std::size_t n = 2; n <= depth; ++n)
    if (est.per_n[n - 1] < est.fekete_upper) {
      est.fekete_upper = est.per_n[n - 1];
      est.fekete_depth = n;
    }
  if (t.exact()) {
    try {
      est.fekete_exact = LogLinear::log_of(partition_count(t, est.fekete_depth)) /
                         Rational(static_cast<long long>(est.fekete_depth));
    } catch (const CapError&) {
      est.fekete_exact.reset();
    }
  }
  auto inc = [&](std::size_t n) { return n == 1 ? est.log_z[0] : est.log_z[n - 1] - est.log_z[n - 2]; };
  const double d0 = inc(depth - 2), d1 = inc(depth - 1), d2 = inc(depth);
  const double denom = (d2 - d1) - (d1 - d0);
  double aitken = d2 - (d2 - d1) * (d2 - d1) / denom;
  if (std::abs(denom) <= 1e-14 * std::max(1.0, std::abs(d2)) || !std::isfinite(aitken)) aitken = d2;
  est.extrapolated = aitken;
  return est;
}

SubadditivityReport check_subadditive(const SeqTable& t, double tol) {
  SubadditivityReport rep;
  const std::uint64_t l = t.alphabet_size();
  for (std::size_t total = 2; total <= t.depth_max(); ++total) {
    const auto& lv = t.level(total);
    std::vector<SplitScan> scans(total - 1);
    parallel_for(total - 1, [&](std::size_t s) {
      const std::size_t n = s + 1, m = total - n;
      const std::uint64_t base = ipow(l, m);
      const auto& ln = t.level(n);
      const auto& lm = t.level(m);
      SplitScan& sc = scans[s];
      for (std::size_t i = 0; i < lv.codes.size(); ++i) {
        std::size_t a = require(t, n, lv.codes[i] / base);
        std::size_t b = require(t, m, lv.codes[i] % base);
        double slack = lv.log_values[i] - ln.log_values[a] - lm.log_values[b];
        if (t.exact()) {
          const BigInt prod = ln.counts[a] * lm.counts[b];
          if (lv.counts[i] == prod) slack = 0.0;  // no rounding noise on tight splits
          if (!sc.exact_violation && lv.counts[i] > prod) {
            sc.exact_violation = true;
            sc.exact_idx = i;
          }
        }
        if (slack > sc.worst) {
          sc.worst = slack;
          sc.worst_idx = i;
        }
      }
    });
    for (std::size_t s = 0; s < scans.size(); ++s) {
      const SplitScan& sc = scans[s];
      rep.splits_checked += lv.codes.size();
      bool violated = t.exact() ? sc.exact_violation : sc.worst > tol;
      if (sc.worst > rep.worst_slack) rep.worst_slack = sc.worst;
      if (violated && rep.holds) {
        rep.holds = false;
        std::size_t idx = t.exact() ? sc.exact_idx : sc.worst_idx;
        std::size_t n = s + 1;
        const std::uint64_t base = ipow(l, total - n);
        double slack = lv.log_values[idx] - t.log_value(n, require(t, n, lv.codes[idx] / base)) -
                       t.log_value(total - n, require(t, total - n, lv.codes[idx] % base));
        rep.witness = SplitWitness{t.word(total, idx), n, total - n, slack};
      }
    }
  }
  return rep;
}

SubadditivityReport check_partition_subadditive(const SeqTable& t, double tol) {
  SubadditivityReport rep;
  std::vector<double> lz;
  std::vector<BigInt> z;
  for (std::size_t n = 1; n <= t.depth_max(); ++n) {
    lz.push_back(partition_sum(t, n));
    if (t.exact()) z.push_back(partition_count(t, n));
  }
  for (std::size_t total = 2; total <= t.depth_max(); ++total)
    for (std::size_t n = 1; n < total; ++n) {
      const std::size_t m = total - n;
      double slack = lz[total - 1] - lz[n - 1] - lz[m - 1];
      ++rep.splits_checked;
      rep.worst_slack = std::max(rep.worst_slack, slack);
      bool violated = t.exact() ? z[total - 1] > z[n - 1] * z[m - 1] : slack > tol;
      if (violated && rep.holds) {
        rep.holds = false;
        rep.witness = SplitWitness{{}, n, m, slack};
      }
    }
  return rep;
}

std::optional<double> D2Report::log_d(std::size_t n, std::size_t m) const {
  for (const auto& e : entries)
    if (e.n == n && e.m == m) return e.log_d;
  return std::nullopt;
}

D2Report check_d2(const SeqTable& t, std::size_t gap, std::size_t max_nm, double slope_threshold) {
  D2Report rep;
  rep.gap = gap;
  const std::uint64_t l = t.alphabet_size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t n = 1; n <= max_nm; ++n)
    for (std::size_t m = 1; m <= max_nm; ++m)
      if (n + m + gap <= t.depth_max()) pairs.emplace_back(n, m);
  rep.entries.resize(pairs.size());
  std::vector<char> nonneg(pairs.size(), 1);
  parallel_for(pairs.size(), [&](std::size_t pi) {
    const auto [n, m] = pairs[pi];
    D2Entry& e = rep.entries[pi];
    e.n = n;
    e.m = m;
    e.log_d = std::numeric_limits<double>::infinity();
    const auto& ln = t.level(n);
    const auto& lm = t.level(m);
    for (std::size_t a = 0; a < ln.codes.size(); ++a)
      for (std::size_t b = 0; b < lm.codes.size(); ++b) {
        double best = kNegInf;
        std::uint64_t best_w = 0;
        std::size_t best_k = 0;
        std::size_t best_idx = 0;
        for (std::size_t k = 0; k <= gap; ++k) {
          const std::size_t total = n + k + m;
          const std::uint64_t wspace = ipow(l, k), vspace = ipow(l, m);
          for (std::uint64_t w = 0; w < wspace; ++w) {
            std::uint64_t code = (ln.codes[a] * wspace + w) * vspace + lm.codes[b];
            auto idx = t.find(total, code);
            if (!idx) continue;
            double ratio = t.log_value(total, *idx) - ln.log_values[a] - lm.log_values[b];
            if (ratio > best) {
              best = ratio;
              best_w = w;
              best_k = k;
              best_idx = *idx;
            }
          }
        }
        if (best == kNegInf) {
          if (e.bridged) {
            e.worst_u = t.word(n, a);
            e.worst_v = t.word(m, b);
            e.worst_w.clear();
          }
          e.bridged = false;
          continue;
        }
        if (t.exact() && t.count(n + best_k + m, best_idx) < ln.counts[a] * lm.counts[b]) nonneg[pi] = 0;
        if (best < e.log_d) {
          e.log_d = best;
          if (e.bridged) {
            e.worst_u = t.word(n, a);
            e.worst_v = t.word(m, b);
            e.worst_w = decode(best_w, best_k, t.alphabet_size());
          }
        }
      }
    if (!e.bridged) e.log_d = kNegInf;
  });
  std::vector<double> xs, ys;
  rep.exact_nonnegative = t.exact();
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    rep.all_bridged = rep.all_bridged && e.bridged;
    rep.exact_nonnegative = rep.exact_nonnegative && e.bridged && nonneg[i];
    if (e.n == e.m && e.bridged) {
      xs.push_back(static_cast<double>(e.n));
      ys.push_back(-e.log_d);
    }
  }
  rep.diagonal_fit = linear_fit(xs, ys);
  // Convex growth (e.g. quadratic) fails the linear R² test but is worse, so a
  // strictly increasing diagonal with a steep fit also counts.
  bool increasing = ys.size() >= kMinTrendPoints;
  for (std::size_t i = 1; i < ys.size() && increasing; ++i) increasing = ys[i] > ys[i - 1];
  const bool decays = growth_detected(rep.diagonal_fit, slope_threshold) ||
                      (increasing && rep.diagonal_fit.slope > slope_threshold);
  if (!rep.all_bridged) rep.verdict = Verdict::Refuted;
  else if (rep.exact_nonnegative) rep.verdict = Verdict::Certified;
  else rep.verdict = decays ? Verdict::Refuted : Verdict::Evidence;
  return rep;
}

const DefectEntry* DefectProfile::find(std::size_t n, std::size_t m) const {
  for (const auto& e : entries)
    if (e.n == n && e.m == m) return &e;
  return nullptr;
}

DefectProfile defect_profile(const SeqTable& t, double slope_threshold) {
  if (t.depth_max() < 2) throw SpecError("defect profile needs depth >= 2");
  DefectProfile prof;
  prof.depth_max = t.depth_max();
  const std::uint64_t l = t.alphabet_size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t n = 1; n < t.depth_max(); ++n)
    for (std::size_t m = 1; n + m <= t.depth_max(); ++m) pairs.emplace_back(n, m);
  prof.entries.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t pi) {
    const auto [n, m] = pairs[pi];
    const std::uint64_t base = ipow(l, m);
    const auto& lv = t.level(n + m);
    const auto& ln = t.level(n);
    const auto& lm = t.level(m);
    std::vector<double> defect(lv.codes.size());
    std::vector<std::size_t> ai(lv.codes.size()), bi(lv.codes.size());
    double best = -1.0;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < lv.codes.size(); ++i) {
      ai[i] = require(t, n, lv.codes[i] / base);
      bi[i] = require(t, m, lv.codes[i] % base);
      defect[i] = std::abs(lv.log_values[i] - ln.log_values[ai[i]] - lm.log_values[bi[i]]);
      if (defect[i] > best) {
        best = defect[i];
        best_idx = i;
      }
    }
    DefectEntry& e = prof.entries[pi];
    e.n = n;
    e.m = m;
    e.log_c = best;
    if (t.exact()) {
      // Near-ties in floating point are resolved by exact ratios num/den ≥ 1.
      BigInt best_num = 0, best_den = 1;
      for (std::size_t i = 0; i < lv.codes.size(); ++i) {
        if (defect[i] < best - 1e-9 * std::max(1.0, best)) continue;
        BigInt prod = ln.counts[ai[i]] * lm.counts[bi[i]];
        BigInt num = lv.counts[i], den = prod;
        if (num < den) std::swap(num, den);
        if (num * best_den > best_num * den) {
          best_num = num;
          best_den = den;
          best_idx = i;
        }
      }
      Rational best_c(best_num, best_den);
      e.exact_c = best_c;
      e.log_c = best_num == best_den ? 0.0 : defect[best_idx];
    }
    e.witness = t.word(n + m, best_idx);
  });
  prof.exact_zero = t.exact();
  for (const auto& e : prof.entries) prof.exact_zero = prof.exact_zero && e.exact_c && *e.exact_c == 1;
  for (std::size_t n = 1; n < t.depth_max(); ++n) {
    std::vector<double> xs, ys;
    for (const auto& e : prof.entries)
      if (e.n == n) {
        xs.push_back(static_cast<double>(e.m));
        ys.push_back(e.log_c);
      }
    if (xs.size() < kMinTrendPoints) continue;
    DefectGrowth g{n, linear_fit(xs, ys), false};
    g.growth = growth_detected(g.fit, slope_threshold);
    if (g.growth && !prof.growth_flag) {
      prof.growth_flag = true;
      const DefectEntry* w = nullptr;
      for (const auto& e : prof.entries)
        if (e.n == n && (!w || e.log_c > w->log_c)) w = &e;
      prof.growth_witness = *w;
    }
    prof.growth.push_back(g);
  }
  return prof;
}

std::string to_csv(const DefectProfile& profile, const D2Report* d2) {
  std::ostringstream out;
  out.precision(17);
  out << "n,m,logC,D\n";
  for (const auto& e : profile.entries) {
    out << e.n << ',' << e.m << ',' << e.log_c << ',';
    if (d2)
      if (auto d = d2->log_d(e.n, e.m)) out << std::exp(*d);
    out << '\n';
  }
  return out.str();
}

}  // namespace thermo
