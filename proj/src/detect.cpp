#include "thermo/detect.hpp"

#include "thermo/parallel.hpp"
#include "thermo/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace thermo {

namespace {

struct FitRow {
  std::vector<std::uint32_t> counts;  // window multiplicities
  std::size_t hi = 0;                 // point with the largest log g
  std::size_t lo = 0;                 // point with the smallest log g
};

// Builds and solves the dual of min t s.t. |L_y − a_y·h| ≤ t, whose
// columns are α_y (a_y; 1), β_y (−a_y; 1), the slack σ and one artificial
// per window row.
template <class Coef, class Value>
LpSolution<Value> solve_fit(const std::vector<FitRow>& rows, std::size_t windows, const std::vector<Value>& hi,
                            const std::vector<Value>& lo) {
  const std::size_t m = windows + 1;
  const std::size_t cols = 2 * rows.size() + 1 + windows;
  std::vector<std::vector<Coef>> a(m, std::vector<Coef>(cols, Coef(0)));
  std::vector<Value> c(cols, Value{});
  std::vector<bool> artificial(cols, false);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t b = 0; b < windows; ++b) {
      a[b][2 * k] = Coef(rows[k].counts[b]);
      a[b][2 * k + 1] = -Coef(rows[k].counts[b]);
    }
    a[windows][2 * k] = Coef(1);
    a[windows][2 * k + 1] = Coef(1);
    c[2 * k] = hi[k];
    c[2 * k + 1] = -lo[k];
  }
  const std::size_t sigma = 2 * rows.size();
  a[windows][sigma] = Coef(1);
  std::vector<std::size_t> basis(m);
  for (std::size_t b = 0; b < windows; ++b) {
    a[b][sigma + 1 + b] = Coef(1);
    artificial[sigma + 1 + b] = true;
    basis[b] = sigma + 1 + b;
  }
  basis[windows] = sigma;
  std::vector<Coef> rhs(m, Coef(0));
  rhs[windows] = Coef(1);
  return simplex_max<Coef, Value>(std::move(a), std::move(rhs), c, std::move(basis), artificial);
}

std::size_t table_index(const SeqTable& gt, std::span<const Symbol> w) {
  auto idx = gt.find(w);
  if (!idx) throw SpecError("word '" + format_word(w, gt.alphabet()) + "' is missing from the table");
  return *idx;
}

}  // namespace

AchievedDefect achieved_defect(const SeqTable& gt, const LocallyConstantPotential& h, std::size_t n) {
  const std::size_t r = h.range();
  AchievedDefect out;
  out.value = -1;
  for (const Word& y : h.space().blocks(n + r - 1)) {
    const double lg = gt.log_value(n, table_index(gt, std::span<const Symbol>(y).first(n)));
    const double d = std::abs(lg - birkhoff_on_word(h, y, n));
    if (d > out.value) {
      out.value = d;
      out.witness = y;
    }
  }
  return out;
}

ChebyshevFit fit_h(const SeqTable& gt, std::shared_ptr<const Language> image, std::size_t range, std::size_t n_fit,
                   NumericMode mode) {
  if (range == 0) throw SpecError("range must be >= 1");
  if (range > n_fit) throw SpecError("range exceeds the fitting depth");
  if (n_fit > gt.depth_max()) throw SpecError("fitting depth exceeds the table depth");
  if (image->alphabet() != gt.alphabet()) throw SpecError("image alphabet does not match the table");
  if (mode == NumericMode::Exact && !gt.exact()) throw SpecError("exact fit needs an exact table");
  bool exact = gt.exact() && mode != NumericMode::Float;

  const std::vector<Word> windows = image->blocks(range);
  std::map<Word, std::size_t> window_index;
  for (std::size_t i = 0; i < windows.size(); ++i) window_index[windows[i]] = i;

  const std::vector<Word> points = image->blocks(n_fit + range - 1);
  if (points.size() > kMaxTableWords) throw CapError("fit exceeds the point cap; lower --nfit");
  std::map<std::vector<std::uint32_t>, FitRow> dedup;
  std::vector<std::size_t> prefix_idx(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Word& y = points[p];
    std::vector<std::uint32_t> counts(windows.size(), 0);
    for (std::size_t i = 0; i < n_fit; ++i) ++counts[window_index.at(Word(y.begin() + i, y.begin() + i + range))];
    prefix_idx[p] = table_index(gt, std::span<const Symbol>(y).first(n_fit));
    auto [it, fresh] = dedup.try_emplace(counts, FitRow{counts, p, p});
    if (fresh) continue;
    FitRow& row = it->second;
    auto better = [&](std::size_t x, std::size_t yy) {
      if (gt.exact()) return gt.count(n_fit, prefix_idx[x]) > gt.count(n_fit, prefix_idx[yy]);
      return gt.log_value(n_fit, prefix_idx[x]) > gt.log_value(n_fit, prefix_idx[yy]);
    };
    if (better(p, row.hi)) row.hi = p;
    if (better(row.lo, p)) row.lo = p;
  }
  std::vector<FitRow> rows;
  for (auto& [k, v] : dedup) rows.push_back(std::move(v));

  ChebyshevFit fit;
  fit.range = range;
  fit.n_fit = n_fit;
  fit.points = points.size();
  fit.columns = 2 * rows.size() + 1;

  if (exact) {
    try {
      std::vector<LogLinear> hi, lo;
      for (const auto& row : rows) {
        hi.push_back(gt.exact_log(n_fit, prefix_idx[row.hi]));
        lo.push_back(gt.exact_log(n_fit, prefix_idx[row.lo]));
      }
      auto sol = solve_fit<Rational, LogLinear>(rows, windows.size(), hi, lo);
      std::map<Word, LogLinear> values;
      for (std::size_t b = 0; b < windows.size(); ++b) values[windows[b]] = sol.duals[b];
      fit.h = std::make_shared<LocallyConstantPotential>(image, range, values);
      fit.t_star_exact = sol.duals[windows.size()];
      fit.t_star = fit.t_star_exact->to_double();
      fit.pivots = sol.pivots;
      bool ok = true;
      for (std::size_t k = 0; k < rows.size() && ok; ++k) {
        LogLinear s;
        for (std::size_t b = 0; b < windows.size(); ++b)
          if (rows[k].counts[b]) s += values[windows[b]] * Rational(rows[k].counts[b]);
        ok = !(hi[k] - s > *fit.t_star_exact) && !(s - lo[k] > *fit.t_star_exact);
      }
      fit.exact_verified = ok;
    } catch (const CapError&) {
      if (mode == NumericMode::Exact) throw;
      exact = false;
    }
  }
  if (!exact) {
    std::vector<double> hi, lo;
    for (const auto& row : rows) {
      hi.push_back(gt.log_value(n_fit, prefix_idx[row.hi]));
      lo.push_back(gt.log_value(n_fit, prefix_idx[row.lo]));
    }
    auto sol = solve_fit<double, double>(rows, windows.size(), hi, lo);
    std::map<Word, double> values;
    for (std::size_t b = 0; b < windows.size(); ++b) values[windows[b]] = sol.duals[b];
    fit.h = std::make_shared<LocallyConstantPotential>(image, range, values);
    fit.t_star = std::max(0.0, sol.duals[windows.size()]);
    fit.pivots = sol.pivots;
  }
  AchievedDefect ach = achieved_defect(gt, *fit.h, n_fit);
  fit.achieved = ach.value;
  fit.achieved_witness = ach.witness;
  return fit;
}

bool PeriodicDefect::exact_zero() const {
  if (!exact) return false;
  return std::all_of(exact->begin(), exact->end(), [](const LogLinear& v) { return v.is_zero(); });
}

bool PeriodicDefect::exact_negative() const {
  if (!exact) return false;
  return std::any_of(exact->begin(), exact->end(), [](const LogLinear& v) { return !v.is_zero() && v.sign() < 0; });
}

PeriodicDefect periodic_defect(const SeqTable& gt, const LocallyConstantPotential& h, const PeriodicPoint& y,
                               std::size_t max_multiple) {
  const std::size_t q = y.period();
  if (q == 0) throw SpecError("periodic point has an empty block");
  if (!h.space().contains(repeat(y.block, std::max<std::size_t>(2, (h.range() + q - 1) / q + 1))))
    throw SpecError("periodic point '" + format_word(y.block, gt.alphabet()) + "' is not in the image language");
  PeriodicDefect out;
  out.point = y;
  const bool exact = gt.exact() && h.exact();
  if (exact) out.exact.emplace();
  for (std::size_t j = 1; j <= max_multiple && j * q <= gt.depth_max(); ++j) {
    const std::size_t n = j * q;
    const Word w = repeat(y.block, j);
    const std::size_t idx = table_index(gt, w);
    out.depths.push_back(n);
    out.values.push_back((gt.log_value(n, idx) - periodic_birkhoff(h, y.block, n)) / static_cast<double>(n));
    if (exact)
      out.exact->push_back((gt.exact_log(n, idx) - periodic_birkhoff_exact(h, y.block, n)) /
                           Rational(static_cast<long long>(n)));
  }
  return out;
}

UniformDefect uniform_defect(const SeqTable& gt, const LocallyConstantPotential& h, std::size_t n) {
  if (n == 0 || n > gt.depth_max()) throw SpecError("uniform defect depth outside the table");
  const std::size_t size = gt.size(n);
  std::vector<double> dev(size);
  std::vector<char> nonzero(size, 0);
  const bool exact = gt.exact() && h.exact();
  parallel_for(size, [&](std::size_t idx) {
    const Word y = gt.word(n, idx);
    dev[idx] = std::abs(gt.log_value(n, idx) - birkhoff_sup(h, y)) / static_cast<double>(n);
    if (exact) nonzero[idx] = !(gt.exact_log(n, idx) == birkhoff_sup_exact(h, y));
  });
  UniformDefect out;
  out.n = n;
  out.value = -1;
  std::size_t best = 0;
  for (std::size_t i = 0; i < size; ++i)
    if (dev[i] > out.value) {
      out.value = dev[i];
      best = i;
    }
  out.witness = gt.word(n, best);
  if (exact) out.exact_zero = std::none_of(nonzero.begin(), nonzero.end(), [](char c) { return c != 0; });
  return out;
}

std::vector<PeriodicPoint> table_periodic_points(const SeqTable& t, std::size_t max_period) {
  std::vector<PeriodicPoint> out;
  const std::size_t depth = t.depth_max();
  for (std::size_t q = 1; q <= max_period && q <= depth; ++q) {
    for (std::uint64_t code = 0; code < code_space(t.alphabet_size(), q); ++code) {
      Word block = decode(code, q, t.alphabet_size());
      if (!is_canonical_primitive(block)) continue;
      Word w = repeat(block, depth / q + 1);
      w.resize(depth);
      bool ok = t.find(w).has_value();
      // Every rotation must also run to full depth.
      for (std::size_t s = 1; s < q && ok; ++s) {
        Word rot = repeat(block, depth / q + 2);
        ok = t.find(std::span<const Symbol>(rot).subspan(s, depth)).has_value();
      }
      if (ok) out.push_back(PeriodicPoint{block});
    }
  }
  return out;
}

C2Certificate c2_certificate(const SeqTable& gt, const OneBlockFactor& pi, const LocallyConstantPotential& f,
                             std::span<const Symbol> u, std::optional<std::size_t> gap, std::size_t max_multiple,
                             bool l_squared) {
  const Sft& x = pi.domain();
  if (u.empty()) throw SpecError("certificate word must be nonempty");
  if (!pi.image().contains(u)) throw SpecError("certificate word is not in the image language");
  if (!x.is_irreducible()) throw SpecError("certificate needs an irreducible domain");
  const std::size_t p = gap ? *gap : *x.weak_spec_number();
  const std::size_t n = u.size();
  const bool counting = f.is_zero() && gt.exact();

  C2Certificate cert;
  cert.u.assign(u.begin(), u.end());
  cert.l_squared = l_squared;

  // Partial fiber sums by (first, last) domain symbol.
  std::map<std::pair<Symbol, Symbol>, std::pair<double, BigInt>> partial;
  std::map<std::pair<Symbol, Symbol>, Word> representative;
  for (const Word& w : pi.fiber_words(u)) {
    auto key = std::make_pair(w.front(), w.back());
    auto [it, fresh] = partial.try_emplace(key, kNegInf, BigInt(0));
    it->second.first = log_add(it->second.first, birkhoff_sup(f, w));
    it->second.second += 1;
    if (fresh) representative[key] = w;
  }
  const std::pair<Symbol, Symbol>* best = nullptr;
  for (const auto& [key, val] : partial) {
    if (!best) {
      best = &key;
      continue;
    }
    const auto& cur = partial.at(*best);
    bool better = counting ? val.second > cur.second : val.first > cur.first;
    if (better) best = &key;
  }
  cert.first_symbol = best->first;
  cert.last_symbol = best->second;
  cert.fiber_word = representative.at(*best);

  const Symbol last = cert.last_symbol, first = cert.first_symbol;
  auto w = x.bridge(std::span<const Symbol>(&last, 1), std::span<const Symbol>(&first, 1), p);
  if (!w) throw SpecError("no bridge within the gap cap");
  cert.bridge = *w;
  const std::size_t q = w->size();
  cert.y_star = PeriodicPoint{concat(u, pi.map(*w))};

  double m = 0.0;
  for (std::size_t i = 1; i <= p; ++i)
    for (const Word& v : x.blocks(i)) m = std::min(m, birkhoff_inf(f, v));
  cert.log_m = m;
  const std::size_t l1 = pi.preimages(u.front()).size();
  const std::size_t l2 = pi.preimages(u.back()).size();
  const BigInt l_count = l_squared ? BigInt(x.size() * x.size()) : BigInt(l1 * l2);
  cert.log_l = log_of(l_count);
  cert.log_variation = log_variation_constant(f, n);
  cert.log_bound = cert.log_m - cert.log_l - 2 * cert.log_variation;

  const std::size_t u_idx = table_index(gt, u);
  const double log_gu = gt.log_value(n, u_idx);
  for (std::size_t j = 1; j <= max_multiple && j * (n + q) <= gt.depth_max(); ++j) {
    const Word word = repeat(cert.y_star.block, j);
    const std::size_t idx = table_index(gt, word);
    const double slack = gt.log_value(word.size(), idx) - static_cast<double>(j) * (cert.log_bound + log_gu);
    cert.slack.push_back(slack);
    bool ok;
    if (counting) {
      // m = 0 and M_n = 1, so the bound reads count·L^j ≥ count(u)^j.
      BigInt lhs = gt.count(word.size(), idx), rhs = 1;
      for (std::size_t i = 0; i < j; ++i) {
        lhs *= l_count;
        rhs *= gt.count(n, u_idx);
      }
      ok = lhs >= rhs;
      cert.exact_checked.push_back(true);
    } else {
      ok = slack >= -1e-12;
      cert.exact_checked.push_back(false);
    }
    cert.verified = cert.verified && ok;
  }
  return cert;
}

LimitBound certificate_limit_bound(const SeqTable& gt, const OneBlockFactor& pi, const LocallyConstantPotential& f,
                                   const LocallyConstantPotential& h, const C2Certificate& cert) {
  LimitBound b;
  b.u = cert.u;
  b.y_star = cert.y_star;
  const std::size_t n = cert.u.size();
  const std::size_t period = cert.y_star.period();
  const std::size_t u_idx = table_index(gt, cert.u);
  b.lower = (cert.log_bound + gt.log_value(n, u_idx) - periodic_birkhoff(h, cert.y_star.block, period)) /
            static_cast<double>(period);
  if (f.is_zero() && gt.exact() && h.exact()) {
    // m = 0 and M_n = 1 on the counting path.
    const BigInt l = cert.l_squared ? BigInt(pi.domain().size() * pi.domain().size())
                                    : BigInt(pi.preimages(cert.u.front()).size() * pi.preimages(cert.u.back()).size());
    b.exact_lower = (gt.exact_log(n, u_idx) - LogLinear::log_of(l) - periodic_birkhoff_exact(h, cert.y_star.block, period)) /
                    Rational(static_cast<long long>(period));
  }
  return b;
}

CompensationReport compensation_verdict(const SeqTable& gt, const LocallyConstantPotential& h,
                                        const std::vector<PeriodicPoint>& orbits, double slope_threshold,
                                        const OneBlockFactor* pi, const LocallyConstantPotential* f) {
  CompensationReport rep;
  rep.depth = gt.depth_max();
  for (const auto& y : orbits) rep.max_period = std::max(rep.max_period, y.period());
  for (const auto& y : orbits) rep.periodic.push_back(periodic_defect(gt, h, y, gt.depth_max()));
  std::vector<double> xs, ys;
  for (std::size_t n = 1; n <= gt.depth_max(); ++n) {
    rep.uniform.push_back(uniform_defect(gt, h, n));
    xs.push_back(static_cast<double>(n));
    ys.push_back(rep.uniform.back().value);
  }
  rep.uniform_fit = linear_fit(xs, ys);
  rep.profile = defect_profile(gt, slope_threshold);
  if (pi && f && pi->domain().is_irreducible()) {
    for (const auto& y : orbits) {
      const std::size_t k = std::max<std::size_t>(1, gt.depth_max() / (2 * y.period()));
      const Word u = repeat(y.block, k);
      C2Certificate cert = c2_certificate(gt, *pi, *f, u, std::nullopt, 1);
      rep.bounds.push_back(certificate_limit_bound(gt, *pi, *f, h, cert));
    }
  }

  // Negative periodic defects are only conclusive on subadditive tables.
  bool subadditive = gt.kind() != SeqKind::Imported || check_subadditive(gt).holds;
  if (rep.profile.growth_flag) {
    const auto& w = *rep.profile.growth_witness;
    rep.verdict = Verdict::Refuted;
    rep.reason = "defect profile log C_{" + std::to_string(w.n) + ",m} grows linearly in m; worst at m=" +
                 std::to_string(w.m) + " on '" + format_word(w.witness, gt.alphabet()) + "'";
    return rep;
  }
  if (subadditive) {
    for (const auto& d : rep.periodic)
      if (d.exact_negative()) {
        rep.verdict = Verdict::Refuted;
        rep.refuting_orbit = d;
        rep.reason = "periodic defect of '" + format_word(d.point.block, gt.alphabet()) +
                     "' is negative; its limit is the infimum over multiples";
        return rep;
      }
  }
  for (const auto& b : rep.bounds)
    if (b.exact_lower && !b.exact_lower->is_zero() && b.exact_lower->sign() > 0) {
      rep.verdict = Verdict::Refuted;
      rep.refuting_bound = b;
      rep.reason = "certificate for u='" + format_word(b.u, gt.alphabet()) + "' bounds the periodic defect of '" +
                   format_word(b.y_star.block, gt.alphabet()) + "' below by " + b.exact_lower->to_string() + " > 0";
      return rep;
    }
  bool exact_identity = true;
  for (const auto& d : rep.periodic) exact_identity = exact_identity && d.exact_zero();
  for (const auto& u : rep.uniform) exact_identity = exact_identity && u.exact_zero.value_or(false);
  if (exact_identity) {
    rep.verdict = Verdict::Certified;
    rep.reason = "uniform and periodic defects vanish exactly at every checked depth";
    return rep;
  }
  rep.verdict = Verdict::Evidence;
  rep.reason = "no exact identity and no refuting witness; see defect trends";
  return rep;
}

CompensationReport compensation_verdict(const OneBlockFactor& pi, const LocallyConstantPotential& f,
                                        const LocallyConstantPotential& h, std::size_t depth, std::size_t max_period,
                                        NumericMode mode, double slope_threshold) {
  if (h.space().alphabet() != pi.target_alphabet()) throw SpecError("candidate h does not live on the image");
  SeqTable gt = build_g_table(pi, f, depth, mode);
  return compensation_verdict(gt, h, pi.image_periodic_points(max_period), slope_threshold, &pi, &f);
}

}  // namespace thermo
