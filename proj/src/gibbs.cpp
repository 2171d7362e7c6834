#include "thermo/gibbs.hpp"

#include "thermo/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace thermo {

namespace {

using Matrix = std::vector<std::vector<double>>;

std::vector<double> multiply(const Matrix& a, const std::vector<double>& v, bool transpose) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (transpose) out[j] += a[i][j] * v[i];
      else out[i] += a[i][j] * v[j];
    }
  return out;
}

double norm1(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += std::abs(x);
  return s;
}

struct PowerResult {
  std::vector<double> vec;
  double lambda = 0;
  double residual = 0;
  std::size_t iterations = 0;
};

// Power iteration on W + sI, s = max row sum, which is primitive whenever W
// is irreducible and shares its Perron vector.
PowerResult perron(const Matrix& w, bool transpose) {
  const std::size_t n = w.size();
  double shift = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) row += transpose ? w[j][i] : w[i][j];
    shift = std::max(shift, row);
  }
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  PowerResult res;
  constexpr std::size_t kMaxIter = 2'000'000;
  for (res.iterations = 1; res.iterations <= kMaxIter; ++res.iterations) {
    std::vector<double> next = multiply(w, v, transpose);
    for (std::size_t i = 0; i < n; ++i) next[i] += shift * v[i];
    const double s = norm1(next);
    double diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= s;
      diff += std::abs(next[i] - v[i]);
    }
    v = std::move(next);
    if (diff < 1e-14) break;
  }
  std::vector<double> wv = multiply(w, v, transpose);
  res.lambda = norm1(wv) / norm1(v);
  double r = 0;
  for (std::size_t i = 0; i < n; ++i) r += std::abs(wv[i] - res.lambda * v[i]);
  res.residual = r;
  res.vec = std::move(v);
  return res;
}

// Positive vector spanning the kernel of a, normalized to sum 1, if the
// kernel is one-dimensional.
std::optional<std::vector<Rational>> exact_kernel(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t p = row;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(a[p], a[row]);
    Rational inv = 1 / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational k = a[r][col];
      for (std::size_t c = 0; c < n; ++c) a[r][c] -= k * a[row][c];
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() != n - 1) return std::nullopt;
  std::size_t free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
  std::vector<Rational> v(n, 0);
  v[free_col] = 1;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -a[r][free_col];
  Rational total = 0;
  for (const auto& x : v) total += x;
  if (total == 0) return std::nullopt;
  for (auto& x : v) {
    x /= total;
    if (x <= 0) return std::nullopt;
  }
  return v;
}

}  // namespace

GibbsData transfer_pressure(std::shared_ptr<const Sft> sft, const LocallyConstantPotential& f) {
  if (!sft) throw SpecError("transfer pressure needs an SFT");
  const auto* fx = dynamic_cast<const Sft*>(&f.space());
  if (!fx || !(*fx == *sft)) throw SpecError("potential does not live on the given SFT");
  if (!sft->is_irreducible()) throw SpecError("transfer pressure requires an irreducible SFT");
  const std::size_t r = f.range();
  const std::size_t k = std::max<std::size_t>(r - 1, 1);
  GibbsData out;
  out.states = sft->blocks(k);
  const std::size_t n = out.states.size();
  std::map<Word, std::size_t> slot;
  for (std::size_t i = 0; i < n; ++i) slot[out.states[i]] = i;
  Matrix w(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const Word& s = out.states[i];
    for (std::size_t c = 0; c < sft->size(); ++c) {
      if (!sft->allowed(s.back(), static_cast<Symbol>(c))) continue;
      Word cat = s;
      cat.push_back(static_cast<Symbol>(c));
      Word next(cat.begin() + 1, cat.end());
      double val = r == 1 ? f.value(std::span<const Symbol>(&cat.back(), 1)) : f.value(cat);
      const std::size_t j = slot.at(next);
      w[i][j] = std::exp(val);
      adj[i][j] = 1;
    }
  }
  PowerResult right = perron(w, false);
  PowerResult left = perron(w, true);
  out.lambda = right.lambda;
  out.pressure = std::log(out.lambda);
  out.right = right.vec;
  out.left = left.vec;
  out.eigen_residual = std::max(right.residual, left.residual);
  out.iterations = right.iterations + left.iterations;

  if (f.is_zero()) {
    const double rounded = std::round(out.lambda);
    if (rounded >= 1 && std::abs(out.lambda - rounded) < 1e-9) {
      const Rational lam(static_cast<long long>(rounded));
      std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n)), at(n, std::vector<Rational>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          a[i][j] = Rational(adj[i][j]) - (i == j ? lam : Rational(0));
          at[j][i] = a[i][j];
        }
      auto rv = exact_kernel(a);
      auto lv = exact_kernel(at);
      if (rv && lv) {
        std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, 0));
        std::vector<Rational> pi(n);
        Rational total = 0;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            if (adj[i][j]) p[i][j] = (*rv)[j] / (lam * (*rv)[i]);
          pi[i] = (*lv)[i] * (*rv)[i];
          total += pi[i];
        }
        for (auto& x : pi) x /= total;
        out.exact_lambda = lam;
        out.lambda = to_double(lam);
        out.pressure = std::log(out.lambda);
        for (std::size_t i = 0; i < n; ++i) {
          out.right[i] = to_double((*rv)[i]);
          out.left[i] = to_double((*lv)[i]);
        }
        out.measure = std::make_shared<MarkovMeasure>(sft, k, out.states, std::move(p), std::move(pi));
        return out;
      }
    }
  }

  Matrix p(n, std::vector<double>(n, 0.0));
  std::vector<double> pi(n);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!adj[i][j]) continue;
      p[i][j] = w[i][j] * out.right[j] / (out.lambda * out.right[i]);
      row += p[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) p[i][j] /= row;
    pi[i] = out.left[i] * out.right[i];
    total += pi[i];
  }
  for (auto& x : pi) x /= total;
  out.measure = std::make_shared<MarkovMeasure>(sft, k, out.states, std::move(p), std::move(pi));
  return out;
}

double entropy(const MarkovMeasure& mu) {
  const auto& p = mu.transition();
  const auto& pi = mu.stationary();
  double h = 0;
  for (std::size_t s = 0; s < p.size(); ++s)
    for (double x : p[s])
      if (x > 0) h -= pi[s] * x * std::log(x);
  return std::max(0.0, h);
}

IntegralReport integrate_table(const SeqTable& t, const MarkovMeasure& m, std::size_t depth, double tol) {
  if (m.space().alphabet() != t.alphabet()) throw SpecError("measure alphabet does not match the table alphabet");
  if (depth == 0 || depth > t.depth_max()) throw SpecError("integration depth outside the table");
  IntegralReport rep;
  std::vector<double> a(depth);
  parallel_for(depth, [&](std::size_t i) {
    const std::size_t n = i + 1;
    double mass = 0, acc = 0;
    for (std::size_t idx = 0; idx < t.size(n); ++idx) {
      const double w = m.cylinder(t.word(n, idx));
      mass += w;
      acc += w * t.log_value(n, idx);
    }
    if (std::abs(mass - 1.0) > 1e-9)
      throw SpecError("measure charges words outside the table at depth " + std::to_string(n));
    a[i] = acc;
  });
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= depth; ++n) {
    rep.values.push_back(a[n - 1] / static_cast<double>(n));
    inf = std::min(inf, rep.values.back());
    rep.running_inf.push_back(inf);
  }
  for (std::size_t total = 2; total <= depth; ++total)
    for (std::size_t n = 1; n < total; ++n) {
      const std::size_t mm = total - n;
      const double excess = a[total - 1] - a[n - 1] - a[mm - 1];
      const double scale = std::max({1.0, std::abs(a[total - 1]), std::abs(a[n - 1]) + std::abs(a[mm - 1])});
      if (excess > tol * scale && excess > rep.witness_excess) {
        rep.subadditive = false;
        rep.witness_n = n;
        rep.witness_m = mm;
        rep.witness_excess = excess;
      }
    }
  return rep;
}

namespace {

template <class Mass, class ExactMass>
MassTable build_masses(const SeqTable& t, bool exact, Mass mass, ExactMass exact_mass) {
  MassTable out;
  out.mass.resize(t.depth_max());
  if (exact) out.exact.emplace(t.depth_max());
  for (std::size_t n = 1; n <= t.depth_max(); ++n) {
    const std::size_t size = t.size(n);
    out.mass[n - 1].resize(size);
    if (exact) (*out.exact)[n - 1].resize(size);
    parallel_for(size, [&](std::size_t idx) {
      const Word w = t.word(n, idx);
      if (exact) {
        (*out.exact)[n - 1][idx] = exact_mass(w);
        out.mass[n - 1][idx] = to_double((*out.exact)[n - 1][idx]);
      } else {
        out.mass[n - 1][idx] = mass(w);
      }
    });
  }
  return out;
}

}  // namespace

MassTable cylinder_masses(const MarkovMeasure& mu, const SeqTable& t) {
  if (mu.space().alphabet() != t.alphabet()) throw SpecError("measure alphabet does not match the table alphabet");
  return build_masses(
      t, mu.exact(), [&](const Word& w) { return mu.cylinder(w); },
      [&](const Word& w) { return mu.cylinder_exact(w); });
}

MassTable pushforward_masses(const MarkovMeasure& mu, const OneBlockFactor& pi, const SeqTable& t) {
  if (pi.target_alphabet() != t.alphabet()) throw SpecError("factor target alphabet does not match the table");
  return build_masses(
      t, mu.exact(), [&](const Word& w) { return pushforward_cylinder(mu, pi, w); },
      [&](const Word& w) { return pushforward_cylinder_exact(mu, pi, w); });
}

std::string to_string(GibbsClass c) {
  switch (c) {
    case GibbsClass::Gibbs: return "GIBBS";
    case GibbsClass::WeakGibbs: return "WEAK_GIBBS";
    case GibbsClass::Neither: return "NEITHER";
  }
  return "UNKNOWN";
}

namespace {

Rational rational_pow(const Rational& base, std::size_t e) {
  Rational r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

WeakGibbsReport weak_gibbs_constants(const MassTable& masses, const SeqTable& t, double pressure,
                                     std::string pressure_source, std::optional<Rational> exact_lambda,
                                     double slope_threshold) {
  const std::size_t depth = std::min(masses.depth_max(), t.depth_max());
  if (depth == 0) throw SpecError("weak-Gibbs constants need depth >= 1");
  WeakGibbsReport rep;
  rep.pressure = pressure;
  rep.pressure_source = std::move(pressure_source);
  rep.log_c.resize(depth);
  rep.witness.resize(depth);
  const bool exact = exact_lambda && masses.exact && t.exact();
  if (exact) rep.exact_c.emplace(depth);
  bool exact_ok = exact;
  std::vector<char> exact_missing(depth, 0);
  parallel_for(depth, [&](std::size_t i) {
    const std::size_t n = i + 1;
    double best = -1;
    std::size_t best_idx = 0;
    for (std::size_t idx = 0; idx < t.size(n); ++idx) {
      const double m = masses.mass[i][idx];
      const double dev = m > 0 ? std::abs(std::log(m) + static_cast<double>(n) * pressure - t.log_value(n, idx))
                               : std::numeric_limits<double>::infinity();
      if (dev > best) {
        best = dev;
        best_idx = idx;
      }
    }
    rep.log_c[i] = best;
    rep.witness[i] = t.word(n, best_idx);
    if (exact) {
      const Rational scale = rational_pow(*exact_lambda, n);
      Rational c = 0;
      for (std::size_t idx = 0; idx < t.size(n); ++idx) {
        const Rational& m = (*masses.exact)[i][idx];
        if (m == 0) {
          exact_missing[i] = 1;
          break;
        }
        Rational rho = m * scale / Rational(t.count(n, idx));
        if (rho < 1) rho = 1 / rho;
        c = std::max(c, rho);
      }
      (*rep.exact_c)[i] = c;
    }
  });
  for (char miss : exact_missing) exact_ok = exact_ok && !miss;
  if (!exact_ok) rep.exact_c.reset();

  bool unbounded = false;
  std::vector<double> xs, ys;
  for (std::size_t n = 1; n <= depth; ++n) {
    if (!std::isfinite(rep.log_c[n - 1])) unbounded = true;
    xs.push_back(static_cast<double>(n));
    ys.push_back(rep.log_c[n - 1]);
  }
  if (unbounded) {
    rep.classification = GibbsClass::Neither;
    return rep;
  }
  rep.fit = linear_fit(xs, ys);
  const std::size_t half = std::max<std::size_t>(depth / 2, 1);
  bool flat;
  if (rep.exact_c) flat = (*rep.exact_c)[depth - 1] <= (*rep.exact_c)[half - 1];
  else flat = rep.log_c[depth - 1] - rep.log_c[half - 1] <= 1e-9;
  if (growth_detected(rep.fit, slope_threshold)) rep.classification = GibbsClass::Neither;
  else if (flat) rep.classification = GibbsClass::Gibbs;
  else rep.classification = GibbsClass::WeakGibbs;
  return rep;
}

SandwichReport check_sandwich(const MassTable& image_masses, const SeqTable& g, double pressure,
                              const WeakGibbsReport& source, double tol) {
  const std::size_t depth = std::min({image_masses.depth_max(), g.depth_max(), source.log_c.size()});
  SandwichReport rep;
  for (std::size_t n = 1; n <= depth; ++n) {
    auto log_m = g.log_variation(n);
    if (!log_m) throw SpecError("table carries no variation constants");
    const double bound = source.log_c[n - 1] + *log_m;
    for (std::size_t idx = 0; idx < g.size(n); ++idx) {
      ++rep.words_checked;
      const double m = image_masses.mass[n - 1][idx];
      const double dev = m > 0 ? std::abs(std::log(m) + static_cast<double>(n) * pressure - g.log_value(n, idx))
                               : std::numeric_limits<double>::infinity();
      const double margin = bound - dev;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.witness = g.word(n, idx);
        rep.witness_depth = n;
      }
      if (!(margin >= -tol)) rep.holds = false;
    }
  }
  return rep;
}

SandwichReport check_sandwich_exact(const MassTable& image_masses, const SeqTable& g, const Rational& lambda,
                                    const WeakGibbsReport& source) {
  if (!image_masses.exact || !g.exact() || !source.exact_c)
    throw SpecError("exact sandwich needs exact masses, counts and constants");
  const std::size_t depth = std::min({image_masses.depth_max(), g.depth_max(), source.exact_c->size()});
  SandwichReport rep;
  rep.exact = true;
  for (std::size_t n = 1; n <= depth; ++n) {
    auto log_m = g.log_variation(n);
    if (!log_m || *log_m != 0.0) throw SpecError("exact sandwich needs M_n = 1");
    const Rational& c = (*source.exact_c)[n - 1];
    const Rational scale = rational_pow(lambda, n);
    for (std::size_t idx = 0; idx < g.size(n); ++idx) {
      ++rep.words_checked;
      const Rational ratio = (*image_masses.exact)[n - 1][idx] * scale / Rational(g.count(n, idx));
      const bool ok = ratio > 0 && ratio <= c && 1 / ratio <= c;
      const double dev = ratio > 0 ? std::abs(std::log(to_double(ratio))) : std::numeric_limits<double>::infinity();
      const double margin = std::log(to_double(c)) - dev;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.witness = g.word(n, idx);
        rep.witness_depth = n;
      }
      if (!ok) rep.holds = false;
    }
  }
  return rep;
}

}  // namespace thermo
