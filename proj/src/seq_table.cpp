#include "thermo/seq_table.hpp"

#include "thermo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace thermo {

std::string to_string(SeqKind kind) {
  switch (kind) {
    case SeqKind::FiberSum: return "fiber-sum";
    case SeqKind::Potential: return "potential";
    case SeqKind::Imported: return "imported";
  }
  return "unknown";
}

std::string to_string(NumericMode mode) {
  switch (mode) {
    case NumericMode::Auto: return "auto";
    case NumericMode::Exact: return "exact";
    case NumericMode::Float: return "float";
  }
  return "unknown";
}

NumericMode parse_numeric_mode(const std::string& text) {
  if (text == "auto") return NumericMode::Auto;
  if (text == "exact") return NumericMode::Exact;
  if (text == "float") return NumericMode::Float;
  throw SpecError("numeric mode must be exact, float or auto");
}

SeqTable::SeqTable(SeqKind kind, std::vector<std::string> alphabet, std::vector<Level> levels,
                   std::vector<double> log_variation)
    : kind_(kind), alphabet_(std::move(alphabet)), levels_(std::move(levels)), log_variation_(std::move(log_variation)) {
  if (alphabet_.empty()) throw SpecError("table alphabet is empty");
  if (levels_.empty()) throw SpecError("table has no levels");
  exact_ = true;
  for (std::size_t n = 1; n <= levels_.size(); ++n) {
    const Level& lv = levels_[n - 1];
    if (lv.codes.empty()) throw SpecError("table level " + std::to_string(n) + " is empty");
    if (lv.log_values.size() != lv.codes.size()) throw SpecError("table level size mismatch");
    if (!std::is_sorted(lv.codes.begin(), lv.codes.end()) ||
        std::adjacent_find(lv.codes.begin(), lv.codes.end()) != lv.codes.end())
      throw SpecError("table level codes must be strictly increasing");
    for (double v : lv.log_values)
      if (!std::isfinite(v)) throw SpecError("table values must be finite");
    if (lv.counts.empty()) exact_ = false;
    else if (lv.counts.size() != lv.codes.size()) throw SpecError("table count size mismatch");
  }
}

SeqTable SeqTable::from_values(SeqKind kind, std::vector<std::string> alphabet,
                               const std::vector<std::map<Word, double>>& levels) {
  std::vector<Level> out;
  for (std::size_t n = 1; n <= levels.size(); ++n) {
    Level lv;
    for (const auto& [w, v] : levels[n - 1]) {
      if (w.size() != n) throw SpecError("table word has the wrong length for its level");
      for (Symbol s : w)
        if (s >= alphabet.size()) throw SpecError("table word has an unknown symbol");
      lv.codes.push_back(encode(w, alphabet.size()));
      lv.log_values.push_back(v);
    }
    out.push_back(std::move(lv));
  }
  return SeqTable(kind, std::move(alphabet), std::move(out));
}

const SeqTable::Level& SeqTable::level(std::size_t n) const {
  if (n == 0 || n > levels_.size())
    throw SpecError("table depth " + std::to_string(n) + " outside 1.." + std::to_string(levels_.size()));
  return levels_[n - 1];
}

std::optional<std::size_t> SeqTable::find(std::size_t n, std::uint64_t code) const {
  const auto& codes = level(n).codes;
  auto it = std::lower_bound(codes.begin(), codes.end(), code);
  if (it == codes.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes.begin());
}

std::optional<std::size_t> SeqTable::find(std::span<const Symbol> word) const {
  for (Symbol s : word)
    if (s >= alphabet_size()) return std::nullopt;
  return find(word.size(), encode(word, alphabet_size()));
}

double SeqTable::log_value(std::span<const Symbol> w) const {
  auto idx = find(w);
  if (!idx) throw SpecError("word '" + format_word(w, alphabet_) + "' is not in the table language");
  return log_value(w.size(), *idx);
}

const BigInt& SeqTable::count(std::size_t n, std::size_t idx) const {
  if (!exact_) throw SpecError("table has no exact counts");
  return level(n).counts[idx];
}

LogLinear SeqTable::exact_log(std::size_t n, std::size_t idx) const { return LogLinear::log_of(count(n, idx)); }

LogLinear SeqTable::exact_log(std::span<const Symbol> w) const {
  auto idx = find(w);
  if (!idx) throw SpecError("word '" + format_word(w, alphabet_) + "' is not in the table language");
  return exact_log(w.size(), *idx);
}

std::optional<double> SeqTable::log_variation(std::size_t n) const {
  if (n == 0 || n > log_variation_.size()) return std::nullopt;
  return log_variation_[n - 1];
}

bool TableLanguage::contains(std::span<const Symbol> w) const {
  if (w.empty()) return true;
  const std::size_t d = table_->depth_max();
  if (w.size() <= d) return table_->find(w).has_value();
  for (std::size_t i = 0; i + d <= w.size(); ++i)
    if (!table_->find(w.subspan(i, d))) return false;
  return true;
}

std::vector<Word> TableLanguage::blocks(std::size_t n) const {
  if (n == 0 || n > table_->depth_max()) return Language::blocks(n);
  std::vector<Word> out;
  for (std::size_t i = 0; i < table_->size(n); ++i) out.push_back(table_->word(n, i));
  return out;
}

namespace {

struct Transition {
  std::size_t to;
  double weight;
};

// Forward-pass machinery shared by the float and counting builds.
struct GBuilder {
  const OneBlockFactor& pi;
  const LocallyConstantPotential& f;
  std::size_t depth_max;
  bool exact;

  std::size_t r = 1, k = 1, ly = 1;
  std::vector<Word> states;
  std::vector<double> init, tail;
  std::vector<Word> state_image;
  // trans[s][c] : transitions from state s reading an X symbol mapped to c.
  std::vector<std::vector<std::vector<Transition>>> trans;
  std::atomic<std::size_t> stored{0};

  GBuilder(const OneBlockFactor& p, const LocallyConstantPotential& pot, std::size_t n, bool ex)
      : pi(p), f(pot), depth_max(n), exact(ex) {
    const Sft& x = pi.domain();
    r = f.range();
    k = std::max<std::size_t>(r - 1, 1);
    ly = pi.target_alphabet().size();
    states = x.blocks(k);
    std::vector<long> slot(code_space(x.size(), k), -1);
    for (std::size_t i = 0; i < states.size(); ++i) slot[encode(states[i], x.size())] = static_cast<long>(i);
    trans.assign(states.size(), std::vector<std::vector<Transition>>(ly));
    for (std::size_t i = 0; i < states.size(); ++i) {
      const Word& s = states[i];
      state_image.push_back(pi.map(s));
      init.push_back(r == 1 ? f.value(s) : 0.0);
      tail.push_back(r == 1 ? 0.0 : birkhoff_sup(f, s));
      for (std::size_t c = 0; c < x.size(); ++c) {
        if (!x.allowed(s.back(), static_cast<Symbol>(c))) continue;
        Word cat = s;
        cat.push_back(static_cast<Symbol>(c));
        Word next(cat.begin() + 1, cat.end());
        double w = r == 1 ? f.value(std::span<const Symbol>(&cat.back(), 1)) : f.value(cat);
        trans[i][pi.map(static_cast<Symbol>(c))].push_back({static_cast<std::size_t>(slot[encode(next, x.size())]), w});
      }
    }
  }

  void note_stored() {
    if (++stored > kMaxTableWords) throw CapError("table exceeds the stored-word cap; lower --depth");
  }

  // Depths below k (only when r >= 3): sum over fibers directly.
  void small_depth(std::size_t n, SeqTable::Level& lv) {
    for (const Word& y : pi.image_blocks(n)) {
      double acc = kNegInf;
      BigInt cnt = 0;
      for (const Word& u : pi.fiber_words(y)) {
        acc = log_add(acc, birkhoff_sup(f, u));
        ++cnt;
      }
      lv.codes.push_back(encode(y, ly));
      if (exact) {
        lv.log_values.push_back(log_of(cnt));
        lv.counts.push_back(cnt);
      } else {
        lv.log_values.push_back(acc);
      }
      note_stored();
    }
  }

  using Levels = std::vector<SeqTable::Level>;

  void dfs_float(Word& y, const std::vector<double>& v, Levels& out) {
    double g = kNegInf;
    for (std::size_t s = 0; s < v.size(); ++s)
      if (v[s] != kNegInf) g = log_add(g, v[s] + tail[s]);
    auto& lv = out[y.size() - 1];
    lv.codes.push_back(encode(y, ly));
    lv.log_values.push_back(g);
    note_stored();
    if (y.size() == depth_max) return;
    std::vector<double> next(v.size());
    for (std::size_t c = 0; c < ly; ++c) {
      std::fill(next.begin(), next.end(), kNegInf);
      bool any = false;
      for (std::size_t s = 0; s < v.size(); ++s) {
        if (v[s] == kNegInf) continue;
        for (const Transition& t : trans[s][c]) {
          next[t.to] = log_add(next[t.to], v[s] + t.weight);
          any = true;
        }
      }
      if (!any) continue;
      y.push_back(static_cast<Symbol>(c));
      dfs_float(y, next, out);
      y.pop_back();
    }
  }

  void dfs_exact(Word& y, const std::vector<BigInt>& v, Levels& out) {
    BigInt g = 0;
    for (const auto& x : v) g += x;
    auto& lv = out[y.size() - 1];
    lv.codes.push_back(encode(y, ly));
    lv.log_values.push_back(log_of(g));
    lv.counts.push_back(g);
    note_stored();
    if (y.size() == depth_max) return;
    std::vector<BigInt> next(v.size());
    for (std::size_t c = 0; c < ly; ++c) {
      std::fill(next.begin(), next.end(), BigInt(0));
      bool any = false;
      for (std::size_t s = 0; s < v.size(); ++s) {
        if (v[s] == 0) continue;
        for (const Transition& t : trans[s][c]) {
          next[t.to] += v[s];
          any = true;
        }
      }
      if (!any) continue;
      y.push_back(static_cast<Symbol>(c));
      dfs_exact(y, next, out);
      y.pop_back();
    }
  }

  std::vector<SeqTable::Level> run() {
    std::vector<SeqTable::Level> levels(depth_max);
    for (std::size_t n = 1; n < k && n <= depth_max; ++n) small_depth(n, levels[n - 1]);
    if (depth_max < k) return levels;
    // Roots: image words of length k, with their initial state vectors.
    std::map<Word, std::vector<std::size_t>> roots;
    for (std::size_t s = 0; s < states.size(); ++s) roots[state_image[s]].push_back(s);
    std::vector<std::pair<Word, std::vector<std::size_t>>> root_list(roots.begin(), roots.end());
    std::vector<Levels> partial(root_list.size(), Levels(depth_max));
    parallel_for(root_list.size(), [&](std::size_t i) {
      Word y = root_list[i].first;
      if (exact) {
        std::vector<BigInt> v(states.size(), 0);
        for (std::size_t s : root_list[i].second) v[s] = 1;
        dfs_exact(y, v, partial[i]);
      } else {
        std::vector<double> v(states.size(), kNegInf);
        for (std::size_t s : root_list[i].second) v[s] = init[s];
        dfs_float(y, v, partial[i]);
      }
    });
    for (auto& part : partial)
      for (std::size_t n = k; n <= depth_max; ++n) {
        auto& dst = levels[n - 1];
        auto& src = part[n - 1];
        dst.codes.insert(dst.codes.end(), src.codes.begin(), src.codes.end());
        dst.log_values.insert(dst.log_values.end(), src.log_values.begin(), src.log_values.end());
        dst.counts.insert(dst.counts.end(), std::make_move_iterator(src.counts.begin()),
                          std::make_move_iterator(src.counts.end()));
      }
    return levels;
  }
};

bool resolve_exact(const LocallyConstantPotential& f, NumericMode mode) {
  if (mode == NumericMode::Exact && !f.is_zero())
    throw SpecError("exact mode requires the zero potential (pure counting)");
  return mode != NumericMode::Float && f.is_zero();
}

}  // namespace

SeqTable build_g_table(const OneBlockFactor& pi, const LocallyConstantPotential& f, std::size_t depth_max,
                       NumericMode mode) {
  const auto* fx = dynamic_cast<const Sft*>(&f.space());
  if (!fx || !(*fx == pi.domain())) throw SpecError("potential does not live on the factor's domain SFT");
  if (depth_max == 0) throw SpecError("depth_max must be >= 1");
  const bool exact = resolve_exact(f, mode);
  GBuilder builder(pi, f, depth_max, exact);
  auto levels = builder.run();
  std::vector<double> variation;
  for (std::size_t n = 1; n <= depth_max; ++n) variation.push_back(log_variation_constant(f, n));
  return SeqTable(SeqKind::FiberSum, pi.target_alphabet(), std::move(levels), std::move(variation));
}

SeqTable build_potential_table(const LocallyConstantPotential& f, std::size_t depth_max, NumericMode mode) {
  auto sft = std::dynamic_pointer_cast<const Sft>(f.space_ptr());
  if (!sft) throw SpecError("potential table requires a potential on an SFT");
  SeqTable t = build_g_table(OneBlockFactor::identity(sft), f, depth_max, mode);
  std::vector<SeqTable::Level> levels;
  std::vector<double> variation;
  for (std::size_t n = 1; n <= t.depth_max(); ++n) {
    levels.push_back(t.level(n));
    variation.push_back(*t.log_variation(n));
  }
  return SeqTable(SeqKind::Potential, t.alphabet(), std::move(levels), std::move(variation));
}

}  // namespace thermo
