#include "thermo/sft.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace thermo {

Sft::Sft(std::vector<std::string> alphabet, std::vector<std::vector<int>> transitions)
    : alphabet_(std::move(alphabet)), transitions_(std::move(transitions)) {
  const std::size_t n = alphabet_.size();
  if (n == 0) throw SpecError("SFT alphabet is empty");
  if (n > 64) throw CapError("SFT alphabets are limited to 64 symbols");
  std::set<std::string> seen(alphabet_.begin(), alphabet_.end());
  if (seen.size() != n) throw SpecError("SFT alphabet has duplicate symbols");
  for (const auto& name : alphabet_)
    if (name.empty() || name.find('.') != std::string::npos)
      throw SpecError("symbol names must be non-empty and contain no '.'");
  if (transitions_.size() != n) throw SpecError("transition matrix must be square over the alphabet");
  for (const auto& row : transitions_) {
    if (row.size() != n) throw SpecError("transition matrix must be square over the alphabet");
    for (int e : row)
      if (e != 0 && e != 1) throw SpecError("transition matrix entries must be 0 or 1");
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool out = false, in = false;
    for (std::size_t j = 0; j < n; ++j) {
      out = out || transitions_[i][j];
      in = in || transitions_[j][i];
    }
    if (!out || !in) throw SpecError("symbol '" + alphabet_[i] + "' is stranded");
  }
}

Sft Sft::full_shift(const std::vector<std::string>& alphabet) {
  return Sft(alphabet, std::vector<std::vector<int>>(alphabet.size(), std::vector<int>(alphabet.size(), 1)));
}

bool Sft::contains(std::span<const Symbol> w) const {
  for (Symbol s : w)
    if (s >= size()) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!allowed(w[i - 1], w[i])) return false;
  return true;
}

std::vector<Word> Sft::blocks(std::size_t n) const {
  std::vector<Word> out;
  if (n == 0) return {Word{}};
  Word cur;
  cur.reserve(n);
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t s = 0; s < size(); ++s) {
      if (!cur.empty() && !allowed(cur.back(), static_cast<Symbol>(s))) continue;
      cur.push_back(static_cast<Symbol>(s));
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

std::vector<std::vector<std::size_t>> Sft::distances() const {
  const std::size_t n = size();
  std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, 0));
  for (std::size_t src = 0; src < n; ++src) {
    std::deque<std::size_t> queue;
    std::vector<std::size_t> d(n, 0);
    for (std::size_t j = 0; j < n; ++j)
      if (transitions_[src][j] && d[j] == 0) {
        d[j] = 1;
        queue.push_back(j);
      }
    while (!queue.empty()) {
      std::size_t a = queue.front();
      queue.pop_front();
      for (std::size_t b = 0; b < n; ++b)
        if (transitions_[a][b] && d[b] == 0) {
          d[b] = d[a] + 1;
          queue.push_back(b);
        }
    }
    dist[src] = d;
  }
  return dist;
}

bool Sft::is_irreducible() const {
  for (const auto& row : distances())
    for (std::size_t d : row)
      if (d == 0) return false;
  return true;
}

std::optional<std::size_t> Sft::weak_spec_number() const {
  std::size_t p = 0;
  for (const auto& row : distances())
    for (std::size_t d : row) {
      if (d == 0) return std::nullopt;
      p = std::max(p, d - 1);
    }
  return p;
}

std::optional<Word> Sft::bridge(std::span<const Symbol> u, std::span<const Symbol> v, std::size_t max_gap) const {
  if (!contains(u) || !contains(v)) throw SpecError("bridge endpoints must be allowable words");
  if (u.empty() || v.empty()) return Word{};
  const Symbol from = u.back();
  const Symbol to = v.front();
  const std::size_t n = size();
  // reach[k][a] : a word of exactly k further edges leads from a to `to`.
  std::vector<std::vector<char>> reach(max_gap + 2, std::vector<char>(n, 0));
  reach[0][to] = 1;
  for (std::size_t k = 1; k <= max_gap + 1; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n && !reach[k][a]; ++b)
        if (transitions_[a][b] && reach[k - 1][b]) reach[k][a] = 1;
  for (std::size_t len = 0; len <= max_gap; ++len) {
    if (!reach[len + 1][from]) continue;
    Word w;
    Symbol prev = from;
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t s = 0; s < n; ++s) {
        if (transitions_[prev][s] && reach[len - i][s]) {
          w.push_back(static_cast<Symbol>(s));
          prev = static_cast<Symbol>(s);
          break;
        }
      }
    }
    return w;
  }
  return std::nullopt;
}

bool is_canonical_primitive(std::span<const Symbol> block) {
  const std::size_t q = block.size();
  if (q == 0) return false;
  for (std::size_t shift = 1; shift < q; ++shift) {
    bool equal = true;
    for (std::size_t i = 0; i < q; ++i) {
      Symbol a = block[i], b = block[(i + shift) % q];
      if (b < a) return false;  // a smaller rotation exists
      if (b > a) {
        equal = false;
        break;
      }
    }
    if (equal) return false;  // rotation-invariant: a proper power
  }
  return true;
}

std::vector<PeriodicPoint> Sft::periodic_points(std::size_t max_period) const {
  if (max_period == 0) throw SpecError("max_period must be >= 1");
  std::vector<PeriodicPoint> out;
  for (std::size_t q = 1; q <= max_period; ++q)
    for (Word& w : blocks(q))
      if (allowed(w.back(), w.front()) && is_canonical_primitive(w)) out.push_back({std::move(w)});
  return out;
}

std::vector<std::vector<BigInt>> Sft::matrix_power(std::size_t k) const {
  const std::size_t n = size();
  std::vector<std::vector<BigInt>> result(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = 1;
  std::vector<std::vector<BigInt>> base(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) base[i][j] = transitions_[i][j];
  auto mul = [n](const auto& a, const auto& b) {
    std::vector<std::vector<BigInt>> c(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (a[i][l] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
      }
    return c;
  };
  while (k) {
    if (k & 1) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

BigInt Sft::block_count(std::size_t n) const {
  if (n == 0) return 1;
  BigInt total = 0;
  for (const auto& row : matrix_power(n - 1))
    for (const auto& e : row) total += e;
  return total;
}

BigInt Sft::fixed_point_count(std::size_t q) const {
  auto p = matrix_power(q);
  BigInt tr = 0;
  for (std::size_t i = 0; i < size(); ++i) tr += p[i][i];
  return tr;
}

}  // namespace thermo
