#pragma once

// Brute-force reference computations used by the tests. They share no code
// paths with the library beyond the basic data types.

#include "thermo/factor.hpp"
#include "thermo/io.hpp"
#include "thermo/potential.hpp"
#include "thermo/sft.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using thermo::Symbol;
using thermo::Word;

inline std::string fixture(const std::string& name) { return std::string(THERMO_FIXTURES) + "/" + name; }

inline std::shared_ptr<const thermo::Sft> load_sft(const std::string& name) {
  return thermo::sft_from_json(thermo::read_json_file(fixture(name)));
}

inline thermo::OneBlockFactor load_factor(const std::string& name) {
  return thermo::factor_from_json(thermo::read_json_file(fixture(name)));
}

/// All words of length n over k symbols, lexicographic.
inline std::vector<Word> all_words(std::size_t k, std::size_t n) {
  std::vector<Word> out;
  Word w(n, 0);
  if (n == 0) return {Word{}};
  for (;;) {
    out.push_back(w);
    std::size_t i = n;
    while (i > 0 && w[i - 1] + 1 == k) w[--i] = 0;
    if (i == 0) break;
    ++w[i - 1];
  }
  return out;
}

inline bool adjacency_ok(const std::vector<std::vector<int>>& a, const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!a[w[i]][w[i + 1]]) return false;
  return true;
}

inline std::vector<Word> brute_blocks(const thermo::Sft& x, std::size_t n) {
  std::vector<Word> out;
  for (const auto& w : all_words(x.size(), n))
    if (adjacency_ok(x.transitions(), w)) out.push_back(w);
  return out;
}

/// u ∈ B_n(X) with π(u) = y by filtering every X-word.
inline std::vector<Word> brute_fiber(const thermo::OneBlockFactor& pi, const Word& y) {
  std::vector<Word> out;
  for (const auto& u : brute_blocks(pi.domain(), y.size())) {
    bool match = true;
    for (std::size_t i = 0; i < y.size() && match; ++i) match = pi.symbol_map()[u[i]] == y[i];
    if (match) out.push_back(u);
  }
  return out;
}

/// sup of S_n f over [u] by enumerating right extensions of length r-1.
inline double brute_birkhoff_sup(const thermo::Sft& x, const std::map<Word, double>& f, std::size_t r, const Word& u) {
  double best = -INFINITY;
  for (const auto& e : all_words(x.size(), r - 1)) {
    Word full = u;
    full.insert(full.end(), e.begin(), e.end());
    if (!adjacency_ok(x.transitions(), full)) continue;
    double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += f.at(Word(full.begin() + i, full.begin() + i + r));
    best = std::max(best, s);
  }
  return best;
}

/// Dense Perron root of a nonnegative matrix.
inline double perron_root(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  double best = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) best = std::max(best, std::abs(es.eigenvalues()[i]));
  return best;
}

inline Eigen::MatrixXd adjacency(const thermo::Sft& x) {
  Eigen::MatrixXd m(x.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) m(i, j) = x.transitions()[i][j];
  return m;
}

/// Random irreducible one-step SFT on k symbols: a Hamiltonian cycle plus
/// random extra edges.
inline std::shared_ptr<const thermo::Sft> random_irreducible_sft(std::mt19937_64& rng, std::size_t k) {
  std::vector<std::vector<int>> a(k, std::vector<int>(k, 0));
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < k; ++i) {
    a[i][(i + 1) % k] = 1;
    for (std::size_t j = 0; j < k; ++j)
      if (coin(rng)) a[i][j] = 1;
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back(std::string(1, static_cast<char>('1' + i)));
  return std::make_shared<const thermo::Sft>(names, a);
}

}  // namespace oracle
