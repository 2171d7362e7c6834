#include "oracles.hpp"

#include "thermo/gibbs.hpp"
#include "thermo/sequence_checks.hpp"

#include <doctest.h>

using namespace thermo;

namespace {

// Perron root of the r-block transfer matrix W[u][v] = e^{f(u)} when v
// extends u by one symbol.
double oracle_pressure(const Sft& x, const std::map<Word, double>& f, std::size_t r) {
  auto states = oracle::brute_blocks(x, r);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(states.size(), states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = 0; j < states.size(); ++j)
      if (std::equal(states[i].begin() + 1, states[i].end(), states[j].begin()) &&
          x.allowed(states[i].back(), states[j].back()))
        w(i, j) = std::exp(f.at(states[i]));
  return std::log(oracle::perron_root(w));
}

// ∫ f dμ for an r-block potential, from cylinder masses.
double oracle_integral(const MarkovMeasure& mu, const std::map<Word, double>& f) {
  double s = 0;
  for (const auto& [w, v] : f) s += mu.cylinder(w) * v;
  return s;
}

std::map<Word, double> random_values(std::mt19937_64& rng, const Sft& x, std::size_t r) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::map<Word, double> v;
  for (const auto& w : x.blocks(r)) v[w] = dist(rng);
  return v;
}

}  // namespace

TEST_SUITE("gibbs") {
  TEST_CASE("transfer pressure matches a dense eigen-solver") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 8; ++trial) {
      auto x = oracle::random_irreducible_sft(rng, 2 + trial % 3);
      const std::size_t r = 1 + trial % 3;
      auto vals = random_values(rng, *x, r);
      LocallyConstantPotential f(x, r, vals);
      auto g = transfer_pressure(x, f);
      CHECK(g.pressure == doctest::Approx(oracle_pressure(*x, vals, r)).epsilon(1e-10));
      CHECK(g.eigen_residual < 1e-10);
      // Equilibrium: h(μ) + ∫ f dμ = P for the Gibbs measure.
      CHECK(entropy(*g.measure) + oracle_integral(*g.measure, vals) == doctest::Approx(g.pressure).epsilon(1e-9));
      // Variational inequality against other Markov measures.
      // Point mass on the fixed point 0^∞ (other rows follow the cycle edge).
      if (x->allowed(0, 0)) {
        const std::size_t k = x->size();
        std::vector<std::vector<double>> p(k, std::vector<double>(k, 0.0));
        std::vector<double> pi(k, 0.0);
        pi[0] = 1;
        p[0][0] = 1;
        for (std::size_t i = 1; i < k; ++i) p[i][(i + 1) % k] = 1;
        std::vector<Word> states;
        for (Symbol s = 0; s < k; ++s) states.push_back(Word{s});
        MarkovMeasure delta(x, 1, states, p, pi);
        CHECK(entropy(delta) + oracle_integral(delta, vals) <= g.pressure + 1e-12);
      }
    }
  }

  TEST_CASE("zero potential on the full shift gives the exact uniform measure") {
    auto x = oracle::load_sft("full2.json");
    auto g = transfer_pressure(x, LocallyConstantPotential::zero(x));
    REQUIRE(g.exact_lambda);
    CHECK(*g.exact_lambda == Rational(2));
    REQUIRE(g.measure->exact());
    CHECK(g.measure->cylinder_exact(Word{0, 1, 1}) == Rational(1, 8));
    CHECK(entropy(*g.measure) == doctest::Approx(std::log(2.0)));
  }

  TEST_CASE("Parry measure of the golden mean shift") {
    auto x = oracle::load_sft("golden_mean.json");
    auto g = transfer_pressure(x, LocallyConstantPotential::zero(x));
    const double phi = (1 + std::sqrt(5.0)) / 2;
    CHECK(g.lambda == doctest::Approx(phi).epsilon(1e-13));
    CHECK_FALSE(g.exact_lambda);
    CHECK(entropy(*g.measure) == doctest::Approx(std::log(phi)).epsilon(1e-12));
    CHECK(g.measure->cylinder(Word{1, 1}) == 0.0);
    CHECK(g.measure->cylinder(Word{0}) == doctest::Approx(phi * phi / (1 + phi * phi)).epsilon(1e-12));
  }

  TEST_CASE("adding a constant shifts the pressure") {
    auto x = oracle::load_sft("full2.json");
    std::map<Word, double> v{{{0, 0}, 0.3}, {{0, 1}, -0.2}, {{1, 0}, 0.1}, {{1, 1}, -0.5}}, w = v;
    for (auto& [k, val] : w) val += 0.75;
    auto p = transfer_pressure(x, LocallyConstantPotential(x, 2, v)).pressure;
    auto q = transfer_pressure(x, LocallyConstantPotential(x, 2, w)).pressure;
    CHECK(q - p == doctest::Approx(0.75).epsilon(1e-12));
  }

  TEST_CASE("integrals of additive tables are constant in n") {
    auto x = oracle::load_sft("full2.json");
    std::map<Word, double> v{{{0}, 0.4}, {{1}, -1.0}};
    LocallyConstantPotential f(x, 1, v);
    auto t = build_potential_table(f, 8);
    auto mu = MarkovMeasure::bernoulli(x, {Rational(1, 4), Rational(3, 4)});
    auto rep = integrate_table(t, mu, 8);
    for (double a : rep.values) CHECK(a == doctest::Approx(0.25 * 0.4 - 0.75).epsilon(1e-12));
    CHECK(rep.subadditive);
    CHECK(rep.kingman_upper() == doctest::Approx(-0.65));

    // For r = 2, ∫ sup S_n f / n decreases towards ∫ f dμ.
    std::map<Word, double> v2{{{0, 0}, 0.3}, {{0, 1}, -0.2}, {{1, 0}, 0.1}, {{1, 1}, -0.5}};
    auto t2 = build_potential_table(LocallyConstantPotential(x, 2, v2), 10);
    auto r2 = integrate_table(t2, mu, 10);
    CHECK(r2.subadditive);
    const double limit = oracle_integral(mu, v2);
    for (double a : r2.values) CHECK(a >= limit - 1e-12);
    CHECK(r2.values.back() - limit < 0.1);
  }

  TEST_CASE("integrating against a measure on another alphabet is rejected") {
    auto x = oracle::load_sft("full2.json");
    auto pi = oracle::load_factor("collapse3.json");
    auto t = build_g_table(pi, LocallyConstantPotential::zero(pi.domain_ptr()), 4);
    auto mu = MarkovMeasure::bernoulli(pi.domain_ptr(), {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    CHECK_THROWS_AS(integrate_table(t, mu, 4), SpecError);
  }

  TEST_CASE("uniform pushforward under the collapse map is exactly Gibbs") {
    auto pi = oracle::load_factor("collapse3.json");
    auto mu = markov_from_json(read_json_file(oracle::fixture("bernoulli3.json")), pi.domain_ptr());
    auto g = build_g_table(pi, LocallyConstantPotential::zero(pi.domain_ptr()), 8);
    auto masses = pushforward_masses(mu, pi, g);
    REQUIRE(masses.exact);
    for (std::size_t n = 1; n <= 8; ++n)
      for (std::size_t i = 0; i < g.size(n); ++i) {
        // πμ[y] = 2^{#a} / 3^n from the fiber count.
        auto y = g.word(n, i);
        CHECK((*masses.exact)[n - 1][i] ==
              Rational(BigInt(oracle::brute_fiber(pi, y).size()), pow(BigInt(3), unsigned(n))));
      }
    auto rep = weak_gibbs_constants(masses, g, std::log(3.0), "transfer", Rational(3));
    REQUIRE(rep.exact_c);
    for (const auto& c : *rep.exact_c) CHECK(c == Rational(1));
    CHECK(rep.classification == GibbsClass::Gibbs);
    CHECK(rep.status == Verdict::Evidence);

    auto x = pi.domain_ptr();
    auto dom = build_g_table(OneBlockFactor::identity(x), LocallyConstantPotential::zero(x), 8);
    auto src = weak_gibbs_constants(cylinder_masses(mu, dom), dom, std::log(3.0), "transfer", Rational(3));
    auto sw = check_sandwich_exact(masses, g, Rational(3), src);
    CHECK(sw.exact);
    CHECK(sw.holds);
    CHECK(sw.words_checked == 2 + 4 + 8 + 16 + 32 + 64 + 128 + 256);
    auto swf = check_sandwich(masses, g, std::log(3.0), src);
    CHECK(swf.holds);
    CHECK(swf.worst_margin == doctest::Approx(0.0).epsilon(1e-9));
  }

  TEST_CASE("Gibbs measures of range-two potentials are classified Gibbs") {
    auto x = oracle::load_sft("full2.json");
    std::map<Word, double> v{{{0, 0}, 0.3}, {{0, 1}, -0.2}, {{1, 0}, 0.1}, {{1, 1}, -0.5}};
    LocallyConstantPotential f(x, 2, v);
    auto gd = transfer_pressure(x, f);
    auto t = build_potential_table(f, 10);
    auto rep = weak_gibbs_constants(cylinder_masses(*gd.measure, t), t, gd.pressure, "transfer");
    CHECK(rep.classification == GibbsClass::Gibbs);
    // C_n ≤ e^{2 (max f − min f)} from the two boundary windows.
    for (double c : rep.log_c) CHECK(c <= 2 * 0.8 + 1e-9);
  }

  TEST_CASE("polynomial and exponential ratios") {
    auto x = oracle::load_sft("full2.json");
    auto mu = MarkovMeasure::bernoulli(x, {Rational(1, 2), Rational(1, 2)});
    auto make = [&](auto logf) {
      std::vector<std::map<Word, double>> levels(10);
      for (std::size_t n = 1; n <= 10; ++n)
        for (const auto& w : oracle::all_words(2, n)) levels[n - 1][w] = logf(double(n));
      return SeqTable::from_values(SeqKind::Imported, x->alphabet(), levels);
    };
    // f_n = n: μ[u] e^{nP} / f_n = 1/n, so C_n = n.
    auto poly = make([](double n) { return std::log(n); });
    auto rp = weak_gibbs_constants(cylinder_masses(mu, poly), poly, std::log(2.0), "given");
    for (std::size_t n = 1; n <= 10; ++n) CHECK(rp.log_c[n - 1] == doctest::Approx(std::log(double(n))));
    CHECK(rp.classification == GibbsClass::WeakGibbs);
    // f_n = e^n: C_n = e^n grows linearly in log.
    auto expo = make([](double n) { return n; });
    auto re = weak_gibbs_constants(cylinder_masses(mu, expo), expo, std::log(2.0), "given");
    CHECK(re.classification == GibbsClass::Neither);

    auto delta = MarkovMeasure::bernoulli(x, {Rational(1), Rational(0)});
    auto zero_t = make([](double) { return 0.0; });
    auto rz = weak_gibbs_constants(cylinder_masses(delta, zero_t), zero_t, std::log(2.0), "given");
    CHECK(std::isinf(rz.log_c[0]));
    CHECK(rz.classification == GibbsClass::Neither);
  }
}
