#include "oracles.hpp"

#include "thermo/markov.hpp"

#include <doctest.h>

#include <set>

using namespace thermo;

TEST_SUITE("factor") {
  TEST_CASE("image blocks are the deduplicated images of domain blocks") {
    auto collapse = oracle::load_factor("collapse3.json");
    auto golden = OneBlockFactor::identity(oracle::load_sft("golden_mean.json"));
    auto full2 = oracle::load_sft("full2.json");
    auto point = OneBlockFactor::from_names(full2, {{"a", "x"}, {"b", "x"}});
    CHECK(golden.image_blocks(2).size() == 3);
    CHECK(collapse.image_blocks(2).size() == 4);
    CHECK(point.image_blocks(5) == std::vector<Word>{Word(5, 0)});

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 8; ++trial) {
      auto x = oracle::random_irreducible_sft(rng, 4);
      auto pi = OneBlockFactor::from_names(x, {{"1", "a"}, {"2", "b"}, {"3", "a"}, {"4", trial % 2 ? "c" : "b"}});
      for (std::size_t n = 1; n <= 5; ++n) {
        std::set<Word> expect;
        for (const auto& u : oracle::brute_blocks(*x, n)) expect.insert(pi.map(u));
        CHECK(pi.image_blocks(n) == std::vector<Word>(expect.begin(), expect.end()));
        for (const auto& y : oracle::all_words(pi.target_alphabet().size(), n))
          CHECK(pi.image().contains(y) == expect.count(y) > 0);
      }
    }
  }

  TEST_CASE("fibers match brute force and partition the domain language") {
    auto collapse = oracle::load_factor("collapse3.json");
    CHECK(collapse.fiber_words(Word{0, 1}) == std::vector<Word>{Word{0, 2}, Word{1, 2}});
    CHECK(collapse.fiber_words(Word(6, 0)).size() == 64);
    auto golden = OneBlockFactor::identity(oracle::load_sft("golden_mean.json"));
    CHECK(golden.fiber_words(Word{0, 1, 0}) == std::vector<Word>{Word{0, 1, 0}});
    CHECK(golden.fiber_words(Word{1, 1}).empty());

    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 6; ++trial) {
      auto x = oracle::random_irreducible_sft(rng, 4);
      auto pi = OneBlockFactor::from_names(x, {{"1", "a"}, {"2", "b"}, {"3", "a"}, {"4", "b"}});
      for (std::size_t n = 1; n <= 5; ++n) {
        auto table = pi.fiber_table(n);
        std::size_t total = 0;
        for (const auto& [y, us] : table.fibers) {
          CHECK(us == oracle::brute_fiber(pi, y));
          total += us.size();
        }
        CHECK(total == oracle::brute_blocks(*x, n).size());
      }
    }
  }

  TEST_CASE("exact pushforward of Bernoulli measures") {
    auto collapse = oracle::load_factor("collapse3.json");
    auto mu = MarkovMeasure::bernoulli(collapse.domain_ptr(), {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    for (std::size_t n = 1; n <= 6; ++n) {
      Rational total = 0;
      for (const auto& y : collapse.image_blocks(n)) {
        std::size_t k = static_cast<std::size_t>(std::count(y.begin(), y.end(), Symbol{0}));
        Rational expect = 1;
        for (std::size_t i = 0; i < n; ++i) expect *= i < k ? Rational(2, 3) : Rational(1, 3);
        CHECK(pushforward_cylinder_exact(mu, collapse, y) == expect);
        total += expect;
        // Kolmogorov consistency.
        Rational ext = 0;
        for (Symbol c = 0; c < 2; ++c) ext += pushforward_cylinder_exact(mu, collapse, concat(y, Word{c}));
        CHECK(ext == expect);
      }
      CHECK(total == 1);
    }
    auto full2 = oracle::load_sft("full2.json");
    auto point = OneBlockFactor::from_names(full2, {{"a", "x"}, {"b", "x"}});
    auto half = MarkovMeasure::bernoulli(full2, {Rational(1, 2), Rational(1, 2)});
    CHECK(pushforward_cylinder_exact(half, point, Word(7, 0)) == 1);
    auto id = OneBlockFactor::identity(full2);
    CHECK(pushforward_cylinder(half, id, Word{0, 1, 1}) == doctest::Approx(0.125));
  }

  TEST_CASE("float pushforward agrees with brute-force fiber sums") {
    auto x = oracle::load_sft("golden_mean.json");
    MarkovMeasure mu(x, 1, {Word{0}, Word{1}}, std::vector<std::vector<double>>{{0.3, 0.7}, {1.0, 0.0}},
                     std::vector<double>{1.0 / 1.7, 0.7 / 1.7});
    auto pi = OneBlockFactor::from_names(x, {{"a", "p"}, {"b", "p"}});
    for (std::size_t n = 1; n <= 6; ++n) {
      double brute = 0;
      for (const auto& u : oracle::brute_fiber(pi, Word(n, 0))) brute += mu.cylinder(u);
      CHECK(pushforward_cylinder(mu, pi, Word(n, 0)) == doctest::Approx(brute).epsilon(1e-14));
      CHECK(brute == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("measures on the wrong space are rejected") {
    auto collapse = oracle::load_factor("collapse3.json");
    auto full2 = oracle::load_sft("full2.json");
    auto mu = MarkovMeasure::bernoulli(full2, {Rational(1, 2), Rational(1, 2)});
    CHECK_THROWS_AS(pushforward_cylinder(mu, collapse, Word{0}), SpecError);
    CHECK_THROWS_AS(OneBlockFactor::from_names(full2, {{"a", "x"}}), SpecError);
  }

  TEST_CASE("image periodic points are exactly the periodic image blocks") {
    auto golden = oracle::load_sft("golden_mean.json");
    auto pi = OneBlockFactor::from_names(golden, {{"a", "x"}, {"b", "y"}});
    auto pts = pi.image_periodic_points(4);
    std::vector<Word> blocks;
    for (const auto& p : pts) blocks.push_back(p.block);
    std::vector<Word> expect;
    for (const auto& p : golden->periodic_points(4)) expect.push_back(p.block);
    CHECK(blocks == expect);
  }
}
