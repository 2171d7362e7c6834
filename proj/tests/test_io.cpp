#include "oracles.hpp"

#include "thermo/seq_table.hpp"

#include <doctest.h>

using namespace thermo;

TEST_SUITE("io") {
  TEST_CASE("shift and factor round trips") {
    auto x = oracle::load_sft("golden_mean.json");
    auto back = sft_from_json(parse_json(dump(to_json(*x))));
    CHECK(*back == *x);
    auto pi = oracle::load_factor("collapse3.json");
    auto pi2 = factor_from_json(parse_json(dump(to_json(pi))));
    CHECK(pi2.domain() == pi.domain());
    CHECK(pi2.symbol_map() == pi.symbol_map());
    CHECK(pi2.target_alphabet() == pi.target_alphabet());
  }

  TEST_CASE("potential round trips keep exact values") {
    auto pi = oracle::load_factor("collapse3.json");
    auto h = potential_from_json(read_json_file(oracle::fixture("h_collapse.json")), pi.image_ptr());
    REQUIRE(h.exact());
    auto h2 = potential_from_json(parse_json(dump(to_json(h))), pi.image_ptr());
    REQUIRE(h2.exact());
    CHECK(h2.exact_value(Word{0}) == LogLinear::log_of(2));
    auto x = oracle::load_sft("full2.json");
    auto f = potential_from_json(read_json_file(oracle::fixture("potential_r2.json")), x);
    CHECK_FALSE(f.exact());
    auto f2 = potential_from_json(parse_json(dump(to_json(f))), x);
    for (const auto& w : f.windows()) CHECK(f2.value(w) == f.value(w));
  }

  TEST_CASE("measure and table round trips") {
    auto pi = oracle::load_factor("collapse3.json");
    auto mu = markov_from_json(read_json_file(oracle::fixture("bernoulli3.json")), pi.domain_ptr());
    auto mu2 = markov_from_json(parse_json(dump(to_json(mu))), pi.domain_ptr());
    CHECK(mu2.exact());
    CHECK(mu2.exact_transition() == mu.exact_transition());

    auto g = build_g_table(pi, LocallyConstantPotential::zero(pi.domain_ptr()), 5);
    auto g2 = table_from_json(parse_json(dump(to_json(g))));
    CHECK(g2.exact());
    REQUIRE(g2.depth_max() == 5);
    for (std::size_t n = 1; n <= 5; ++n) {
      CHECK(g2.level(n).codes == g.level(n).codes);
      CHECK(g2.level(n).counts == g.level(n).counts);
      CHECK(g2.level(n).log_values == g.level(n).log_values);
    }
    CHECK(dump(to_json(g2)) == dump(to_json(g)));
  }

  TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(read_json_file(oracle::fixture("malformed.json")), SpecError);
    CHECK_THROWS_AS(read_json_file(oracle::fixture("no_such_file.json")), SpecError);
    CHECK_THROWS_AS(sft_from_json(parse_json(R"({"alphabet": ["a"]})")), SpecError);
    CHECK_THROWS_AS(sft_from_json(parse_json(R"({"alphabet": ["a", "b"], "transitions": [[1, 2], [1, 1]]})")),
                    SpecError);
    CHECK_THROWS_AS(sft_from_json(parse_json(R"({"alphabet": ["a", "a"], "transitions": [[1, 1], [1, 1]]})")),
                    SpecError);
    CHECK_THROWS_AS(sft_from_json(parse_json(R"({"alphabet": "ab", "transitions": [[1]]})")), SpecError);
    auto x = oracle::load_sft("full2.json");
    CHECK_THROWS_AS(potential_from_json(parse_json(R"({"range": 1, "values": {"a": 0}})"), x), SpecError);
    CHECK_THROWS_AS(potential_from_json(parse_json(R"j({"range": 1, "values": {"a": 0, "b": "log(-1)"}})j"), x),
                    SpecError);
    const std::string bad_rows =
        R"({"order": 1, "states": ["a", "b"], "P": [[0.5, 0.6], [0.5, 0.5]], "pi": [0.5, 0.5]})";
    CHECK_THROWS_AS(markov_from_json(parse_json(bad_rows), x), SpecError);
    const std::string bad_map = R"({"domain": {"alphabet": ["a"], "transitions": [[1]]}, "map": {"z": "a"}})";
    CHECK_THROWS_AS(factor_from_json(parse_json(bad_map)), SpecError);
  }
}
