// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include "thermo/detect.hpp"
#include "thermo/gibbs.hpp"
#include "thermo/sequence_checks.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <unistd.h>

using namespace thermo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum Kind { Pass, Fail, Skip } kind = Pass;
  std::string detail;
};

// Collects the first few failure messages so a FAIL line says why.
struct Tally {
  std::size_t checks = 0, failures = 0;
  std::ostringstream first;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 3) first << (failures > 1 ? "; " : "") << what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures == 0) return {Outcome::Pass, summary + " (" + std::to_string(checks) + " checks)"};
    return {Outcome::Fail, std::to_string(failures) + "/" + std::to_string(checks) + " failed: " + first.str()};
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

LocallyConstantPotential load_h(const std::string& name, std::shared_ptr<const Language> space) {
  return potential_from_json(read_json_file(oracle::fixture(name)), std::move(space));
}

std::map<Word, double> random_values(std::mt19937_64& rng, const Sft& x, std::size_t r) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::map<Word, double> v;
  for (const auto& w : x.blocks(r)) v[w] = d(rng);
  return v;
}

// A surjective one-block map from k domain symbols onto l ≤ k targets.
OneBlockFactor random_factor(std::mt19937_64& rng, std::shared_ptr<const Sft> x, std::size_t l) {
  std::vector<std::size_t> img(x->size());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = i < l ? i : rng() % l;
  std::shuffle(img.begin(), img.end(), rng);
  std::map<std::string, std::string> names;
  for (std::size_t i = 0; i < img.size(); ++i) names[x->alphabet()[i]] = std::string(1, char('a' + img[i]));
  return OneBlockFactor::from_names(x, names);
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Tally t;
  auto pi = oracle::load_factor("collapse3.json");
  auto g = build_g_table(pi, LocallyConstantPotential::zero(pi.domain_ptr()), 14, NumericMode::Exact);
  t.expect(g.exact(), "table is not on the counting path");
  for (std::size_t n = 1; n <= 14; ++n) {
    // Histogram of π over every domain word: the fiber sizes by enumeration.
    std::map<Word, std::uint64_t> fiber;
    for (const auto& u : oracle::all_words(3, n)) fiber[pi.map(u)]++;
    t.expect(g.size(n) == fiber.size(), "level " + std::to_string(n) + " has the wrong word count");
    for (const auto& [y, c] : fiber) {
      auto idx = g.find(y);
      if (!idx) {
        t.expect(false, "missing image word at depth " + std::to_string(n));
        continue;
      }
      const BigInt two_a = pow(BigInt(2), unsigned(std::count(y.begin(), y.end(), Symbol{0})));
      t.expect(g.count(n, *idx) == BigInt(c) && two_a == BigInt(c), "g_n(y) != 2^#a(y)");
    }
    t.expect(partition_count(g, n) == pow(BigInt(3), unsigned(n)), "Z_n != 3^n at n=" + std::to_string(n));
  }
  return t.outcome("g_n(y) = 2^#a(y) and Z_n = 3^n exactly up to depth 14");
}

Outcome criterion2() {
  auto x = oracle::load_sft("golden_mean.json");
  auto g = build_g_table(OneBlockFactor::identity(x), LocallyConstantPotential::zero(x), 20);
  auto est = pressure_estimate(g);
  const double truth = std::log(oracle::perron_root(oracle::adjacency(*x)));
  const double transfer = transfer_pressure(x, LocallyConstantPotential::zero(x)).pressure;
  const double e_fek = std::abs(est.fekete_upper - truth), e_ext = std::abs(est.extrapolated - truth),
               e_tr = std::abs(transfer - truth);
  std::string detail = "log Perron root " + fmt(truth) + ", Fekete " + fmt(est.fekete_upper) + " (err " +
                       fmt(e_fek) + "), extrapolated err " + fmt(e_ext) + ", transfer err " + fmt(e_tr);
  const bool ok = e_fek <= 1e-3 && e_ext <= 1e-3 && e_tr <= 1e-10;
  // min_n (1/n) log Z_n at depth 20 is (1/20) log F_22 ≈ log φ + 7.9e-3, so
  // the Fekete tolerance cannot be met at this depth.
  if (!ok && e_fek > 1e-3 && e_ext <= 1e-3 && e_tr <= 1e-10)
    detail += "; Fekete bound alone misses 1e-3 (slow O(1/n) convergence)";
  return {ok ? Outcome::Pass : Outcome::Fail, detail};
}

Outcome criterion3() {
  Tally t;
  std::mt19937_64 rng(2024);
  double worst = kNegInf;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t k = 2 + trial % 3;
    auto x = oracle::random_irreducible_sft(rng, k);
    auto pi = random_factor(rng, x, std::min<std::size_t>(k, 2 + trial % 2));
    const std::size_t r = 1 + trial % 2;
    LocallyConstantPotential f(x, r, random_values(rng, *x, r));
    auto g = build_g_table(pi, f, 12);
    auto sub = check_subadditive(g);
    worst = std::max(worst, sub.worst_slack);
    const std::string tag = "triple " + std::to_string(trial);
    t.expect(sub.holds && sub.worst_slack <= 1e-12, tag + " slack " + fmt(sub.worst_slack));
    auto p = x->weak_spec_number();
    t.expect(p.has_value(), tag + " has no weak specification number");
    auto d2 = check_d2(g, p.value_or(0), 4);
    t.expect(d2.all_bridged, tag + " has an unbridged pair at gap " + std::to_string(p.value_or(0)));
  }
  return t.outcome("10 triples, worst slack " + fmt(worst));
}

Outcome criterion4() {
  Tally t;
  auto pi = oracle::load_factor("collapse3.json");
  auto f = LocallyConstantPotential::zero(pi.domain_ptr());
  auto g = build_g_table(pi, f, 18);
  auto fit = fit_h(g, pi.image_ptr(), 1, 12, NumericMode::Exact);
  t.expect(fit.t_star_exact && fit.t_star_exact->is_zero(), "t* is not exactly 0");
  t.expect(fit.h->exact() && fit.h->exact_value(Word{0}) == LogLinear::log_of(2), "h(a) != log 2");
  t.expect(fit.h->exact() && fit.h->exact_value(Word{1}).is_zero(), "h(b) != 0");
  auto orbits = table_periodic_points(g, 6);
  std::size_t checked = 0;
  for (const auto& y : orbits) {
    auto d = periodic_defect(g, *fit.h, y, 18);
    checked += d.depths.size();
    t.expect(d.depths.back() + y.period() > 18, "orbit multiples stop short of depth 18");
    t.expect(d.exact_zero(), "nonzero periodic defect");
  }
  auto rep = compensation_verdict(g, *fit.h, orbits, kDefaultSlopeThreshold, &pi, &f);
  t.expect(rep.verdict == Verdict::Certified, "verdict " + to_string(rep.verdict) + ": " + rep.reason);
  return t.outcome(std::to_string(orbits.size()) + " orbits, " + std::to_string(checked) +
                   " exact zero defects, verdict " + to_string(rep.verdict));
}

Outcome criterion5() {
  Tally t;
  auto table = table_from_json(read_json_file(oracle::fixture("growth_table.json")));
  auto prof = defect_profile(table);
  for (std::size_t m = 1; m + 2 <= table.depth_max(); ++m) {
    const auto* e = prof.find(2, m);
    t.expect(e && e->log_c >= 0.3 * double(m) - 1e-12, "log C_{2," + std::to_string(m) + "} < 0.3m");
  }
  auto shared = std::make_shared<const SeqTable>(table);
  auto lang = std::make_shared<TableLanguage>(shared);
  auto fit = fit_h(table, lang, 1, 4);
  std::string witness;
  for (const auto* h : {fit.h.get()}) {
    auto rep = compensation_verdict(table, *h, table_periodic_points(table, 4));
    t.expect(rep.verdict == Verdict::Refuted, "verdict " + to_string(rep.verdict));
    t.expect(rep.profile.growth_witness.has_value(), "no (n,m) witness");
    if (rep.profile.growth_witness)
      witness = "(n,m) = (" + std::to_string(rep.profile.growth_witness->n) + "," +
                std::to_string(rep.profile.growth_witness->m) + ")";
    if (rep.profile.growth_witness) {
      const auto& w = *rep.profile.growth_witness;
      t.expect(rep.reason.find("C_{" + std::to_string(w.n) + ",m}") != std::string::npos &&
                   rep.reason.find("m=" + std::to_string(w.m)) != std::string::npos,
               "reason does not cite the witness: " + rep.reason);
    }
  }
  return t.outcome("constructed table REFUTED with witness " + witness);
}

Outcome criterion6() {
  Tally t;
  auto pi = oracle::load_factor("collapse3.json");
  auto x = pi.domain_ptr();
  auto mu = markov_from_json(read_json_file(oracle::fixture("bernoulli3.json")), x);
  auto zero = LocallyConstantPotential::zero(x);
  auto dom = build_g_table(OneBlockFactor::identity(x), zero, 12);
  auto src = weak_gibbs_constants(cylinder_masses(mu, dom), dom, std::log(3.0), "log 3", Rational(3));
  t.expect(src.exact_c.has_value(), "domain constants are not exact");
  auto g = build_g_table(pi, zero, 12);
  auto masses = pushforward_masses(mu, pi, g);
  t.expect(masses.exact.has_value(), "pushforward masses are not exact");
  auto sw = check_sandwich_exact(masses, g, Rational(3), src);
  t.expect(sw.exact, "sandwich was not evaluated exactly");
  t.expect(sw.holds, "sandwich fails at a word of length " + std::to_string(sw.witness_depth));
  std::size_t words = 0;
  for (std::size_t n = 1; n <= 12; ++n) words += g.size(n);
  t.expect(sw.words_checked == words, "not every image word was checked");
  return t.outcome(std::to_string(sw.words_checked) + " image words, exact rational comparison");
}

// Random order-1 or order-2 Markov measure on the full shift over `alphabet`.
MarkovMeasure random_markov(std::mt19937_64& rng, std::shared_ptr<const Sft> y, std::size_t order) {
  std::uniform_real_distribution<double> d(0.05, 1.0);
  const std::size_t l = y->size();
  auto states = y->blocks(order);
  const std::size_t s = states.size();
  std::vector<std::vector<double>> p(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) {
    double total = 0;
    std::vector<double> w(l);
    for (auto& v : w) total += (v = d(rng));
    for (std::size_t j = 0; j < s; ++j)
      if (std::equal(states[i].begin() + 1, states[i].end(), states[j].begin())) p[i][j] = w[states[j].back()] / total;
  }
  Eigen::MatrixXd m(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) m(i, j) = p[i][j];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m.transpose() - Eigen::MatrixXd::Identity(s, s));
  Eigen::VectorXd v = lu.kernel().col(0);
  v /= v.sum();
  return MarkovMeasure(y, order, states, p, std::vector<double>(v.data(), v.data() + s));
}

Outcome criterion7() {
  Tally t;
  auto pi = oracle::load_factor("collapse3.json");
  auto g = build_g_table(pi, LocallyConstantPotential::zero(pi.domain_ptr()), 12);
  auto bound = pressure_estimate(g).fekete_upper;
  auto y = std::make_shared<const Sft>(Sft::full_shift(pi.target_alphabet()));
  std::mt19937_64 rng(77);
  double worst = kNegInf;
  for (int i = 0; i < 20; ++i) {
    auto mu = random_markov(rng, y, 1 + i % 2);
    auto rep = integrate_table(g, mu, 12);
    const double lhs = entropy(mu) + rep.kingman_upper();
    worst = std::max(worst, lhs - bound);
    t.expect(lhs <= bound + 1e-6, "measure " + std::to_string(i) + " exceeds the bound by " + fmt(lhs - bound));
  }
  return t.outcome("20 measures, max(h + integral - Fekete) = " + fmt(worst));
}

// Exact or float check of |d_{y,j}| ≤ u_{jq} + (1/jq) log M_{jq}(h).
struct CoherenceCase {
  std::string name;
  std::shared_ptr<const SeqTable> g;
  std::shared_ptr<const LocallyConstantPotential> h;
};

LocallyConstantPotential negate(const LocallyConstantPotential& h) {
  std::map<Word, LogLinear> v;
  for (const auto& w : h.windows()) v[w] = -h.exact_value(w);
  return LocallyConstantPotential(h.space_ptr(), h.range(), v);
}

std::vector<CoherenceCase> coherence_cases(std::mt19937_64& rng) {
  std::vector<CoherenceCase> out;
  auto add_fits = [&](const std::string& name, const SeqTable& g, std::shared_ptr<const Language> image) {
    auto gp = std::make_shared<const SeqTable>(g);
    out.push_back({name + " h=0", gp,
                   std::make_shared<const LocallyConstantPotential>(LocallyConstantPotential::zero(image))});
    for (std::size_t r = 1; r <= 2; ++r)
      out.push_back({name + " fit r=" + std::to_string(r), gp, fit_h(g, image, r, 6).h});
  };
  const std::size_t depth = 12;
  {
    auto pi = oracle::load_factor("collapse3.json");
    auto g = build_g_table(pi, LocallyConstantPotential::zero(pi.domain_ptr()), depth);
    add_fits("collapse", g, pi.image_ptr());
    out.push_back({"collapse h_collapse", out.back().g,
                   std::make_shared<const LocallyConstantPotential>(load_h("h_collapse.json", pi.image_ptr()))});
    LocallyConstantPotential f(pi.domain_ptr(), 2, random_values(rng, pi.domain(), 2));
    add_fits("collapse random f", build_g_table(pi, f, 10), pi.image_ptr());
  }
  {
    auto pi = oracle::load_factor("amalgam4.json");
    add_fits("amalgam", build_g_table(pi, LocallyConstantPotential::zero(pi.domain_ptr()), 10), pi.image_ptr());
  }
  {
    auto x = oracle::load_sft("golden_mean.json");
    auto id = OneBlockFactor::identity(x);
    add_fits("golden", build_g_table(id, LocallyConstantPotential::zero(x), depth), id.image_ptr());
  }
  {
    auto x = oracle::load_sft("full2.json");
    auto f = potential_from_json(read_json_file(oracle::fixture("potential_r2.json")), x);
    auto id = OneBlockFactor::identity(x);
    add_fits("full2 r2", build_g_table(id, f, depth), id.image_ptr());
  }
  {
    auto t = table_from_json(read_json_file(oracle::fixture("growth_table.json")));
    auto lang = std::make_shared<TableLanguage>(std::make_shared<const SeqTable>(t));
    add_fits("growth table", t, lang);
  }
  return out;
}

Outcome criterion8() {
  Tally t;
  std::mt19937_64 rng(88);
  std::size_t exact_checks = 0, float_checks = 0;
  for (const auto& c : coherence_cases(rng)) {
    const auto& g = *c.g;
    const auto& h = *c.h;
    const bool exact = g.exact() && h.exact();
    std::optional<LocallyConstantPotential> neg;
    if (exact) neg = negate(h);
    for (const auto& y : table_periodic_points(g, 6)) {
      auto d = periodic_defect(g, h, y, g.depth_max());
      for (std::size_t j = 0; j < d.depths.size(); ++j) {
        const std::size_t n = d.depths[j];
        const auto words = h.space().blocks(n);
        const std::string tag = c.name + " orbit " + std::to_string(y.period()) + " depth " + std::to_string(n);
        if (exact) {
          // u_n and log M_n(h) recomputed here in exact arithmetic.
          LogLinear u, var;
          for (const auto& w : words) {
            const LogLinear sup = birkhoff_sup_exact(h, w), inf = -birkhoff_sup_exact(*neg, w);
            u = std::max(u, abs(g.exact_log(w) - sup));
            var = std::max(var, sup - inf);
          }
          t.expect(abs((*d.exact)[j]) <= (u + var) / Rational(static_cast<long long>(n)), tag);
          ++exact_checks;
        } else {
          const double u = uniform_defect(g, h, n).value;
          const double var = log_variation_constant(h, n) / double(n);
          t.expect(std::abs(d.values[j]) <= u + var + 1e-12, tag + " excess " + fmt(std::abs(d.values[j]) - u - var));
          ++float_checks;
        }
      }
    }
  }
  return t.outcome(std::to_string(exact_checks) + " exact and " + std::to_string(float_checks) +
                   " float (tol 1e-12) comparisons");
}

Outcome criterion9() {
  Tally t;
  std::mt19937_64 rng(99);
  std::vector<std::pair<std::string, std::pair<SeqTable, std::shared_ptr<const Language>>>> cases;
  {
    auto pi = oracle::load_factor("collapse3.json");
    cases.push_back({"collapse", {build_g_table(pi, LocallyConstantPotential::zero(pi.domain_ptr()), 8), pi.image_ptr()}});
    LocallyConstantPotential f(pi.domain_ptr(), 2, random_values(rng, pi.domain(), 2));
    cases.push_back({"collapse random f", {build_g_table(pi, f, 8), pi.image_ptr()}});
  }
  for (int i = 0; i < 3; ++i) {
    auto x = oracle::random_irreducible_sft(rng, 4);
    auto pi = random_factor(rng, x, 2);
    LocallyConstantPotential f(x, 2, random_values(rng, *x, 2));
    cases.push_back({"random " + std::to_string(i), {build_g_table(pi, f, 8), pi.image_ptr()}});
  }
  {
    auto x = oracle::load_sft("full2.json");
    auto f = potential_from_json(read_json_file(oracle::fixture("potential_r2.json")), x);
    auto id = OneBlockFactor::identity(x);
    cases.push_back({"full2 r2", {build_g_table(id, f, 8), id.image_ptr()}});
  }
  std::size_t fits = 0;
  const double scales[] = {1e-6, 1e-3, 1e-1};
  for (const auto& [name, data] : cases) {
    const auto& [g, image] = data;
    for (std::size_t r = 1; r <= 2; ++r) {
      auto fit = fit_h(g, image, r, 6);
      ++fits;
      for (int k = 0; k < 100; ++k) {
        std::uniform_real_distribution<double> d(-scales[k % 3], scales[k % 3]);
        std::map<Word, double> v;
        for (const auto& w : fit.h->windows()) v[w] = fit.h->value(w) + d(rng);
        LocallyConstantPotential hp(image, r, v);
        const double got = achieved_defect(g, hp, 6).value;
        t.expect(got >= fit.achieved - 1e-12, name + " r=" + std::to_string(r) + " improved by " +
                                                  fmt(fit.achieved - got));
      }
    }
  }
  return t.outcome(std::to_string(fits) + " fits x 100 perturbations");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion10() {
  Tally t;
  const fs::path work = fs::temp_directory_path() / ("thermo_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);
  const std::string fx = THERMO_FIXTURES;
  struct Problem {
    std::string name, args;
    std::vector<std::string> commands;
  };
  const std::vector<std::string> all{"pressure", "fit-h", "verdict", "weak-gibbs", "profile-cnm", "certificate"};
  const std::vector<Problem> problems{
      {"collapse",
       "--factor " + fx + "/collapse3.json --h " + fx + "/h_collapse.json --measure " + fx +
           "/bernoulli3.json --word aab",
       all},
      {"amalgam", "--factor " + fx + "/amalgam4.json --h " + fx + "/h_collapse.json --word ab", all},
      {"golden", "--sft " + fx + "/golden_mean.json --h " + fx + "/h_zero.json --word bab", all},
      {"full2_r2", "--sft " + fx + "/full2.json --potential " + fx + "/potential_r2.json --h " + fx + "/h_zero.json --word ab", all},
      {"growth", "--table " + fx + "/growth_table.json --h " + fx + "/h_zero.json", {"pressure", "fit-h", "verdict", "profile-cnm"}},
  };
  std::size_t runs = 0;
  for (const auto& p : problems)
    for (const auto& cmd : p.commands) {
      std::string out[2], csv[2];
      int status[2];
      for (int k = 0; k < 2; ++k) {
        const fs::path base = work / (p.name + "_" + cmd + "_" + std::to_string(k));
        std::string line = std::string(THERMO_CLI) + " " + cmd + " " + p.args + " --depth 8 --out " +
                           base.string() + ".json --csv " + base.string() + ".csv 2>" + base.string() + ".err";
        status[k] = std::system(line.c_str());
        out[k] = slurp(base.string() + ".json");
        csv[k] = slurp(base.string() + ".csv");
        ++runs;
      }
      const std::string tag = p.name + " " + cmd;
      t.expect(status[0] == 0 && status[1] == 0, tag + " exited nonzero");
      t.expect(!out[0].empty() && out[0] == out[1], tag + " reports differ");
      t.expect(csv[0] == csv[1], tag + " CSVs differ");
    }
  fs::remove_all(work);
  return t.outcome(std::to_string(runs) + " CLI runs, byte-identical pairs");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 fiber-sum identity", criterion1},
      {"2 pressure cross-check", criterion2},
      {"3 subadditivity suite", criterion3},
      {"4 compensation certification", criterion4},
      {"5 negative control", criterion5},
      {"6 weak-Gibbs sandwich", criterion6},
      {"7 variational inequality", criterion7},
      {"8 defect coherence", criterion8},
      {"9 LP optimality", criterion9},
      {"10 determinism", criterion10},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.kind == Outcome::Pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << " ["
              << fmt(std::round(secs * 10) / 10) << " s]" << std::endl;
    if (o.kind == Outcome::Fail) ++failed;
  }
  // The published sofic example with C_{2,m} ≥ 2^{m/2} + 2 is not transcribed, so its check is not run.
  std::cout << "SKIP  criterion 5b sofic example profile: example map not transcribed" << std::endl;
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
