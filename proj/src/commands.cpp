#include "thermo/commands.hpp"

#include "thermo/detect.hpp"
#include "thermo/gibbs.hpp"
#include "thermo/sequence_checks.hpp"

#include <cmath>

namespace thermo {

namespace {

// The (π, f) problem behind a job, or an imported table.
struct Problem {
  std::shared_ptr<const OneBlockFactor> pi;
  std::shared_ptr<const LocallyConstantPotential> f;
  std::shared_ptr<const SeqTable> table;
  std::shared_ptr<const Language> image;
};

Json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

Problem load_problem(const JobSpec& job, bool need_table) {
  Problem p;
  if (job.factor_path) {
    p.pi = std::make_shared<const OneBlockFactor>(factor_from_json(read_json_file(*job.factor_path)));
  } else if (job.sft_path) {
    p.pi = std::make_shared<const OneBlockFactor>(OneBlockFactor::identity(sft_from_json(read_json_file(*job.sft_path))));
  }
  if (p.pi) {
    auto domain = p.pi->domain_ptr();
    if (job.potential_path)
      p.f = std::make_shared<const LocallyConstantPotential>(
          potential_from_json(read_json_file(*job.potential_path), domain));
    else
      p.f = std::make_shared<const LocallyConstantPotential>(LocallyConstantPotential::zero(domain));
  }
  if (job.table_path) {
    p.table = std::make_shared<const SeqTable>(table_from_json(read_json_file(*job.table_path)));
    p.image = std::make_shared<const TableLanguage>(p.table);
  } else if (need_table) {
    if (!p.pi) throw SpecError("need --factor, --sft or --table");
    if (job.depth == 0) throw SpecError("--depth must be >= 1");
    p.table = std::make_shared<const SeqTable>(build_g_table(*p.pi, *p.f, job.depth, job.mode));
    p.image = p.pi->image_ptr();
  }
  return p;
}

Json inputs(const JobSpec& job) {
  Json doc = Json::object();
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) doc[key] = *v;
  };
  put("sft", job.sft_path);
  put("factor", job.factor_path);
  put("potential", job.potential_path);
  put("measure", job.measure_path);
  put("table", job.table_path);
  put("h", job.h_path);
  return doc;
}

Json header(const JobSpec& job, const SeqTable* t) {
  Json doc;
  doc["command"] = job.command;
  doc["inputs"] = inputs(job);
  doc["mode"] = to_string(job.mode);
  if (t) {
    doc["table"] = {{"kind", to_string(t->kind())},
                    {"alphabet", t->alphabet()},
                    {"depth", t->depth_max()},
                    {"exact", t->exact()}};
  }
  return doc;
}

Json fit_json(const LinearFit& fit) {
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}, {"points", fit.points}};
}

Json split_json(const SubadditivityReport& rep, const std::vector<std::string>& names) {
  Json doc = {{"holds", rep.holds}, {"worst_slack", number(rep.worst_slack)}, {"splits_checked", rep.splits_checked}};
  if (rep.witness) {
    doc["witness"] = {{"word", format_word(rep.witness->word, names)},
                      {"n", rep.witness->n},
                      {"m", rep.witness->m},
                      {"slack", rep.witness->slack}};
  }
  return doc;
}

Json potential_values(const LocallyConstantPotential& h) { return to_json(h)["values"]; }

std::vector<PeriodicPoint> orbits_for(const Problem& p, const JobSpec& job) {
  if (p.pi && !job.table_path) return p.pi->image_periodic_points(job.max_period);
  return table_periodic_points(*p.table, job.max_period);
}

CompensationReport run_verdict(const Problem& p, const JobSpec& job, const LocallyConstantPotential& h) {
  const bool own_table = p.pi && !job.table_path;
  return compensation_verdict(*p.table, h, orbits_for(p, job), job.slope_threshold, own_table ? p.pi.get() : nullptr,
                              own_table ? p.f.get() : nullptr);
}

Json verdict_json(const CompensationReport& rep, const std::vector<std::string>& names) {
  Json doc;
  doc["verdict"] = to_string(rep.verdict);
  doc["reason"] = rep.reason;
  doc["coverage"] = {{"orbits_checked", rep.periodic.size()},
                     {"max_period", rep.max_period},
                     {"depth", rep.depth}};
  Json uniform = Json::array();
  for (const auto& u : rep.uniform) {
    Json e = {{"n", u.n}, {"value", u.value}, {"witness", format_word(u.witness, names)}};
    if (u.exact_zero) e["exact_zero"] = *u.exact_zero;
    uniform.push_back(e);
  }
  doc["uniform_defects"] = uniform;
  doc["uniform_trend"] = fit_json(rep.uniform_fit);
  Json periodic = Json::array();
  for (const auto& d : rep.periodic) {
    Json e = {{"block", format_word(d.point.block, names)}, {"period", d.point.period()}};
    Json vals = Json::array();
    for (std::size_t j = 0; j < d.values.size(); ++j) {
      Json v = {{"depth", d.depths[j]}, {"value", d.values[j]}};
      if (d.exact) v["exact"] = (*d.exact)[j].to_string();
      vals.push_back(v);
    }
    e["defects"] = vals;
    periodic.push_back(e);
  }
  doc["periodic_defects"] = periodic;
  Json bounds = Json::array();
  for (const auto& b : rep.bounds) {
    Json e = {{"u", format_word(b.u, names)}, {"y_star", format_word(b.y_star.block, names)}, {"lower", b.lower}};
    if (b.exact_lower) e["exact_lower"] = b.exact_lower->to_string();
    bounds.push_back(e);
  }
  doc["limit_bounds"] = bounds;
  Json prof = {{"growth_flag", rep.profile.growth_flag}, {"exact_zero", rep.profile.exact_zero}};
  if (rep.profile.growth_witness) {
    const auto& w = *rep.profile.growth_witness;
    prof["witness"] = {{"n", w.n}, {"m", w.m}, {"log_c", w.log_c}, {"word", format_word(w.witness, names)}};
  }
  Json growth = Json::array();
  for (const auto& g : rep.profile.growth) {
    Json e = fit_json(g.fit);
    e["n"] = g.n;
    e["growth"] = g.growth;
    growth.push_back(e);
  }
  prof["fits"] = growth;
  doc["defect_profile"] = prof;
  return doc;
}

CommandResult cmd_pressure(const JobSpec& job) {
  Problem p = load_problem(job, true);
  const SeqTable& t = *p.table;
  Json doc = header(job, &t);
  PressureEstimate est = pressure_estimate(t);
  Json seq = Json::array();
  for (std::size_t n = 1; n <= t.depth_max(); ++n) {
    Json e = {{"n", n}, {"log_z", est.log_z[n - 1]}, {"per_n", est.per_n[n - 1]}};
    if (t.exact()) e["z"] = partition_count(t, n).str();
    seq.push_back(e);
  }
  doc["sequence"] = seq;
  doc["fekete_upper"] = est.fekete_upper;
  doc["fekete_depth"] = est.fekete_depth;
  if (est.fekete_exact) doc["fekete_exact"] = est.fekete_exact->to_string();
  doc["extrapolated"] = est.extrapolated;
  doc["partition_subadditivity"] = split_json(check_partition_subadditive(t), t.alphabet());
  if (p.pi && !job.table_path && p.pi->domain().is_irreducible()) {
    GibbsData g = transfer_pressure(p.pi->domain_ptr(), *p.f);
    Json tp = {{"pressure", g.pressure}, {"lambda", g.lambda}, {"eigen_residual", g.eigen_residual}};
    if (g.exact_lambda) tp["exact_lambda"] = to_string(*g.exact_lambda);
    // Σ_y g_n(y) = Z_n(F), so the image sequence has the pressure of f.
    doc["transfer_pressure"] = tp;
  }
  return {doc, std::nullopt};
}

LocallyConstantPotential load_h(const JobSpec& job, const Problem& p) {
  if (!job.h_path) throw SpecError("need --h");
  return potential_from_json(read_json_file(*job.h_path), p.image);
}

CommandResult cmd_fit_h(const JobSpec& job) {
  Problem p = load_problem(job, true);
  const SeqTable& t = *p.table;
  Json doc = header(job, &t);
  const std::size_t n_fit = job.n_fit.value_or(t.depth_max() - (job.range - 1));
  ChebyshevFit fit = fit_h(t, p.image, job.range, n_fit, job.mode);
  Json f = {{"range", fit.range}, {"n_fit", fit.n_fit}, {"h", potential_values(*fit.h)}, {"t_star", fit.t_star}};
  if (fit.t_star_exact) {
    f["t_star_exact"] = fit.t_star_exact->to_string();
    f["exact_verified"] = fit.exact_verified;
  }
  f["achieved"] = fit.achieved;
  f["achieved_witness"] = format_word(fit.achieved_witness, t.alphabet());
  f["points"] = fit.points;
  f["lp_columns"] = fit.columns;
  f["pivots"] = fit.pivots;
  doc["fit"] = f;
  CompensationReport rep = run_verdict(p, job, *fit.h);
  doc["compensation"] = verdict_json(rep, t.alphabet());
  doc["verdict"] = to_string(rep.verdict);
  return {doc, std::nullopt};
}

CommandResult cmd_verdict(const JobSpec& job) {
  Problem p = load_problem(job, true);
  const SeqTable& t = *p.table;
  Json doc = header(job, &t);
  LocallyConstantPotential h = load_h(job, p);
  doc["h"] = potential_values(h);
  CompensationReport rep = run_verdict(p, job, h);
  doc["compensation"] = verdict_json(rep, t.alphabet());
  doc["verdict"] = to_string(rep.verdict);
  return {doc, std::nullopt};
}

Json constants_json(const WeakGibbsReport& w, const std::vector<std::string>& names) {
  Json doc = {{"pressure", w.pressure}, {"pressure_source", w.pressure_source}};
  Json cs = Json::array();
  for (std::size_t n = 1; n <= w.log_c.size(); ++n) {
    Json e = {{"n", n}, {"log_c", number(w.log_c[n - 1])}, {"witness", format_word(w.witness[n - 1], names)}};
    if (w.exact_c) e["c_exact"] = to_string((*w.exact_c)[n - 1]);
    cs.push_back(e);
  }
  doc["constants"] = cs;
  doc["trend"] = fit_json(w.fit);
  doc["classification"] = to_string(w.classification);
  doc["status"] = to_string(w.status);
  return doc;
}

CommandResult cmd_weak_gibbs(const JobSpec& job) {
  if (job.table_path) throw SpecError("weak-gibbs works from --sft or --factor, not --table");
  Problem p = load_problem(job, false);
  if (!p.pi) throw SpecError("need --factor or --sft");
  auto domain = p.pi->domain_ptr();
  GibbsData gibbs = transfer_pressure(domain, *p.f);
  std::shared_ptr<const MarkovMeasure> mu = gibbs.measure;
  std::string measure_source = "gibbs measure of f";
  if (job.measure_path) {
    mu = std::make_shared<const MarkovMeasure>(markov_from_json(read_json_file(*job.measure_path), domain));
    measure_source = "given";
  }
  const auto exact_lambda = mu->exact() ? gibbs.exact_lambda : std::nullopt;
  SeqTable ft = build_potential_table(*p.f, job.depth, job.mode);
  Json doc = header(job, &ft);
  doc["measure_source"] = measure_source;
  doc["measure"] = to_json(*mu);
  doc["transfer"] = {{"pressure", gibbs.pressure}, {"lambda", gibbs.lambda}, {"eigen_residual", gibbs.eigen_residual}};
  if (gibbs.exact_lambda) doc["transfer"]["exact_lambda"] = to_string(*gibbs.exact_lambda);
  doc["entropy"] = entropy(*mu);
  WeakGibbsReport source = weak_gibbs_constants(cylinder_masses(*mu, ft), ft, gibbs.pressure,
                                                "transfer pressure of f", exact_lambda, job.slope_threshold);
  doc["domain"] = constants_json(source, ft.alphabet());
  if (!p.pi->is_identity()) {
    SeqTable gt = build_g_table(*p.pi, *p.f, job.depth, job.mode);
    MassTable image = pushforward_masses(*mu, *p.pi, gt);
    // Σ_y g_n(y) = Z_n(F), hence P(G) = P(f).
    WeakGibbsReport wg = weak_gibbs_constants(image, gt, gibbs.pressure,
                                              "transfer pressure of f (equal image partition sums)", exact_lambda,
                                              job.slope_threshold);
    doc["image"] = constants_json(wg, gt.alphabet());
    SandwichReport sw = (exact_lambda && image.exact && gt.exact() && source.exact_c)
                            ? check_sandwich_exact(image, gt, *exact_lambda, source)
                            : check_sandwich(image, gt, gibbs.pressure, source);
    doc["sandwich"] = {{"holds", sw.holds},
                       {"exact", sw.exact},
                       {"words_checked", sw.words_checked},
                       {"worst_margin", number(sw.worst_margin)},
                       {"witness", format_word(sw.witness, gt.alphabet())},
                       {"witness_depth", sw.witness_depth}};
  }
  return {doc, std::nullopt};
}

CommandResult cmd_profile(const JobSpec& job) {
  Problem p = load_problem(job, true);
  const SeqTable& t = *p.table;
  Json doc = header(job, &t);
  DefectProfile prof = defect_profile(t, job.slope_threshold);
  std::size_t gap = 1;
  if (job.gap) gap = *job.gap;
  else if (p.pi && !job.table_path && p.pi->domain().weak_spec_number()) gap = *p.pi->domain().weak_spec_number();
  D2Report d2 = check_d2(t, gap, job.max_nm, job.slope_threshold);
  Json entries = Json::array();
  for (const auto& e : prof.entries) {
    Json j = {{"n", e.n}, {"m", e.m}, {"log_c", e.log_c}, {"witness", format_word(e.witness, t.alphabet())}};
    if (e.exact_c) j["c_exact"] = to_string(*e.exact_c);
    if (auto d = d2.log_d(e.n, e.m)) j["log_d"] = number(*d);
    entries.push_back(j);
  }
  doc["entries"] = entries;
  doc["growth_flag"] = prof.growth_flag;
  doc["exact_zero"] = prof.exact_zero;
  if (prof.growth_witness) {
    const auto& w = *prof.growth_witness;
    doc["growth_witness"] = {{"n", w.n}, {"m", w.m}, {"log_c", w.log_c}, {"word", format_word(w.witness, t.alphabet())}};
  }
  Json fits = Json::array();
  for (const auto& g : prof.growth) {
    Json e = fit_json(g.fit);
    e["n"] = g.n;
    e["growth"] = g.growth;
    fits.push_back(e);
  }
  doc["fits"] = fits;
  doc["d2"] = {{"gap", d2.gap},
               {"all_bridged", d2.all_bridged},
               {"exact_nonnegative", d2.exact_nonnegative},
               {"diagonal_trend", fit_json(d2.diagonal_fit)},
               {"verdict", to_string(d2.verdict)}};
  doc["subadditivity"] = split_json(check_subadditive(t), t.alphabet());
  return {doc, to_csv(prof, &d2)};
}

CommandResult cmd_certificate(const JobSpec& job) {
  if (job.table_path) throw SpecError("certificate needs --factor or --sft");
  Problem p = load_problem(job, true);
  const SeqTable& t = *p.table;
  if (!job.word) throw SpecError("need --word");
  const Word u = parse_word(*job.word, t.alphabet());
  Json doc = header(job, &t);
  C2Certificate c = c2_certificate(t, *p.pi, *p.f, u, job.gap, job.multiples, job.l_squared);
  const auto& xnames = p.pi->domain().alphabet();
  doc["certificate"] = {{"u", format_word(c.u, t.alphabet())},
                        {"first_symbol", xnames[c.first_symbol]},
                        {"last_symbol", xnames[c.last_symbol]},
                        {"fiber_word", format_word(c.fiber_word, xnames)},
                        {"bridge", format_word(c.bridge, xnames)},
                        {"q", c.bridge.size()},
                        {"y_star", format_word(c.y_star.block, t.alphabet())},
                        {"log_m", c.log_m},
                        {"log_l", c.log_l},
                        {"l_squared", c.l_squared},
                        {"log_variation", c.log_variation},
                        {"log_bound", c.log_bound},
                        {"slack", c.slack},
                        {"exact_checked", c.exact_checked},
                        {"verified", c.verified}};
  return {doc, std::nullopt};
}

}  // namespace

CommandResult run_command(const JobSpec& job) {
  if (job.command == "pressure") return cmd_pressure(job);
  if (job.command == "fit-h") return cmd_fit_h(job);
  if (job.command == "verdict") return cmd_verdict(job);
  if (job.command == "weak-gibbs") return cmd_weak_gibbs(job);
  if (job.command == "profile-cnm") return cmd_profile(job);
  if (job.command == "certificate") return cmd_certificate(job);
  throw SpecError("unknown command '" + job.command + "'");
}

}  // namespace thermo
