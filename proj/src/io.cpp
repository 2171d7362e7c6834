#include "thermo/io.hpp"

#include <fstream>
#include <sstream>

namespace thermo {

namespace {

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
  return doc.at(key);
}

template <class T>
T get(const Json& doc, const char* key) {
  try {
    return field(doc, key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SpecError(std::string("field '") + key + "' has the wrong type");
  }
}

Rational rational_entry(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  throw SpecError("exact entries must be integers or \"p/q\" strings");
}

double float_entry(const Json& v) {
  if (!v.is_number()) throw SpecError("expected a number");
  return v.get<double>();
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write '" + path + "'");
  out << text;
}

std::shared_ptr<const Sft> sft_from_json(const Json& doc) {
  return std::make_shared<const Sft>(get<std::vector<std::string>>(doc, "alphabet"),
                                     get<std::vector<std::vector<int>>>(doc, "transitions"));
}

Json to_json(const Sft& sft) {
  Json doc;
  doc["alphabet"] = sft.alphabet();
  doc["transitions"] = sft.transitions();
  return doc;
}

OneBlockFactor factor_from_json(const Json& doc) {
  auto domain = sft_from_json(field(doc, "domain"));
  const Json& map = field(doc, "map");
  if (!map.is_object()) throw SpecError("factor map must be an object");
  std::map<std::string, std::string> names;
  // Target order follows the domain alphabet, not the JSON key order.
  for (const auto& s : domain->alphabet()) {
    if (!map.contains(s)) throw SpecError("factor map misses symbol '" + s + "'");
    if (!map.at(s).is_string()) throw SpecError("factor map targets must be strings");
    names[s] = map.at(s).get<std::string>();
  }
  if (map.size() != domain->size()) throw SpecError("factor map names symbols outside the domain");
  return OneBlockFactor::from_names(domain, names);
}

Json to_json(const OneBlockFactor& pi) {
  Json doc;
  doc["domain"] = to_json(pi.domain());
  Json map = Json::object();
  for (std::size_t s = 0; s < pi.domain().size(); ++s)
    map[pi.domain().alphabet()[s]] = pi.target_alphabet()[pi.map(static_cast<Symbol>(s))];
  doc["map"] = map;
  return doc;
}

LocallyConstantPotential potential_from_json(const Json& doc, std::shared_ptr<const Language> space) {
  const auto range = get<long long>(doc, "range");
  if (range < 1) throw SpecError("potential range must be >= 1");
  const Json& values = field(doc, "values");
  if (!values.is_object()) throw SpecError("potential values must be an object");
  // Exact when any value is symbolic or all are zero.
  bool exact = false, all_zero = true;
  for (const auto& [k, v] : values.items()) {
    if (v.is_string()) exact = true;
    else if (!v.is_number() || v.get<double>() != 0.0) all_zero = false;
  }
  exact = exact || all_zero;
  const auto& names = space->alphabet();
  if (exact) {
    std::map<Word, LogLinear> vals;
    for (const auto& [k, v] : values.items()) {
      if (v.is_string()) vals[parse_word(k, names)] = LogLinear::parse(v.get<std::string>());
      else if (v.is_number() && v.get<double>() == 0.0) vals[parse_word(k, names)] = LogLinear();
      else throw SpecError("exact potentials need string values (or 0) throughout");
    }
    return LocallyConstantPotential(space, static_cast<std::size_t>(range), std::move(vals));
  }
  std::map<Word, double> vals;
  for (const auto& [k, v] : values.items()) vals[parse_word(k, names)] = float_entry(v);
  return LocallyConstantPotential(space, static_cast<std::size_t>(range), std::move(vals));
}

Json to_json(const LocallyConstantPotential& f) {
  Json doc;
  doc["range"] = f.range();
  Json values = Json::object();
  for (const Word& w : f.windows()) {
    const std::string key = format_word(w, f.space().alphabet());
    if (f.exact()) values[key] = f.exact_value(w).to_string();
    else values[key] = f.value(w);
  }
  doc["values"] = values;
  return doc;
}

MarkovMeasure markov_from_json(const Json& doc, std::shared_ptr<const Sft> space) {
  const auto order = get<long long>(doc, "order");
  if (order < 1) throw SpecError("measure order must be >= 1");
  std::vector<Word> states;
  for (const auto& s : get<std::vector<std::string>>(doc, "states")) states.push_back(parse_word(s, space->alphabet()));
  const Json& p = field(doc, "P");
  const Json& pi = field(doc, "pi");
  if (!p.is_array() || !pi.is_array()) throw SpecError("P and pi must be arrays");
  const bool exact = doc.contains("exact") && doc.at("exact").is_boolean() && doc.at("exact").get<bool>();
  if (exact) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& row : p) {
      if (!row.is_array()) throw SpecError("P rows must be arrays");
      std::vector<Rational> r;
      for (const auto& v : row) r.push_back(rational_entry(v));
      rows.push_back(std::move(r));
    }
    std::vector<Rational> st;
    for (const auto& v : pi) st.push_back(rational_entry(v));
    return MarkovMeasure(space, static_cast<std::size_t>(order), std::move(states), std::move(rows), std::move(st));
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : p) {
    if (!row.is_array()) throw SpecError("P rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(float_entry(v));
    rows.push_back(std::move(r));
  }
  std::vector<double> st;
  for (const auto& v : pi) st.push_back(float_entry(v));
  return MarkovMeasure(space, static_cast<std::size_t>(order), std::move(states), std::move(rows), std::move(st));
}

Json to_json(const MarkovMeasure& mu) {
  Json doc;
  doc["order"] = mu.order();
  Json states = Json::array();
  for (const auto& s : mu.states()) states.push_back(format_word(s, mu.space().alphabet()));
  doc["states"] = states;
  if (mu.exact()) {
    Json p = Json::array();
    for (const auto& row : mu.exact_transition()) {
      Json r = Json::array();
      for (const auto& v : row) r.push_back(to_string(v));
      p.push_back(r);
    }
    Json pi = Json::array();
    for (const auto& v : mu.exact_stationary()) pi.push_back(to_string(v));
    doc["P"] = p;
    doc["pi"] = pi;
  } else {
    doc["P"] = mu.transition();
    doc["pi"] = mu.stationary();
  }
  doc["exact"] = mu.exact();
  return doc;
}

SeqTable table_from_json(const Json& doc) {
  SeqKind kind = SeqKind::Imported;
  if (doc.contains("kind")) {
    const std::string k = get<std::string>(doc, "kind");
    if (k == "fiber-sum") kind = SeqKind::FiberSum;
    else if (k == "potential") kind = SeqKind::Potential;
    else if (k != "imported") throw SpecError("unknown table kind '" + k + "'");
  }
  const auto alphabet = get<std::vector<std::string>>(doc, "alphabet");
  const Json& depths = field(doc, "depths");
  if (!depths.is_object()) throw SpecError("depths must be an object");
  const bool exact = doc.contains("exact") && doc.at("exact").is_boolean() && doc.at("exact").get<bool>();
  const std::size_t depth_max = depths.size();
  std::vector<SeqTable::Level> levels(depth_max);
  for (std::size_t n = 1; n <= depth_max; ++n) {
    const std::string key = std::to_string(n);
    if (!depths.contains(key) || !depths.at(key).is_object())
      throw SpecError("depths must be keyed 1..N without gaps; missing " + key);
    std::map<std::uint64_t, std::pair<double, BigInt>> sorted;
    for (const auto& [w, v] : depths.at(key).items()) {
      const Word word = parse_word(w, alphabet);
      if (word.size() != n) throw SpecError("word '" + w + "' has the wrong length for depth " + key);
      BigInt count = 0;
      if (exact) {
        const Json& counts = field(doc, "counts");
        if (!counts.contains(key) || !counts.at(key).contains(w)) throw SpecError("exact table misses count for " + w);
        const Json& c = counts.at(key).at(w);
        try {
          count = c.is_string() ? BigInt(c.get<std::string>()) : BigInt(c.get<long long>());
        } catch (const std::exception&) {
          throw SpecError("count for '" + w + "' is not an integer");
        }
        if (count <= 0) throw SpecError("counts must be positive");
      }
      sorted[encode(word, alphabet.size())] = {float_entry(v), count};
    }
    for (auto& [code, vc] : sorted) {
      levels[n - 1].codes.push_back(code);
      levels[n - 1].log_values.push_back(vc.first);
      if (exact) levels[n - 1].counts.push_back(vc.second);
    }
  }
  std::vector<double> variation;
  if (doc.contains("log_variation")) variation = get<std::vector<double>>(doc, "log_variation");
  return SeqTable(kind, alphabet, std::move(levels), std::move(variation));
}

Json to_json(const SeqTable& t) {
  Json doc;
  doc["kind"] = to_string(t.kind());
  doc["alphabet"] = t.alphabet();
  doc["exact"] = t.exact();
  Json depths = Json::object();
  Json counts = Json::object();
  for (std::size_t n = 1; n <= t.depth_max(); ++n) {
    Json level = Json::object();
    Json clevel = Json::object();
    for (std::size_t i = 0; i < t.size(n); ++i) {
      const std::string w = format_word(t.word(n, i), t.alphabet());
      level[w] = t.log_value(n, i);
      if (t.exact()) clevel[w] = t.count(n, i).str();
    }
    depths[std::to_string(n)] = level;
    if (t.exact()) counts[std::to_string(n)] = clevel;
  }
  doc["depths"] = depths;
  if (t.exact()) doc["counts"] = counts;
  std::vector<double> variation;
  for (std::size_t n = 1; n <= t.depth_max(); ++n)
    if (auto v = t.log_variation(n)) variation.push_back(*v);
  if (!variation.empty()) doc["log_variation"] = variation;
  return doc;
}

}  // namespace thermo
