#pragma once

#include "thermo/factor.hpp"
#include "thermo/markov.hpp"
#include "thermo/potential.hpp"
#include "thermo/seq_table.hpp"
#include "thermo/sft.hpp"

#include <json.hpp>

#include <memory>
#include <string>

namespace thermo {

using Json = nlohmann::ordered_json;

/// Parses a JSON document; malformed input raises SpecError.
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& doc);
void write_text_file(const std::string& path, const std::string& text);

std::shared_ptr<const Sft> sft_from_json(const Json& doc);
Json to_json(const Sft& sft);

/// {"domain": <sft>, "map": {"x": "y", ...}}
OneBlockFactor factor_from_json(const Json& doc);
Json to_json(const OneBlockFactor& pi);

/// {"range": r, "values": {"word": value}}. Values are natural logs, given
/// as numbers or as exact strings like "log(2)" or "1/2*log(3) - log(5)".
LocallyConstantPotential potential_from_json(const Json& doc, std::shared_ptr<const Language> space);
Json to_json(const LocallyConstantPotential& f);

/// {"order", "states", "P", "pi", "exact"}; exact entries are "p/q" strings.
MarkovMeasure markov_from_json(const Json& doc, std::shared_ptr<const Sft> space);
Json to_json(const MarkovMeasure& mu);

/// {"kind", "alphabet", "exact", "depths": {"n": {"word": log value}},
///  "counts": {"n": {"word": "integer"}}, "log_variation": [...]}
SeqTable table_from_json(const Json& doc);
Json to_json(const SeqTable& t);

}  // namespace thermo
