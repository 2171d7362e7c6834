#pragma once

#include "thermo/io.hpp"
#include "thermo/seq_table.hpp"
#include "thermo/trend.hpp"

#include <optional>
#include <string>

namespace thermo {

struct JobSpec {
  std::string command;
  std::optional<std::string> sft_path;
  std::optional<std::string> factor_path;
  std::optional<std::string> potential_path;
  std::optional<std::string> measure_path;
  std::optional<std::string> table_path;
  std::optional<std::string> h_path;
  std::optional<std::string> word;
  std::size_t depth = 12;
  std::size_t max_period = 6;
  std::size_t range = 1;
  std::optional<std::size_t> n_fit;
  std::optional<std::size_t> gap;
  std::size_t multiples = 4;
  std::size_t max_nm = 4;
  NumericMode mode = NumericMode::Auto;
  double slope_threshold = kDefaultSlopeThreshold;
  bool l_squared = false;
  std::optional<std::string> csv_path;
};

struct CommandResult {
  Json report;
  std::optional<std::string> csv;  // defect profile, profile-cnm only
};

/// Runs one command. SpecError and CapError propagate to the caller.
CommandResult run_command(const JobSpec& job);

}  // namespace thermo
