#include "thermo/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  thermo::JobSpec job;
  std::string mode = "auto";
  std::optional<std::string> out;

  CLI::App app{"Thermodynamic formalism on shifts of finite type and their one-block factors"};
  app.set_help_flag("--help", "print this help and exit");
  app.add_option("command", job.command, "pressure | fit-h | verdict | weak-gibbs | profile-cnm | certificate")
      ->required()
      ->check(CLI::IsMember({"pressure", "fit-h", "verdict", "weak-gibbs", "profile-cnm", "certificate"}));
  app.add_option("--sft", job.sft_path, "SFT document (identity factor)");
  app.add_option("--factor", job.factor_path, "factor document");
  app.add_option("--potential", job.potential_path, "potential on the domain (default f = 0)");
  app.add_option("--measure", job.measure_path, "Markov measure on the domain");
  app.add_option("--table", job.table_path, "imported sequence table");
  app.add_option("--h", job.h_path, "candidate potential on the image");
  app.add_option("--word", job.word, "image word for certificate");
  app.add_option("--depth", job.depth, "table depth")->check(CLI::PositiveNumber);
  app.add_option("--pmax", job.max_period, "largest orbit period")->check(CLI::PositiveNumber);
  app.add_option("--range", job.range, "range of the fitted h")->check(CLI::PositiveNumber);
  app.add_option("--nfit", job.n_fit, "fitting depth")->check(CLI::PositiveNumber);
  app.add_option("--gap", job.gap, "bridge length cap (default: weak specification number)");
  app.add_option("--j", job.multiples, "orbit multiples for certificate")->check(CLI::PositiveNumber);
  app.add_option("--n", job.max_nm, "largest n, m for the D2 search")->check(CLI::PositiveNumber);
  app.add_option("--threshold", job.slope_threshold, "growth slope threshold (nats per step)");
  app.add_option("--mode", mode, "exact | float | auto")->check(CLI::IsMember({"exact", "float", "auto"}));
  app.add_flag("--l-squared", job.l_squared, "use L^2 in the certificate constant");
  app.add_option("--csv", job.csv_path, "write the defect profile CSV here");
  app.add_option("--out", out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    job.mode = thermo::parse_numeric_mode(mode);
    thermo::CommandResult result = thermo::run_command(job);
    const std::string text = thermo::dump(result.report);
    if (out) thermo::write_text_file(*out, text);
    else std::cout << text;
    if (job.csv_path && result.csv) thermo::write_text_file(*job.csv_path, *result.csv);
  } catch (const thermo::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const thermo::CapError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
