// Batch driver: reads a JSON experiment config and writes one CSV table.
//
//   apptsched <subcommand> --config cfg.json [--out table.csv] [--threads k] [--deterministic]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "apptsched/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Appointment scheduling with no-shows: simulation and limit analytics"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path;
  unsigned threads = 0;
  bool deterministic = false;
  for (const auto& name : apptsched::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_path, "CSV output path (overrides the config's 'out'; '-' for stdout)");
    sub->add_option("--threads", threads, "worker threads; 0 = all cores (never changes results)");
    sub->add_flag("--deterministic", deterministic, "omit the timestamp line");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(config_path);
    if (!in) throw apptsched::DomainError("cannot open config '" + config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw apptsched::DomainError(std::string("config is not valid JSON: ") + e.what());
    }
    const apptsched::ExperimentConfig cfg = apptsched::config_from_json(j);
    const std::string target = out_path.empty() ? cfg.out : out_path;
    const apptsched::RunOptions run{threads, deterministic};

    if (target.empty() || target == "-") {
      apptsched::run_experiment(subcommand, cfg, run, std::cout);
    } else {
      std::ostringstream table;
      apptsched::run_experiment(subcommand, cfg, run, table);
      std::ofstream out(target, std::ios::binary);
      if (!out) throw apptsched::DomainError("cannot write '" + target + "'");
      out << table.str();
    }
  } catch (const apptsched::DomainError& e) {
    std::cerr << "apptsched " << subcommand << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const apptsched::NumericalError& e) {
    std::cerr << "apptsched " << subcommand << ": numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
