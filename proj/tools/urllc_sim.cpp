#include "urllc/errors.hpp"
#include "urllc/experiment.hpp"
#include "urllc/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

struct Common
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::string out = "out";
  bool rrc_log = false;
};

void add_common(CLI::App* cmd, Common& c)
{
  cmd->add_option("config", c.config, "Scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Base seed (default: scenario seed)");
  cmd->add_option("--replications", c.replications, "Replications (default: scenario value)")
    ->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_flag("--rrc-log", c.rrc_log, "Also write rrc.csv with every state transition");
}

void print(const urllc::Summary& s)
{
  for (const auto& x : s.series)
    std::cout << x.label << ": " << x.packets << " packets, reliability " << x.reliability << ", p99 "
              << x.p99.ms() << " ms, SE " << x.spectral_efficiency << " bit/s/Hz\n";
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Discrete-event simulator of uplink URLLC access"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario");
  add_common(run_cmd, run_opts);

  Common cmp_opts;
  std::vector<std::string> protocols;
  auto* cmp_cmd = app.add_subcommand("compare", "Run a scenario once per access scheme on common random numbers");
  add_common(cmp_cmd, cmp_opts);
  cmp_cmd->add_option("--protocols", protocols, "Comma-separated schemes: GFMA, FGMA, FGMA-SPS, FourWay")
    ->required()
    ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    const Common& c = run_cmd->parsed() ? run_opts : cmp_opts;
    auto scenario = urllc::load_scenario(c.config);
    const std::uint64_t seed = c.seed.value_or(scenario.seed);
    if (c.replications)
      scenario.replications = *c.replications;

    urllc::ExperimentResult result;
    if (run_cmd->parsed()) {
      result = urllc::run_experiment(scenario, seed, scenario.replications, c.rrc_log);
    } else {
      std::vector<urllc::Scheme> schemes;
      for (const auto& p : protocols) {
        auto s = urllc::parse_scheme(p);
        if (!s)
          throw urllc::Error("unknown protocol '" + p + "'");
        schemes.push_back(*s);
      }
      result = urllc::compare(scenario, schemes, seed, scenario.replications, c.rrc_log);
    }
    urllc::write_outputs(c.out, scenario, seed, result, c.rrc_log);
    print(result.summary);
    return 0;
  } catch (const urllc::ValidationError& e) {
    std::cerr << "error: invalid scenario\n";
    for (const auto& v : e.violations())
      std::cerr << "  " << v << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
