#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "scenario.hpp"

namespace {

using namespace opoqed::cli;

struct Flags {
  std::string preset;
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> omega_max;
  std::optional<int> omega_points;
  std::optional<int> n_max;
  std::string channel;
  bool gnuplot = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--preset", f.preset, "figure preset (fig2 ... fig17)");
  sub->add_option("--config", f.config, "flat JSON config file");
  sub->add_option("--out", f.out, "output directory")->capture_default_str();
  sub->add_option("--seed", f.seed, "trajectory seed");
  sub->add_option("--omega-max", f.omega_max, "half width of the frequency grid");
  sub->add_option("--omega-points", f.omega_points, "number of frequency points");
  sub->add_option("--n-max", f.n_max, "Fock truncation (total quanta)");
  sub->add_option("--channel", f.channel, "transmitted or fluorescent")
      ->check(CLI::IsMember({"transmitted", "fluorescent"}));
  sub->add_flag("--gnuplot", f.gnuplot, "also write a gnuplot script");
}

ScenarioConfig resolve(const Flags& f, const std::string& sub) {
  ScenarioConfig c = f.preset.empty() ? ScenarioConfig{} : config_from_preset(f.preset);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot read config file " + f.config);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (!f.preset.empty()) {
      // The command line preset wins over one named in the file.
      auto j = nlohmann::ordered_json::parse(text, nullptr, false);
      if (j.is_object() && j.contains("preset")) {
        j.erase("preset");
        text = j.dump();
      }
    }
    c = apply_json(c, text);
  }
  if (f.seed) c.seed = *f.seed;
  if (f.omega_max) c.omega_max = *f.omega_max;
  if (f.omega_points) c.omega_points = *f.omega_points;
  if (f.n_max) {
    c.params.n_max = *f.n_max;
    c.n_max_explicit = true;
  }
  if (!f.channel.empty()) {
    c.channel = f.channel == "fluorescent" ? opoqed::SpectrumChannel::fluorescent
                                           : opoqed::SpectrumChannel::transmitted;
  }
  if (f.gnuplot) c.gnuplot = true;

  if (sub == "spectrum") {
    c.task = c.channel == opoqed::SpectrumChannel::fluorescent ? Task::fluorescent : Task::transmitted;
  } else if (sub == "squeeze") {
    c.task = Task::squeezing;
  } else if (sub == "scaling") {
    c.task = Task::scaling;
  } else if (sub == "trajectory") {
    c.task = Task::trajectory;
  } else if (sub == "conditioned") {
    c.task = Task::conditioned;
  } else if (sub == "validate") {
    c.task = Task::validate;
  }
  c.check();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opoqed: two-level atom in a degenerate parametric oscillator"};
  app.require_subcommand(1);
  Flags flags;
  const char* subs[][2] = {
      {"spectrum", "incoherent spectrum (transmitted or fluorescent) with squeezing columns"},
      {"squeeze", "squeezing spectra and the incoherent/squeezing identity"},
      {"scaling", "weak-field scaling exponents of the steady state"},
      {"trajectory", "quantum trajectories and ensemble averages"},
      {"conditioned", "photon number conditioned on a cavity emission"},
      {"validate", "oracle, dual-path, identity and scaling checks"},
      {"run", "run the task a preset or config declares"},
  };
  for (const auto& s : subs) add_common(app.add_subcommand(s[0], s[1]), flags);
  app.add_subcommand("presets", "list the figure presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->get_name() == "presets") {
    std::cout << presets_table();
    return 0;
  }

  ScenarioConfig config;
  try {
    config = resolve(flags, sub->get_name());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  try {
    result = run_scenario(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  try {
    write_outputs(flags.out, config, result, wall);
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return 3;
  }
  if (result.exit_code != 0) {
    std::cerr << result.message << '\n';
    return result.exit_code;
  }
  std::cout << to_string(config.task) << ": wrote " << result.files.size() + 1 << " files to " << flags.out
            << '\n';
  return 0;
}
