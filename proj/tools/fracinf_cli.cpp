#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fracinf/config.hpp"
#include "fracinf/errors.hpp"
#include "fracinf/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Barriers, nested-ball solvers and conditions at infinity for a(x)(-Delta)^s u"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<double> tol;
  bool parallel = false;
  bool print_config = false;

  for (const char* name : {"barriers", "elliptic", "parabolic", "asymptotic", "verify-all"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " scenario");
    sub->add_option("--config", config_path, "flat key = value configuration file");
    sub->add_option("--out", out_dir, "output directory (default: $FRACINF_OUT, then output_dir from the config)");
    sub->add_option("--tol", tol, "convergence tolerance override");
    sub->add_flag("--parallel", parallel, "run independent pipelines concurrently");
    sub->add_flag("--print-config", print_config, "print the normalized configuration and exit");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string kind = app.get_subcommands().front()->get_name();

  try {
    fracinf::ScenarioConfig cfg = config_path.empty() ? fracinf::ScenarioConfig{} : fracinf::load_config(config_path);
    cfg.kind = kind;
    fracinf::validate(cfg);
    if (print_config) {
      std::cout << fracinf::to_string(cfg);
      return 0;
    }
    fracinf::RunSettings settings;
    if (!out_dir.empty()) settings.out_dir = out_dir;
    else if (const char* env = std::getenv("FRACINF_OUT"); env && *env) settings.out_dir = env;
    else settings.out_dir = cfg.output_dir;
    settings.tol = tol;
    settings.parallel = parallel;

    const fracinf::ScenarioResult res = fracinf::run_scenario(cfg, settings);
    std::cout << fracinf::to_text(res.report);
    for (const auto& c : res.report.certificates) {
      if (!c.pass) std::cerr << "failed certificate: " << c.name << "\n";
    }
    std::cout << "wrote " << settings.out_dir.string() << "\n";
    return res.exit_code;
  } catch (const fracinf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fracinf::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
