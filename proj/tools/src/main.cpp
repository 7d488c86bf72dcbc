#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qpmcli/catalog.hpp"
#include "qpmcli/scenario.hpp"
#include "qpmsim/errors.hpp"
#include "qpmsim/version.hpp"

namespace {

enum Exit { ok = 0, failure = 1, schema = 2, domain = 3 };

template <class F>
int guarded(F&& body) {
  try {
    body();
    return ok;
  } catch (const qpm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return schema;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return schema;
  } catch (const qpm::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return domain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
}

std::filesystem::path locate(const std::string& name) {
  const auto catalog =
      qpm::cli::scenario_catalog(qpm::cli::data_dir() / "scenarios", qpm::cli::user_scenario_dirs());
  auto path = qpm::cli::resolve_scenario(name, catalog);
  if (!path) throw qpm::ConfigError("no scenario file or bundled scenario named '" + name + "'");
  return *path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpmsim: chirped-QPM biphoton simulator"};
  app.set_version_flag("--version", std::string("qpmsim ") + qpm::version());
  app.require_subcommand(1);

  std::string scenario_arg;
  std::string out_dir = ".";
  std::size_t points = 0;
  bool seedless = false;
  bool gnuplot = false;
  auto* run = app.add_subcommand("run", "Run a scenario file or bundled scenario");
  run->add_option("scenario", scenario_arg, "Scenario file or bundled name")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--points", points, "Spectral grid points (default 16384)")
      ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 24));
  run->add_flag("--seedless", seedless, "Evenly spaced FFT verification delays");
  run->add_flag("--gnuplot", gnuplot, "Also write gnuplot scripts");

  auto* list = app.add_subcommand("list", "List bundled and user scenarios");

  std::string validate_arg;
  auto* validate = app.add_subcommand("validate", "Check a scenario without running it");
  validate->add_option("scenario", validate_arg, "Scenario file or bundled name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share the schema exit code
    return app.exit(e) == 0 ? ok : schema;
  }

  if (*run) {
    return guarded([&] {
      const auto sc = qpm::cli::load_scenario(locate(scenario_arg));
      qpm::cli::RunOptions opt;
      if (points) opt.points = points;
      opt.seedless = seedless;
      opt.gnuplot = gnuplot;
      const auto result = qpm::cli::run_scenario(sc, opt);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      qpm::cli::write_outputs(result, out_dir);
      std::cout << qpm::cli::summary_text(sc, result);
    });
  }
  if (*list) {
    return guarded([&] {
      const auto catalog = qpm::cli::scenario_catalog(qpm::cli::data_dir() / "scenarios",
                                                      qpm::cli::user_scenario_dirs());
      for (const auto& e : catalog) {
        std::cout << e.name << (e.user ? "  [user]" : "");
        if (!e.description.empty()) std::cout << "  " << e.description;
        std::cout << '\n';
      }
    });
  }
  return guarded([&] {
    const auto sc = qpm::cli::load_scenario(locate(validate_arg));
    qpm::cli::check_scenario(sc);
    std::cout << sc.name << ": ok\n";
  });
}
