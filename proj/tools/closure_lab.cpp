#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "closure/cli/pipeline.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"closure-lab: closure verdicts for foliated spacetimes"};
  app.require_subcommand(1, 1);

  closure::PipelineOptions opt;
  std::string spec_path;
  std::string out_dir;
  std::string profile;

  const std::pair<const char*, const char*> commands[] = {
      {"parameters", "q, Hubble and pressure parameters over analysis.t_range"},
      {"verdict", "closure verdicts of the leaf at t0"},
      {"diameter", "diameter oracle of the leaf at t0"},
      {"bm-check", "Bonnet-Myers certificate for the [bm] inputs"},
      {"identities", "invariant suites; exit 4 when one fails"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--spec", spec_path, "spacetime spec file")->required();
    sub->add_option("--out", out_dir, "directory for report.json and series.csv");
    sub->add_option("--refine", opt.refine, "doubles direction, source and sphere budgets N times");
    sub->add_option("--tolerance-profile", profile)->check(CLI::IsMember({"analytic", "fd"}));
    if (std::string(name) == "verdict")
      sub->add_option("--theorem", opt.theorem)->check(CLI::IsMember({"13", "14", "15", "generic", "all"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  opt.command = app.get_subcommands().front()->get_name();
  if (!profile.empty()) opt.toleranceProfile = profile;

  try {
    const closure::SpacetimeSpec spec = closure::load_spec(spec_path);
    const closure::PipelineResult res = closure::run_pipeline(spec, opt);
    const std::string json = closure::dump_report(res.report);
    if (out_dir.empty()) {
      std::cout << json;
    } else {
      fs::create_directories(out_dir);
      closure::write_atomic(fs::path(out_dir) / "report.json", json);
      if (!res.csv.empty()) closure::write_atomic(fs::path(out_dir) / "series.csv", res.csv);
    }
    if (res.exitCode != 0) {
      if (res.report.contains("failures"))
        for (const auto& f : res.report["failures"]) std::cerr << "invariant failed: " << f.get<std::string>() << '\n';
      else
        std::cerr << "hypothesis check failed\n";
    }
    return res.exitCode;
  } catch (const closure::Error& e) {
    std::cerr << "error [" << closure::to_string(e.kind()) << "]: " << e.message() << '\n';
    return closure::exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error [io]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
