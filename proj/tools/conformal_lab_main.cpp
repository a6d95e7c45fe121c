#include <CLI11.hpp>
#include <cstdio>
#include <fstream>

#include "conflab/cli/experiments.hpp"

// Experiment runner. `conformal-lab run <experiment> [--flags]` executes one
// named experiment and writes report.json (+ timing.json, checks.csv) to the
// output directory; `conformal-lab suite fast|full` runs everything and exits
// nonzero on any failed check.

int main(int argc, char** argv) {
  CLI::App app{"conformal-lab: numerical experiments for conformally invariant variational problems"};
  app.require_subcommand(1);

  std::string experiment, config_path, outdir = "out", format = "json";
  int level = -1, grid = -1, corpus = -1, potentials = -1;
  unsigned seed = 7;
  double lambda = -1, amplitude = -1;
  std::string surface, curve;
  bool fast = false;

  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("experiment", experiment, "experiment name")->required();
  run->add_option("--config", config_path, "JSON config file (flat keys)");
  run->add_option("--out", outdir, "output directory");
  run->add_option("--level", level, "disc mesh refinement level");
  run->add_option("--grid", grid, "periodic grid size");
  run->add_option("--seed", seed, "corpus seed");
  run->add_option("--corpus", corpus, "corpus size");
  run->add_option("--potentials", potentials, "number of random potentials");
  run->add_option("--lambda", lambda, "bubble concentration parameter");
  run->add_option("--amplitude", amplitude, "potential amplitude");
  run->add_option("--surface", surface, "surface selection");
  run->add_option("--curve", curve, "curve preset");
  run->add_option("--format", format, "json|csv");
  run->add_flag("--fast", fast, "reduced levels and tolerances");

  std::string which = "fast";
  auto* suite = app.add_subcommand("suite", "run the whole experiment battery");
  suite->add_option("which", which, "fast|full")->required();
  suite->add_option("--out", outdir, "output directory");
  suite->add_option("--seed", seed, "corpus seed");

  auto* list = app.add_subcommand("list", "list experiment names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& n : conflab::cli::experiment_names()) std::printf("%s\n", n.c_str());
      return 0;
    }
    if (run->parsed()) {
      nlohmann::json cfg;
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw std::runtime_error("cannot open config " + config_path);
        f >> cfg;
      } else {
        cfg = conflab::cli::default_config(experiment);
      }
      cfg["experiment"] = experiment;
      cfg["seed"] = seed;
      if (level >= 0) cfg["level"] = level;
      if (grid >= 0) cfg["grid"] = grid;
      if (corpus >= 0) cfg["corpus"] = corpus;
      if (potentials >= 0) cfg["potentials"] = potentials;
      if (lambda >= 0) cfg["lambda"] = lambda;
      if (amplitude >= 0) cfg["amplitude"] = amplitude;
      if (!surface.empty()) cfg["surface"] = surface;
      if (!curve.empty()) cfg["curve"] = curve;
      if (fast) cfg["fast"] = true;
      conflab::cli::Report rep = conflab::cli::run_experiment(cfg);
      conflab::cli::write_report(rep, outdir);
      for (const auto& c : rep.checks)
        std::printf("[%s] %-32s value=%.6g tol=%.3g\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.value, c.tol);
      std::printf("%s: %s (%.0f ms), report in %s/report.json\n", rep.name.c_str(),
                  rep.pass ? "PASS" : "FAIL", rep.wall_ms, outdir.c_str());
      return rep.pass ? 0 : 1;
    }
    // suite
    auto reports = conflab::cli::run_suite(which, seed, outdir);
    bool ok = true;
    for (const auto& r : reports) {
      std::printf("[%s] %-20s (%d checks, %.0f ms)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                  int(r.checks.size()), r.wall_ms);
      ok = ok && r.pass;
    }
    std::printf("suite %s: %s\n", which.c_str(), ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
