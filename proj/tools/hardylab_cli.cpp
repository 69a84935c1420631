#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hardylab/experiments/registry.hpp"

namespace {

namespace ex = hardylab::experiments;

constexpr int kExitConfig = 2;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw hardylab::IoError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct RunArgs {
  std::string experiment;
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool has_seed = false;
  bool allow_unconverged = false;
  double tol_scale = 1.0;
  int jobs = 1;
  bool timing = false;
  bool quiet = false;
};

int run(const RunArgs& a) {
  nlohmann::json doc = nlohmann::json::object();
  if (!a.config_path.empty()) doc = ex::parse_json_text(read_file(a.config_path));
  std::string name = a.experiment;
  if (name.empty()) {
    if (!doc.is_object() || !doc.contains("experiment") || !doc["experiment"].is_string())
      throw hardylab::ConfigError("no experiment given; use --experiment or an 'experiment' field");
    name = doc["experiment"].get<std::string>();
  }
  if (doc.is_object()) doc["experiment"] = name;
  auto cfg = ex::resolve_config(name, doc);
  if (a.has_seed) cfg.seed = a.seed;
  if (!a.out.empty()) cfg.output = a.out;

  ex::RunOptions opt;
  opt.jobs = a.jobs;
  opt.tol_scale = a.tol_scale;
  opt.allow_unconverged = a.allow_unconverged;
  opt.timing = a.timing;
  std::mutex m;
  std::size_t last_pct = 0;
  if (!a.quiet) {
    opt.progress = [&](std::size_t done, std::size_t total) {
      std::lock_guard lock(m);
      const std::size_t pct = total == 0 ? 100 : 100 * done / total;
      if (pct / 10 > last_pct / 10 || done == total) {
        last_pct = pct;
        std::cerr << name << ": " << done << "/" << total << " tasks\n";
      }
    };
  }

  const auto report = ex::run_experiment(cfg, opt);
  if (cfg.output == "-") {
    std::cout << ex::to_json_text(report);
  } else if (!cfg.output.empty()) {
    ex::emit(report, ex::Format::Csv, cfg.output + ".csv");
    ex::emit(report, ex::Format::Json, cfg.output + ".json");
  }
  const int status = ex::exit_status(report, a.allow_unconverged);
  std::ostream& log = cfg.output == "-" ? std::cerr : std::cout;
  log << name << ": " << (status == 0 ? "pass" : status == 1 ? "FAIL" : "UNCONVERGED") << " (" << report.rows.size()
      << " rows, " << report.summary.failed_rows << " failed, " << report.summary.unconverged_rows
      << " unconverged, worst margin " << ex::format_number(report.summary.worst_margin) << ")\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Hardy-type inequalities on the half-space"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List experiments and the claims they check");
  auto* show = app.add_subcommand("show", "Print an experiment's claim, tolerance and default configuration");
  std::string show_name;
  show->add_option("experiment", show_name, "Experiment name")->required();

  auto* runc = app.add_subcommand("run", "Run an experiment");
  RunArgs a;
  runc->add_option("-e,--experiment", a.experiment, "Experiment name");
  runc->add_option("-c,--config", a.config_path, "JSON configuration file");
  runc->add_option("-o,--out", a.out, "Output prefix for .csv and .json reports, or '-' for JSON on stdout");
  auto* seed = runc->add_option("--seed", a.seed, "Random seed");
  runc->add_flag("--allow-unconverged", a.allow_unconverged, "Do not fail on unconverged quadrature");
  runc->add_option("--tol-scale", a.tol_scale, "Multiplier for every tolerance")->check(CLI::PositiveNumber);
  runc->add_option("-j,--jobs", a.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  runc->add_flag("--timing", a.timing, "Record wall-clock runtime in the report");
  runc->add_flag("-q,--quiet", a.quiet, "No progress on stderr");

  try {
    app.parse(argc, argv);
    a.has_seed = seed->count() > 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (list->parsed()) {
      std::size_t w = 0;
      for (const auto& e : ex::registry()) w = std::max(w, e.name.size());
      for (const auto& e : ex::registry()) std::cout << e.name << std::string(w + 2 - e.name.size(), ' ') << e.claim << "\n";
      return 0;
    }
    if (show->parsed()) {
      const auto& e = ex::find_experiment(show_name);
      std::cout << e.name << "\n\nclaim: " << e.claim << "\ntolerance: " << e.tolerance << "\n\ndefault configuration:\n"
                << ex::to_json(e.defaults()).dump(2) << "\n";
      return 0;
    }
    return run(a);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
