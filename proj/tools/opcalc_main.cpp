#include "opcalc/errors.hpp"
#include "opcalc/scenarios.hpp"

#include <CLI11.hpp>

#include <ctime>
#include <fstream>
#include <future>
#include <iostream>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

opcalc::Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw opcalc::InvalidArgument("cannot open config file " + path);
  try {
    return opcalc::Json::parse(in);
  } catch (const opcalc::Json::parse_error& e) {
    throw opcalc::InvalidArgument("config " + path + ": " + e.what());
  }
}

struct Outcome {
  opcalc::VerdictReport report;
  std::string error;
};

Outcome run_one(const std::string& name, const opcalc::ScenarioOptions& options, const std::filesystem::path& dir,
                const std::string& timestamp) {
  Outcome o;
  try {
    o.report = opcalc::run_scenario(name, options, dir);
    opcalc::write_report(o.report, dir, timestamp);
  } catch (const opcalc::InvalidArgument& e) {
    o.error = e.what();
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator calculus toolkit: resolvents, averages, fixed-point diagnostics, set calculus"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the built-in scenarios");

  auto* run = app.add_subcommand("run", "Run scenarios and write report.json plus CSV artifacts");
  std::vector<std::string> names;
  std::string config_path;
  std::string out = "opcalc-out";
  opcalc::ScenarioOptions options;
  std::size_t iters = 0;
  double grid_h = 0, window = 0, tol = 0;
  std::uint64_t seed = 0;
  bool parallel = false;
  std::vector<std::string> positional;
  run->add_option("names", positional, "Scenario names (\"all\" runs every preset)");
  run->add_option("--scenario", names, "Scenario name; repeatable");
  run->add_option("--config", config_path, "JSON config: scenario name and parameters")->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory; each scenario writes into <out>/<scenario>")
      ->capture_default_str();
  auto* o_iters = run->add_option("--iters", iters, "Iteration budget or sample count")->check(CLI::PositiveNumber);
  auto* o_h = run->add_option("--grid-h", grid_h, "Grid cell size")->check(CLI::PositiveNumber);
  auto* o_window = run->add_option("--window", window, "Sampling or clipping window half-width")
                       ->check(CLI::PositiveNumber);
  auto* o_tol = run->add_option("--tol", tol, "Principal tolerance of the scenario")->check(CLI::PositiveNumber);
  auto* o_seed = run->add_option("--seed", seed, "Random seed");
  run->add_flag("--parallel", parallel, "Run the scenarios concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  names.insert(names.end(), positional.begin(), positional.end());
  if (list->parsed()) {
    for (const auto& s : opcalc::list_scenarios()) std::cout << s.name << "  " << s.description << '\n';
    return 0;
  }

  try {
    if (!config_path.empty()) {
      options.config = read_config(config_path);
      if (!options.config.is_object()) throw opcalc::InvalidArgument("config must be a JSON object");
      if (const auto it = options.config.find("scenario"); it != options.config.end() && names.empty()) {
        if (!it->is_string()) throw opcalc::InvalidArgument("config field 'scenario' must be a string");
        names.push_back(it->get<std::string>());
      }
    }
  } catch (const opcalc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (o_iters->count()) options.iters = iters;
  if (o_h->count()) options.grid_h = grid_h;
  if (o_window->count()) options.window = window;
  if (o_tol->count()) options.tol = tol;
  if (o_seed->count()) options.seed = seed;

  if (names.size() == 1 && names.front() == "all") {
    names.clear();
    for (const auto& s : opcalc::list_scenarios())
      if (s.name != "custom") names.push_back(s.name);
  }
  if (names.empty()) {
    std::cerr << "error: no scenario given (see `opcalc list`)\n";
    return kExitUsage;
  }
  for (const auto& n : names)
    if (!opcalc::has_scenario(n)) {
      std::cerr << "error: unknown scenario '" << n << "' (see `opcalc list`)\n";
      return kExitUsage;
    }

  const std::string timestamp = utc_timestamp();
  std::vector<Outcome> outcomes;
  if (parallel) {
    std::vector<std::future<Outcome>> jobs;
    for (const auto& n : names)
      jobs.push_back(std::async(std::launch::async, run_one, n, options, std::filesystem::path(out) / n, timestamp));
    for (auto& j : jobs) outcomes.push_back(j.get());
  } else {
    for (const auto& n : names) outcomes.push_back(run_one(n, options, std::filesystem::path(out) / n, timestamp));
  }

  bool usage_error = false, failed = false;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.error.empty()) {
      std::cerr << "error: " << names[i] << ": " << o.error << '\n';
      usage_error = true;
      continue;
    }
    for (const auto& c : o.report.checks)
      std::cout << (c.passed ? "PASS" : "FAIL") << "  " << names[i] << ": " << c.name << '\n';
    std::cout << (o.report.passed() ? "ok    " : "FAILED ") << names[i] << " -> "
              << (std::filesystem::path(out) / names[i] / "report.json").string() << '\n';
    failed = failed || !o.report.passed();
  }
  if (usage_error) return kExitUsage;
  return failed ? kExitFail : 0;
}
