#include <iostream>

#include <CLI11.hpp>

#include "chronos/admin/commands.hpp"
#include "chronos/sim/scenario.hpp"

using namespace chronos;

namespace {

int run_scenario(const std::string& file, const std::string& out_dir, const std::string& store_dir,
                 std::optional<std::uint64_t> seed, bool summary) {
  std::optional<SignatureStore> store;
  if (!store_dir.empty()) store.emplace(store_dir);
  sim::Scenario sc = sim::parse_scenario(admin::read_text_file(file), store ? &*store : nullptr);
  if (seed) sc.seed = *seed;
  sim::RunOptions opt;
  opt.signatures = sim::scenario_vp_signatures(sc, store ? &*store : nullptr);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    opt.out_dir = out_dir;
  }
  for (const auto& d : sc.defaults_applied) std::cout << "default: " << d << '\n';
  const auto r = sim::run_headless(sc.config, sc.scripted, sc.seed, opt);
  std::cout << "trial " << (r.record.partial ? "aborted (partial record)" : "complete") << '\n';
  for (const auto& f : r.files) std::cout << "  " << f.string() << '\n';
  if (r.report) {
    if (summary) write_report_summary(std::cout, *r.report);
    else write_report_table(std::cout, *r.report);
  }
  return 0;
}

int run_sweep(const std::vector<std::string>& specs, bool figure, std::size_t trials, std::uint64_t seed_base,
              double duration, double coupling, double noise) {
  std::vector<sim::SweepCase> cases;
  if (figure) cases = sim::five_player_topology_cases(duration);
  for (const auto& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("--topology expects NAME=FILE, got '" + s + "'");
    TrialConfig c;
    c.trial_type = TrialType::group;
    c.duration_s = duration;
    c.topology = validate_topology(parse_topology_matrix(admin::read_text_file(s.substr(eq + 1))), TrialType::group);
    cases.push_back({s.substr(0, eq), c, {}});
  }
  if (cases.empty()) throw ValidationError("give --figure or at least one --topology");
  sim::write_sweep_table(std::cout, sim::sweep(cases, trials, seed_base, sim::surrogate_factory(coupling, noise)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Headless trials with scripted players"};
  app.require_subcommand(1);

  std::string scenario, out_dir, store_dir;
  std::optional<std::uint64_t> seed;
  bool summary = false;
  auto* run = app.add_subcommand("run", "run one scenario file");
  run->add_option("scenario", scenario, "scenario file")->required();
  run->add_option("--out", out_dir, "write trial files here");
  run->add_option("--store", store_dir, "signature store directory");
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_flag("--summary", summary, "name/value records instead of tables");

  std::vector<std::string> topo_specs;
  bool figure = false;
  std::size_t trials = 6;
  std::uint64_t seed_base = 100;
  double duration = 30.0, coupling = sim::kDefaultSurrogateCoupling, noise = sim::kDefaultSurrogateNoiseDm;
  auto* sw = app.add_subcommand("sweep", "group index per topology over repeated trials");
  sw->add_option("--topology", topo_specs, "NAME=FILE (repeatable)");
  sw->add_flag("--figure", figure, "the eight five-player topologies (complete, ring, path, star; undirected and directed)");
  sw->add_option("--trials", trials, "trials per topology")->capture_default_str();
  sw->add_option("--seed", seed_base, "trial t uses seed+t")->capture_default_str();
  sw->add_option("--duration", duration, "seconds per trial")->capture_default_str();
  sw->add_option("--coupling", coupling, "surrogate coupling gain")->capture_default_str();
  sw->add_option("--noise", noise, "surrogate position noise std (dm)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (run->parsed()) return run_scenario(scenario, out_dir, store_dir, seed, summary);
    return run_sweep(topo_specs, figure, trials, seed_base, duration, coupling, noise);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
