#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bnnr/config.hpp"
#include "bnnr/elasticity.hpp"
#include "bnnr/scenarios.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> overrides;
  bool no_timestamp = false;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "path to a key = value config file");
  sub->add_option("--out", args.out_dir, "output directory (created if absent)");
  sub->add_option("--seed", args.seed, "seed for all stochastic estimators");
  sub->add_option("--threads", args.threads, "worker threads for scans")
      ->check(CLI::PositiveNumber);
  sub->add_option("--override", args.overrides, "key=value config override (repeatable)");
  sub->add_flag("--no-timestamp", args.no_timestamp, "omit the timestamp metadata line");
}

int dispatch(const std::string& name, const CommonArgs& args, bool seed_set) {
  bnnr::KeyValueConfig cfg = args.config_path.empty()
                                 ? bnnr::KeyValueConfig{}
                                 : bnnr::KeyValueConfig::from_file(args.config_path);
  for (const auto& kv : args.overrides) cfg.apply_override(kv);

  bnnr::RunContext ctx;
  ctx.out_dir = args.out_dir;
  ctx.seed = args.seed;
  ctx.seed_set = seed_set;
  ctx.threads = args.threads;
  ctx.timestamp = !args.no_timestamp;

  if (name == "modes") return bnnr::run_modes(cfg, ctx);
  if (name == "couplings") return bnnr::run_couplings(cfg, ctx);
  if (name == "scan") return bnnr::run_scan(cfg, ctx);
  if (name == "graph") return bnnr::run_graph(cfg, ctx);
  if (name == "dicke") return bnnr::run_dicke(cfg, ctx);
  if (name == "validate") return bnnr::run_validate(cfg, ctx);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bnnr: flexural-phonon qubit network simulator"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"modes", "mode spectrum of the ribbon"},
      {"couplings", "effective qubit-qubit coupling matrices"},
      {"scan", "steady-state entanglement scans over drive parameters"},
      {"graph", "entanglement and metrology measures versus qubit number"},
      {"dicke", "mean-field superradiance sweeps and critical couplings"},
      {"validate", "reduced model against the retained-mode model"},
  };
  std::vector<CommonArgs> args(subs.size());
  for (size_t i = 0; i < subs.size(); ++i)
    add_common(app.add_subcommand(subs[i].first, subs[i].second), args[i]);

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < subs.size(); ++i) {
    CLI::App* sub = app.get_subcommand(subs[i].first);
    if (!sub->parsed()) continue;
    try {
      return dispatch(subs[i].first, args[i], sub->count("--seed") > 0);
    } catch (const bnnr::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const bnnr::SolverError& e) {
      std::cerr << "solver error: " << e.what() << "\n";
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 3;
    }
  }
  return 2;
}
