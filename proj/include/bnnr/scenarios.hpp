#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bnnr/config.hpp"
#include "bnnr/coupling.hpp"
#include "bnnr/csv.hpp"
#include "bnnr/elasticity.hpp"

namespace bnnr {

enum class PositionObjective { MaxMinG, SumAbsG };

/// District-constrained placement: qubit k confined to
/// ((k-1)/N + xi, k/N - xi) * L; maximizes the pairwise coherent coupling.
std::vector<double> optimize_positions(int n_qubits, const ModeSpectrum& spectrum, double xi,
                                       PositionObjective objective = PositionObjective::MaxMinG);

/// Reproducible uniform position errors, one sample set per draw; clipped
/// to (0, L).
std::vector<std::vector<double>> mispositioning_sampler(const std::vector<double>& base,
                                                        double dx, int count, std::uint64_t seed,
                                                        double length);

struct RunContext {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  bool timestamp = true;
};

/// Device block of a config file (units in key names).
DeviceConfig device_from_config(const KeyValueConfig& cfg);
/// Qubit block; placement = explicit fractions, "optimize" or "equal_strain".
QubitEnsemble ensemble_from_config(const KeyValueConfig& cfg, const ModeSpectrum& spectrum);

// Subcommand drivers; return process exit code (0 ok, 2 config, 3 solver).
int run_modes(const KeyValueConfig& cfg, const RunContext& ctx);
int run_couplings(const KeyValueConfig& cfg, const RunContext& ctx);
int run_scan(const KeyValueConfig& cfg, const RunContext& ctx);
int run_graph(const KeyValueConfig& cfg, const RunContext& ctx);
int run_dicke(const KeyValueConfig& cfg, const RunContext& ctx);
int run_validate(const KeyValueConfig& cfg, const RunContext& ctx);

/// Ordered parallel map: evaluates f(i) for i in [0, n) on a worker pool,
/// results in index order.
void parallel_for(int n, int threads, const std::function<void(int)>& f);

}  // namespace bnnr
