#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parrep/cme.hpp"
#include "parrep/config.hpp"
#include "parrep/parrep.hpp"
#include "parrep/sensitivity.hpp"

namespace parrep {

/// Resolves cfg.model: a built-in name or a path to a network definition
/// file.
ReactionNetwork resolve_network(const std::string& model);

State default_x0(const ReactionNetwork& net);
RegionMap default_region(const ReactionNetwork& net);

/// Observable list from config names (species names plus region0/region1);
/// defaults to every species population.
std::vector<Observable> build_observables(const ReactionNetwork& net,
                                          const std::vector<std::string>& names,
                                          const RegionMap& region);

struct TrajectoryResult {
    TrajectoryAccumulator acc;
    std::vector<PhaseRecord> phases;  // parrep engine only
};

/// Result of one experiment: per-trajectory accumulators in index order plus
/// the derived report documents, keyed by file name.
struct ExperimentResult {
    std::vector<TrajectoryResult> trajectories;
    std::map<std::string, std::string> documents;
};

/// Runs the configured experiment and materializes its report documents.
/// The summary bytes depend only on (config, seed), never on the thread
/// count; wall-clock readings appear only in the cycle log.
ExperimentResult run_experiment(const RunConfig& cfg);

/// Writes every document of a result under cfg.output_dir.
void write_documents(const ExperimentResult& result, const std::string& output_dir);

struct SpeedupRecord {
    double serial_wall = 0.0;
    double parrep_wall = 0.0;
    int replicas = 0;
    long n_c = 0;
    long n_p = 0;
    double speedup = 0.0;  // serial_wall / parrep_wall
    double decorrelate_wall = 0.0;
    double dephase_wall = 0.0;
    double parallel_wall = 0.0;
    double simulated_time = 0.0;
};

/// Wall-clocks a ParRep run against a plain SSA baseline with identical
/// model, t_end and n_traj.
SpeedupRecord measure_speedup(const RunConfig& cfg);

std::string speedup_document(const SpeedupRecord& rec);

struct ReproduceTarget {
    std::string name;
    std::string header;  // names the table/figure the output mirrors
    RunConfig cfg;
    bool with_cme_curve = false;        // append the stationary CME table
    bool with_cme_sensitivity = false;  // append signed CME sensitivities
};

/// Named presets pinning all parameters of the mirrored experiments:
/// schlogl-fig2, schlogl-fig3, schlogl-table2, schlogl-table3, gsw-table4,
/// gsw-iaf, gsw-fig6.
ReproduceTarget reproduce_target(const std::string& name);

std::vector<std::string> reproduce_target_names();

/// Runs a reproduce preset (after any flag overrides applied to its cfg).
ExperimentResult run_reproduce(const ReproduceTarget& target);

}  // namespace parrep
