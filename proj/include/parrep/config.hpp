#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parrep/accumulator.hpp"
#include "parrep/model.hpp"
#include "parrep/parrep.hpp"
#include "parrep/region.hpp"

namespace parrep {

/// One experiment, fully specified.  The document is JSON; the seed is
/// mandatory (no wall-clock seeding) and unknown keys are rejected with
/// their document path.
struct RunConfig {
    std::string title;
    std::string model;  // built-in name or path to a network definition file
    std::string mode;   // ssa | parrep | cme | sensitivity
    std::uint64_t seed = 0;
    double t_end = 0.0;
    int n_traj = 1;
    int threads = 1;

    std::optional<std::vector<int>> x0;        // default per built-in
    std::optional<RegionMap> region;           // default per built-in
    std::vector<std::string> observables;      // species names or region0/region1
    std::optional<HistogramSpec> histogram;
    std::optional<double> sample_stride;

    ParRepParams parrep;  // n_c, n_p, replicas, batch_rounds (parrep/sensitivity)

    // sensitivity mode
    double burn_in = 0.0;
    double window = 0.0;            // window length; sampling window is [burn_in, burn_in+window]
    std::string engine = "ssa";     // trajectory engine for the sensitivity pipeline

    // cme mode
    std::optional<std::vector<int>> box_lo;
    std::optional<std::vector<int>> box_hi;

    std::string output_dir = ".";
};

/// Parses and validates a configuration document.  SchemaError with the
/// field path on unknown keys, missing mode-required fields, or a missing
/// seed.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

}  // namespace parrep
