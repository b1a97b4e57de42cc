#include "parrep/config.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace parrep {

using nlohmann::json;
using namespace jsonu;

RunConfig parse_config(const std::string& text) {
    const json j = parse_document(text);
    reject_unknown(j,
                   {"title", "model", "mode", "seed", "t_end", "n_traj", "threads", "x0",
                    "region", "observables", "histogram", "sample_stride", "parrep", "burn_in",
                    "window", "engine", "box_lo", "box_hi", "output_dir"},
                   "$");

    RunConfig cfg;
    if (j.contains("title")) cfg.title = as_string(j["title"], "$.title");
    cfg.model = as_string(require(j, "model", "$"), "$.model");
    cfg.mode = as_string(require(j, "mode", "$"), "$.mode");
    if (cfg.mode != "ssa" && cfg.mode != "parrep" && cfg.mode != "cme" &&
        cfg.mode != "sensitivity")
        throw SchemaError("$.mode", "expected one of ssa, parrep, cme, sensitivity");

    const long seed = as_integer(require(j, "seed", "$"), "$.seed");
    if (seed < 0) throw SchemaError("$.seed", "seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);

    if (cfg.mode != "cme") {
        cfg.t_end = as_number(require(j, "t_end", "$"), "$.t_end");
        if (!(cfg.t_end > 0.0)) throw SchemaError("$.t_end", "t_end must be positive");
    } else if (j.contains("t_end")) {
        cfg.t_end = as_number(j["t_end"], "$.t_end");
    }

    if (j.contains("n_traj")) {
        cfg.n_traj = as_int(j["n_traj"], "$.n_traj");
        if (cfg.n_traj < 1) throw SchemaError("$.n_traj", "n_traj must be at least 1");
    }
    if (j.contains("threads")) {
        cfg.threads = as_int(j["threads"], "$.threads");
        if (cfg.threads < 1) throw SchemaError("$.threads", "threads must be at least 1");
    }
    if (j.contains("x0")) cfg.x0 = as_int_list(j["x0"], "$.x0");

    if (j.contains("region")) {
        const json& r = j["region"];
        reject_unknown(r, {"coordinate", "threshold"}, "$.region");
        RegionMap map;
        map.coordinate = as_int(require(r, "coordinate", "$.region"), "$.region.coordinate");
        map.threshold = as_number(require(r, "threshold", "$.region"), "$.region.threshold");
        cfg.region = map;
    }

    if (j.contains("observables")) {
        const json& obs = j["observables"];
        if (!obs.is_array()) throw SchemaError("$.observables", "expected a list of names");
        for (std::size_t i = 0; i < obs.size(); ++i)
            cfg.observables.push_back(
                as_string(obs[i], "$.observables[" + std::to_string(i) + "]"));
    }

    if (j.contains("histogram")) {
        const json& h = j["histogram"];
        reject_unknown(h, {"species", "lo", "width", "bins"}, "$.histogram");
        HistogramSpec spec;
        spec.species = as_int(require(h, "species", "$.histogram"), "$.histogram.species");
        spec.lo = as_number(require(h, "lo", "$.histogram"), "$.histogram.lo");
        spec.width = as_number(require(h, "width", "$.histogram"), "$.histogram.width");
        spec.bins = as_int(require(h, "bins", "$.histogram"), "$.histogram.bins");
        if (spec.bins < 1) throw SchemaError("$.histogram.bins", "need at least one bin");
        if (!(spec.width > 0.0)) throw SchemaError("$.histogram.width", "width must be positive");
        cfg.histogram = spec;
    }

    if (j.contains("sample_stride")) {
        const double stride = as_number(j["sample_stride"], "$.sample_stride");
        if (!(stride > 0.0))
            throw SchemaError("$.sample_stride", "sample_stride must be positive");
        cfg.sample_stride = stride;
    }

    const bool uses_parrep =
        cfg.mode == "parrep" || (cfg.mode == "sensitivity" && j.contains("engine") &&
                                 j["engine"].is_string() && j["engine"] == "parrep");
    if (j.contains("parrep")) {
        const json& p = j["parrep"];
        reject_unknown(p, {"n_c", "n_p", "replicas", "batch_rounds"}, "$.parrep");
        cfg.parrep.n_c = as_integer(require(p, "n_c", "$.parrep"), "$.parrep.n_c");
        cfg.parrep.n_p = as_integer(require(p, "n_p", "$.parrep"), "$.parrep.n_p");
        cfg.parrep.replicas = as_int(require(p, "replicas", "$.parrep"), "$.parrep.replicas");
        if (p.contains("batch_rounds"))
            cfg.parrep.batch_rounds = as_integer(p["batch_rounds"], "$.parrep.batch_rounds");
        if (cfg.parrep.n_c < 1) throw SchemaError("$.parrep.n_c", "n_c must be at least 1");
        if (cfg.parrep.n_p < 0) throw SchemaError("$.parrep.n_p", "n_p must be nonnegative");
        if (cfg.parrep.replicas < 1)
            throw SchemaError("$.parrep.replicas", "need at least one replica");
        if (cfg.parrep.batch_rounds < 1)
            throw SchemaError("$.parrep.batch_rounds", "batch_rounds must be at least 1");
    } else if (uses_parrep) {
        throw SchemaError("$.parrep", "missing required field");
    }

    if (j.contains("burn_in")) {
        cfg.burn_in = as_number(j["burn_in"], "$.burn_in");
        if (cfg.burn_in < 0.0) throw SchemaError("$.burn_in", "burn_in must be nonnegative");
    }
    if (j.contains("window")) {
        cfg.window = as_number(j["window"], "$.window");
        if (!(cfg.window > 0.0)) throw SchemaError("$.window", "window must be positive");
    }
    if (j.contains("engine")) {
        cfg.engine = as_string(j["engine"], "$.engine");
        if (cfg.engine != "ssa" && cfg.engine != "parrep")
            throw SchemaError("$.engine", "expected ssa or parrep");
    }
    if (cfg.mode == "sensitivity") {
        if (!j.contains("window"))
            throw SchemaError("$.window", "missing required field for sensitivity mode");
        if (cfg.burn_in + cfg.window > cfg.t_end)
            throw SchemaError("$.window", "burn_in + window exceeds t_end");
        if (cfg.n_traj < 2)
            throw SchemaError("$.n_traj", "sensitivity mode needs at least two trajectories");
    }

    if (j.contains("box_lo")) cfg.box_lo = as_int_list(j["box_lo"], "$.box_lo");
    if (j.contains("box_hi")) cfg.box_hi = as_int_list(j["box_hi"], "$.box_hi");
    if (cfg.mode == "cme") {
        if (!cfg.box_lo) throw SchemaError("$.box_lo", "missing required field for cme mode");
        if (!cfg.box_hi) throw SchemaError("$.box_hi", "missing required field for cme mode");
        if (cfg.box_lo->size() != cfg.box_hi->size())
            throw SchemaError("$.box_hi", "box_lo and box_hi lengths differ");
    }

    if (j.contains("output_dir")) cfg.output_dir = as_string(j["output_dir"], "$.output_dir");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace parrep
