// Command-line driver: run configured experiments, reproduce named presets,
// measure speedup, and export built-in models.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "parrep/config.hpp"
#include "parrep/experiment.hpp"
#include "parrep/model_io.hpp"

namespace {

using namespace parrep;

struct Overrides {
    std::optional<std::string> model;
    std::optional<std::string> mode;
    std::optional<std::string> engine;
    std::optional<long> seed;
    std::optional<double> t_end;
    std::optional<int> n_traj;
    std::optional<int> threads;
    std::optional<long> n_c;
    std::optional<long> n_p;
    std::optional<int> replicas;
    std::optional<double> burn_in;
    std::optional<double> window;
    std::optional<std::string> out;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--model", ov.model, "built-in name or network definition file");
    cmd->add_option("--mode", ov.mode, "ssa | parrep | cme | sensitivity");
    cmd->add_option("--engine", ov.engine, "trajectory engine for sensitivity mode");
    cmd->add_option("--seed", ov.seed, "RNG seed (mandatory; no wall-clock seeding)");
    cmd->add_option("--t-end", ov.t_end, "simulated time horizon");
    cmd->add_option("--n-traj", ov.n_traj, "number of independent trajectories");
    cmd->add_option("--threads", ov.threads, "worker threads (does not affect results)");
    cmd->add_option("--n-c", ov.n_c, "decorrelation threshold");
    cmd->add_option("--n-p", ov.n_p, "dephasing threshold");
    cmd->add_option("--replicas", ov.replicas, "replica count R");
    cmd->add_option("--burn-in", ov.burn_in, "burn-in before the sampling window");
    cmd->add_option("--window", ov.window, "sampling window length");
    cmd->add_option("--out", ov.out, "output directory");
}

void apply(const Overrides& ov, RunConfig& cfg) {
    if (ov.model) cfg.model = *ov.model;
    if (ov.mode) cfg.mode = *ov.mode;
    if (ov.engine) cfg.engine = *ov.engine;
    if (ov.seed) cfg.seed = static_cast<std::uint64_t>(*ov.seed);
    if (ov.t_end) cfg.t_end = *ov.t_end;
    if (ov.n_traj) cfg.n_traj = *ov.n_traj;
    if (ov.threads) cfg.threads = *ov.threads;
    if (ov.n_c) cfg.parrep.n_c = *ov.n_c;
    if (ov.n_p) cfg.parrep.n_p = *ov.n_p;
    if (ov.replicas) cfg.parrep.replicas = *ov.replicas;
    if (ov.burn_in) cfg.burn_in = *ov.burn_in;
    if (ov.window) cfg.window = *ov.window;
    if (ov.out) cfg.output_dir = *ov.out;
    if (!(cfg.t_end > 0.0) && cfg.mode != "cme") throw Error("t_end must be positive");
}

const char* error_class(const Error& e) {
    if (dynamic_cast<const SchemaError*>(&e)) return "SchemaError";
    if (dynamic_cast<const AllReplicasExitedError*>(&e)) return "AllReplicasExitedError";
    if (dynamic_cast<const EmptyWindowError*>(&e)) return "EmptyWindowError";
    if (dynamic_cast<const InsufficientSamplesError*>(&e)) return "InsufficientSamplesError";
    if (dynamic_cast<const NegativeQuadraticFormError*>(&e)) return "NegativeQuadraticFormError";
    if (dynamic_cast<const ReducibleError*>(&e)) return "ReducibleError";
    if (dynamic_cast<const BoxTooSmallError*>(&e)) return "BoxTooSmallError";
    if (dynamic_cast<const SingularSystemError*>(&e)) return "SingularSystemError";
    return "Error";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parallel-replica simulation of bistable reaction networks"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;
    std::string target_name;
    std::string model_name;

    CLI::App* run = app.add_subcommand("run", "run an experiment from a configuration file");
    run->add_option("--config", config_path, "configuration document")->required();
    add_override_flags(run, ov);

    CLI::App* repro = app.add_subcommand("reproduce", "run a named preset");
    repro->add_option("target", target_name, "preset name")->required();
    add_override_flags(repro, ov);

    CLI::App* speed = app.add_subcommand("speedup", "wall-clock ParRep against plain SSA");
    speed->add_option("--config", config_path, "parrep configuration document")->required();
    add_override_flags(speed, ov);

    CLI::App* exp = app.add_subcommand("export-model", "write a built-in model definition");
    exp->add_option("name", model_name, "built-in model name")->required();
    exp->add_option("--out", ov.out, "output file (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            RunConfig cfg = load_config_file(config_path);
            apply(ov, cfg);
            const ExperimentResult result = run_experiment(cfg);
            write_documents(result, cfg.output_dir);
            for (const auto& [name, text] : result.documents)
                std::cout << "wrote " << cfg.output_dir << "/" << name << "\n";
        } else if (repro->parsed()) {
            ReproduceTarget target = reproduce_target(target_name);
            apply(ov, target.cfg);
            const ExperimentResult result = run_reproduce(target);
            write_documents(result, target.cfg.output_dir);
            for (const auto& [name, text] : result.documents)
                std::cout << "wrote " << target.cfg.output_dir << "/" << name << "\n";
        } else if (speed->parsed()) {
            RunConfig cfg = load_config_file(config_path);
            apply(ov, cfg);
            const SpeedupRecord rec = measure_speedup(cfg);
            const std::string doc = speedup_document(rec);
            ExperimentResult result;
            result.documents["speedup.txt"] = doc;
            write_documents(result, cfg.output_dir);
            std::cout << doc;
        } else if (exp->parsed()) {
            const auto net = builtin_network(model_name);
            if (!net) throw Error("unknown built-in model '" + model_name + "'");
            const std::string text = export_network(*net);
            if (ov.out) {
                std::ofstream out(*ov.out, std::ios::binary);
                if (!out) throw Error("cannot write " + *ov.out);
                out << text;
            } else {
                std::cout << text;
            }
        }
    } catch (const Error& e) {
        std::cerr << "{\"error\": \"" << error_class(e) << "\", \"message\": \"" << e.what()
                  << "\"}\n";
        return dynamic_cast<const SchemaError*>(&e) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"InternalError\", \"message\": \"" << e.what() << "\"}\n";
        return 3;
    }
    return 0;
}
