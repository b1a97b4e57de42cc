#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "parrep/config.hpp"
#include "parrep/experiment.hpp"

using namespace parrep;

namespace {

std::string source_dir() {
    const char* dir = std::getenv("PARREP_SOURCE_DIR");
    return dir ? dir : ".";
}

const char* kMinimalSsa = R"({
  "model": "schlogl",
  "mode": "ssa",
  "seed": 7,
  "t_end": 10.0
})";

}  // namespace

TEST_CASE("minimal ssa config parses") {
    const RunConfig cfg = parse_config(kMinimalSsa);
    CHECK(cfg.model == "schlogl");
    CHECK(cfg.mode == "ssa");
    CHECK(cfg.seed == 7);
    CHECK(cfg.t_end == 10.0);
    CHECK(cfg.n_traj == 1);
    CHECK(cfg.threads == 1);
}

TEST_CASE("missing seed is a SchemaError") {
    try {
        parse_config(R"({"model": "schlogl", "mode": "ssa", "t_end": 10.0})");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.field_path == "$.seed");
    }
}

TEST_CASE("unknown keys are rejected with their path") {
    try {
        parse_config(R"({"model": "schlogl", "mode": "ssa", "seed": 1, "t_end": 1.0,
                          "parrep": {"n_c": 1, "n_p": 1, "replicas": 2, "bogus": 3}})");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.field_path == "$.parrep.bogus");
    }
}

TEST_CASE("mode-required fields are enforced") {
    CHECK_THROWS_AS(parse_config(R"({"model": "schlogl", "mode": "parrep", "seed": 1,
                                      "t_end": 1.0})"),
                    SchemaError);
    CHECK_THROWS_AS(parse_config(R"({"model": "schlogl", "mode": "cme", "seed": 1})"),
                    SchemaError);
    CHECK_THROWS_AS(parse_config(R"({"model": "schlogl", "mode": "ssa", "seed": 1,
                                      "t_end": 0.0})"),
                    SchemaError);
    CHECK_THROWS_AS(parse_config(R"({"model": "schlogl", "mode": "nonsense", "seed": 1,
                                      "t_end": 1.0})"),
                    SchemaError);
}

TEST_CASE("shipped schlogl-table2.cfg pins the stated settings") {
    const RunConfig cfg = load_config_file(source_dir() + "/configs/schlogl-table2.cfg");
    CHECK(cfg.parrep.n_c == 5000);
    CHECK(cfg.parrep.n_p == 5000);
    CHECK(cfg.parrep.replicas == 100);
    CHECK(cfg.burn_in == 1e5);
    CHECK(cfg.window == 1e5);
    CHECK(cfg.n_traj == 100);
    CHECK(cfg.mode == "sensitivity");
    CHECK(cfg.engine == "parrep");
}

TEST_CASE("every shipped config parses") {
    for (const char* name : {"schlogl-ssa.cfg", "schlogl-parrep.cfg", "schlogl-cme.cfg",
                             "schlogl-table2.cfg", "gsw-table4.cfg"}) {
        CHECK_NOTHROW(load_config_file(source_dir() + "/configs/" + name));
    }
}

TEST_CASE("every reproduce target resolves and pins a full config") {
    for (const std::string& name : reproduce_target_names()) {
        const ReproduceTarget t = reproduce_target(name);
        CHECK(t.name == name);
        CHECK_FALSE(t.header.empty());
        CHECK_FALSE(t.cfg.model.empty());
        CHECK(t.cfg.seed != 0);
    }
    CHECK_THROWS_AS(reproduce_target("nope"), Error);
}

TEST_CASE("run_experiment emits the promised documents") {
    RunConfig cfg = parse_config(kMinimalSsa);
    cfg.t_end = 200.0;
    cfg.n_traj = 3;
    cfg.histogram = HistogramSpec{0, 0.0, 1.0, 150};
    const ExperimentResult result = run_experiment(cfg);
    REQUIRE(result.trajectories.size() == 3);
    REQUIRE(result.documents.count("summary.txt") == 1);
    REQUIRE(result.documents.count("histogram.csv") == 1);

    // histogram probabilities integrate to one
    std::istringstream hist(result.documents.at("histogram.csv"));
    std::string line;
    std::getline(hist, line);  // header
    double total = 0.0;
    while (std::getline(hist, line))
        total += std::stod(line.substr(line.rfind(',') + 1));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("experiment summaries are byte-identical across thread counts") {
    const char* text = R"({
      "model": "schlogl", "mode": "parrep", "seed": 11, "t_end": 300.0, "n_traj": 2,
      "parrep": {"n_c": 200, "n_p": 200, "replicas": 4}
    })";
    RunConfig cfg = parse_config(text);
    const ExperimentResult one = run_experiment(cfg);
    cfg.threads = 4;
    const ExperimentResult four = run_experiment(cfg);
    CHECK(one.documents.at("summary.txt") == four.documents.at("summary.txt"));
}

TEST_CASE("speedup at R = 1 is unity within overhead") {
    const char* text = R"({
      "model": "schlogl", "mode": "parrep", "seed": 3, "t_end": 3000.0, "n_traj": 2,
      "parrep": {"n_c": 500, "n_p": 0, "replicas": 1}
    })";
    const RunConfig cfg = parse_config(text);
    const SpeedupRecord rec = measure_speedup(cfg);
    CHECK(rec.speedup > 0.8);
    CHECK(rec.speedup < 1.25);
    CHECK(rec.serial_wall > 0.0);
    const std::string doc = speedup_document(rec);
    CHECK(doc.find("speedup = ") != std::string::npos);
}

TEST_CASE("cli error classes map to exceptions") {
    // exercised indirectly: resolve_network failure is a plain Error
    CHECK_THROWS_AS(resolve_network("no-such-model"), Error);
}
