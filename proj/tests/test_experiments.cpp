#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "billiards/errors.hpp"
#include "billiards/experiments.hpp"

using namespace billiards;
namespace bexp = billiards::experiments;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / "billiards_tests" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json minimal_mean_chord(const std::string& out) {
    return {{"experiment", "mean-chord"},
            {"domain", "builtin:unit-disk"},
            {"n", 5000},
            {"seed", 42},
            {"replicas", 2},
            {"out", out}};
}

}  // namespace

TEST_CASE("builtin domains all construct") {
    const auto names = bexp::builtin_domain_names();
    REQUIRE(names.size() == 7);
    for (const auto& name : names) {
        const Domain d = bexp::domain_from_json(bexp::builtin_domain_json(name));
        CHECK(d.measures().volume > 0.0);
        CHECK(d.boundary_measure() > 0.0);
    }
    CHECK_THROWS_AS(bexp::builtin_domain_json("moebius-strip"), ConfigError);
}

TEST_CASE("domains load from builtin names, inline objects, and files") {
    const Domain a = bexp::domain_from_json(json("builtin:annulus-1-2"));
    CHECK(a.component_count() == 2);

    const Domain b = bexp::domain_from_json(
        json{{"type", "disk"}, {"radius", 2.5}, {"center", {1.0, 0.0}}});
    CHECK(b.measures().surface == doctest::Approx(2 * 3.14159265358979 * 2.5));

    const fs::path dir = scratch_dir("domain_file");
    const fs::path file = dir / "shape.json";
    std::ofstream(file) << R"({"type": "sphere", "radius": 1.0})";
    const Domain c = bexp::domain_from_json(json(file.string()));
    CHECK(c.dim() == 3);

    CHECK_THROWS_AS(bexp::domain_from_json(json("no/such/file.json")), ConfigError);
    CHECK_THROWS_AS(bexp::domain_from_json(json{{"type", "torus"}}), ConfigError);
    CHECK_THROWS_AS(bexp::domain_from_json(json{{"type", "disk"}}), ConfigError);
}

TEST_CASE("invalid geometry is rejected at the domain layer") {
    // bowtie self-intersection
    const json bowtie = {{"type", "polygon2d"},
                         {"vertices", {{0, 0}, {1, 1}, {1, 0}, {0, 1}}}};
    CHECK_THROWS_AS(bexp::domain_from_json(bowtie), GeometryError);
}

TEST_CASE("laws load from strings and objects") {
    CHECK(bexp::law_from_json(json("cosine"), 2).kind() == LawKind::cosine);
    CHECK(bexp::law_from_json(json("uniform"), 3).kind() ==
          LawKind::uniform_hemisphere);
    const json custom = {{"law", "custom"},
                         {"custom_pdf", {{0.0, 1.0}, {0.7, 2.0}, {1.5, 0.5}}}};
    CHECK(bexp::law_from_json(custom, 2).kind() == LawKind::custom_angular);

    CHECK_THROWS_AS(bexp::law_from_json(json("specular"), 2), ConfigError);
    CHECK_THROWS_AS(bexp::law_from_json(json{{"law", "custom"}}, 2), ConfigError);
    const json bad = {{"law", "custom"}, {"custom_pdf", {{0.5, 1.0}, {1.0, 1.0}}}};
    CHECK_THROWS_AS(bexp::law_from_json(bad, 2), ConfigError);
}

TEST_CASE("config validation names the offending field") {
    json cfg = minimal_mean_chord("unused");
    cfg["experiment"] = "teleportation";
    try {
        bexp::resolve_config(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("experiment") != std::string::npos);
        CHECK(msg.find("teleportation") != std::string::npos);
    }

    json small = minimal_mean_chord("unused");
    small["n"] = 10;
    CHECK_THROWS_AS(bexp::resolve_config(small), ConfigError);

    json typo = minimal_mean_chord("unused");
    typo["sede"] = 7;
    CHECK_THROWS_AS(bexp::resolve_config(typo), ConfigError);

    json bad_param = {{"experiment", "walk-stationarity"},
                      {"domain", "builtin:unit-disk"},
                      {"n", 60000},
                      {"params", {{"bisn", 50}}}};
    CHECK_THROWS_AS(bexp::resolve_config(bad_param), ConfigError);

    json no_n = {{"experiment", "mean-chord"}, {"domain", "builtin:unit-disk"}};
    CHECK_THROWS_AS(bexp::resolve_config(no_n), ConfigError);
}

TEST_CASE("experiment-specific constraints") {
    // bertrand requires a disk
    json b = {{"experiment", "bertrand"},
              {"domain", "builtin:unit-square"},
              {"n", 5000}};
    CHECK_THROWS_AS(bexp::resolve_config(b), ConfigError);

    // induced chords: subdomain must sit inside the domain
    json ind = {{"experiment", "induced-chords"},
                {"domain", "builtin:unit-disk"},
                {"n", 5000},
                {"params",
                 {{"subdomain", {{"type", "disk"}, {"radius", 5.0}, {"center", {0, 0}}}}}}};
    CHECK_THROWS_AS(bexp::resolve_config(ind), GeometryError);

    // crossings: surface must stay inside the domain
    json cr = {{"experiment", "crossings"},
               {"domain", "builtin:unit-disk"},
               {"n", 5000},
               {"params",
                {{"surface", {{"segments", {{{-3.0, 0.0}, {3.0, 0.0}}}}}}}}};
    CHECK_THROWS_AS(bexp::resolve_config(cr), GeometryError);

    // reversal needs an even velocity binning
    json rev = {{"experiment", "reversal"},
                {"domain", "builtin:unit-disk"},
                {"n", 80000},
                {"params", {{"velocity_bins", 15}}}};
    CHECK_THROWS_AS(bexp::resolve_config(rev), ConfigError);
}

TEST_CASE("cli overrides replace config values") {
    const json cfg = minimal_mean_chord("orig");
    bexp::CliOverrides ov;
    ov.seed = 777;
    ov.out_dir = "replaced";
    ov.replicas = 3;
    const bexp::ExperimentConfig c = bexp::resolve_config(cfg, ov);
    CHECK(c.seed == 777);
    CHECK(c.out_dir == "replaced");
    CHECK(c.replicas == 3);
    CHECK(c.echo["seed"] == 777);
    CHECK(c.echo["out"] == "replaced");
}

TEST_CASE("all shipped configs validate") {
    REQUIRE(fs::exists("configs"));
    int seen = 0;
    for (const auto& entry : fs::directory_iterator("configs")) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        const bexp::ExperimentConfig cfg = bexp::load_config(entry.path().string());
        CHECK(!cfg.experiment.empty());
        ++seen;
    }
    CHECK(seen == 10);
}

TEST_CASE("all shipped domain files load") {
    REQUIRE(fs::exists("domains"));
    int seen = 0;
    for (const auto& entry : fs::directory_iterator("domains")) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        const Domain d = bexp::domain_from_json(json(entry.path().string()));
        CHECK(d.measures().volume > 0.0);
        ++seen;
    }
    CHECK(seen >= 4);
}

TEST_CASE("a run writes report and data files and passes") {
    const fs::path out = scratch_dir("mean_chord_run");
    const bexp::ExperimentConfig cfg =
        bexp::resolve_config(minimal_mean_chord(out.string()));
    const bexp::RunReport report = bexp::run_experiment(cfg);
    CHECK(report.all_pass);
    CHECK(report.document["pass"] == true);
    CHECK(report.document["experiment"] == "mean-chord");
    CHECK(report.document["estimates"].contains("mean_chord"));
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "chords.csv"));

    // the echoed config in the report resolves to the identical run
    const json echoed = json::parse(slurp(out / "report.json"));
    CHECK(echoed["config"]["seed"] == 42);
    CHECK(echoed["tests"].is_array());
    for (const auto& t : echoed["tests"]) {
        CHECK(t.contains("statistic"));
        CHECK(t.contains("p_value"));
        CHECK(t.contains("pass"));
    }
}

TEST_CASE("identical seeds give byte-identical data, new seeds do not") {
    const fs::path a = scratch_dir("det_a");
    const fs::path b = scratch_dir("det_b");
    const fs::path c = scratch_dir("det_c");
    bexp::run_experiment(bexp::resolve_config(minimal_mean_chord(a.string())));
    bexp::run_experiment(bexp::resolve_config(minimal_mean_chord(b.string())));
    json other = minimal_mean_chord(c.string());
    other["seed"] = 43;
    bexp::run_experiment(bexp::resolve_config(other));

    CHECK(slurp(a / "chords.csv") == slurp(b / "chords.csv"));
    CHECK(slurp(a / "chords.csv") != slurp(c / "chords.csv"));
}

TEST_CASE("failing checks are reported, not thrown") {
    // cosine-law mean chord on a disk, but alpha pushed to the max and n tiny
    // enough that... the mean-chord z-test still passes; instead force a fail
    // with a custom law pretending to be cosine is not possible through the
    // config, so use the uniform law on bertrand's domain check instead:
    // a kernel-solve with an absurdly tight psi tolerance must fail its
    // threshold check but still produce a report.
    const fs::path out = scratch_dir("forced_fail");
    const json cfg = {{"experiment", "kernel-solve"},
                      {"domain", "builtin:unit-square"},
                      {"out", out.string()},
                      {"params", {{"panels", 64}, {"psi_tolerance", 1e-9}}}};
    const bexp::RunReport report = bexp::run_experiment(bexp::resolve_config(cfg));
    CHECK_FALSE(report.all_pass);
    CHECK(fs::exists(out / "report.json"));
    const json doc = json::parse(slurp(out / "report.json"));
    CHECK(doc["pass"] == false);
}
