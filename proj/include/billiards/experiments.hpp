#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "billiards/geometry.hpp"
#include "billiards/reflection.hpp"

namespace billiards::experiments {

// Shipped domains, addressable in configs as "builtin:<name>".
std::vector<std::string> builtin_domain_names();
nlohmann::json builtin_domain_json(const std::string& name);

// Domain resolution: an inline object {"type": ...}, a "builtin:<name>"
// string, or a path to a JSON file holding either. Throws ConfigError on
// schema problems and GeometryError on invalid geometry.
Domain domain_from_json(const nlohmann::json& spec);

// Law resolution: "cosine" | "uniform", or an object
// {"law": ..., "custom_pdf": [[angle, value], ...]}.
ReflectionLaw law_from_json(const nlohmann::json& spec, int dim);

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> replicas;
};

// Fully resolved and validated run description. `echo` is the normalized
// config reproduced verbatim in the report; `params` holds the
// experiment-specific settings with defaults applied.
struct ExperimentConfig {
    std::string experiment;
    Domain domain;
    ReflectionLaw law;
    std::uint64_t seed = 1;
    int replicas = 1;
    long n = 0;
    double alpha = 0.001;
    std::string out_dir = "out";
    long max_csv_rows = 100000;
    nlohmann::json params;
    nlohmann::ordered_json echo;
};

// Schema validation and normalization; no simulation. ConfigError lists the
// offending field.
ExperimentConfig resolve_config(const nlohmann::json& raw,
                                const CliOverrides& overrides = {});
ExperimentConfig load_config(const std::string& path,
                             const CliOverrides& overrides = {});

struct RunReport {
    nlohmann::ordered_json document;
    bool all_pass = false;
};

// Runs the named experiment, writes report.json plus the experiment's CSVs
// under out_dir, and reports whether every declared test passed. Identical
// config and seed produce byte-identical files.
RunReport run_experiment(const ExperimentConfig& config);

}  // namespace billiards::experiments
