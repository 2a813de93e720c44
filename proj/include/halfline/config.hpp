#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "halfline/lattice.hpp"
#include "halfline/montecarlo.hpp"

namespace halfline {

// Typed view of the JSON run configuration. Parsing is strict: unknown keys
// anywhere are a ConfigError, so typos fail loudly instead of silently
// falling back to defaults.

struct DistributionConfig {
    std::string type;  // simple | table | product | heavy_tail
    std::vector<std::tuple<std::int64_t, std::int64_t, std::string>> atoms;  // table
    std::vector<std::pair<std::int64_t, std::string>> x1, x2;                // product
    double alpha = 1.5;                                                      // heavy_tail
    std::optional<int> head_size;
    std::optional<std::vector<std::pair<std::int64_t, std::string>>> heavy_x2;
    std::optional<double> delta;
    bool mirror_x1 = false;

    IncrementDistribution build() const;
};

struct AnalyzeConfig {
    double theta_min = 1e-4;
    double theta_max = 1e-2;
    int points = 32;
};

struct SimulateConfig {
    std::uint64_t n_paths = 1000000;
    std::uint64_t horizon = 1000000;
    std::uint64_t seed = 1;
    std::uint32_t streams = 64;
    std::string target = "V_minus";
    std::string checkpoints = "pow2";  // pow2 | log
    std::uint64_t log_lo = 100, log_hi = 0;  // log mode; 0 hi means horizon
    int log_points = 25;
    std::vector<std::uint64_t> explicit_checkpoints;
    double fit_lo = 0.0, fit_hi = 0.0;  // optional slope window

    SimConfig build() const;
};

struct GeometricConfig {
    std::vector<double> lambdas{0.9};
    std::vector<std::string> targets{"U", "V_minus", "V_plus_punctured"};
    std::uint64_t n_paths = 1000000;
    std::uint64_t horizon = 100000;
    std::uint64_t seed = 1;
    std::uint32_t streams = 64;
    std::string mode = "coin";  // coin | sampled
};

struct WienerHopfConfig {
    std::vector<double> lambdas;
    double s0 = 0.0;  // 0 = pick automatically
    std::int64_t L = 2048;
    double tol = 1e-9;
    int k_max = 64;
    int l_max = 512;
};

struct LadderConfig {
    double lambda = 0.9;
    int k = 1;
    std::vector<std::int64_t> l_values{-3, -2, -1, 0, 1, 2, 3};
    std::uint64_t n_paths = 1000000;
    std::uint64_t horizon = 100000;
    std::uint64_t seed = 1;
    std::uint32_t streams = 64;
};

struct VerifyConfig {
    std::vector<int> criteria;  // empty = all
};

struct RunConfig {
    int schema_version = 1;
    DistributionConfig distribution;
    std::string output_dir = "out";
    AnalyzeConfig analyze;
    SimulateConfig simulate;
    GeometricConfig geometric;
    WienerHopfConfig wiener_hopf;
    LadderConfig ladder;
    VerifyConfig verify;

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);
    std::string serialize() const;  // canonical JSON, stable key order
};

Target parse_target(const std::string& name);

}  // namespace halfline
