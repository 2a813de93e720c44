#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "halfline/lattice.hpp"

namespace halfline {

// Absorbing sets on the first-coordinate axis.
enum class Target { VMinus, VPlus, VPlusPunctured, U };

bool in_target(Target t, std::int64_t x1, std::int64_t x2);
std::string target_name(Target t);

struct SimConfig {
    std::uint64_t n_paths = 100000;
    std::uint64_t horizon = 1000000;
    std::uint64_t seed = 1;
    Target target = Target::VMinus;
    std::vector<std::uint64_t> checkpoints;  // sorted, within [1, horizon]
    std::uint32_t streams = 64;

    static std::vector<std::uint64_t> pow2_checkpoints(std::uint64_t horizon);
    static std::vector<std::uint64_t> log_checkpoints(std::uint64_t lo, std::uint64_t hi,
                                                      int points);
};

struct SurvivalCurve {
    std::vector<std::uint64_t> n_values;
    std::vector<std::uint64_t> survivors;
    std::vector<double> p_hat;
    std::vector<double> ci_half_width;  // 99% normal approximation
    std::uint64_t n_paths = 0;
};

struct GeometricEstimate {
    double lambda = 0.0;
    double p_hat = 0.0;
    double ci_half_width = 0.0;
    std::uint64_t n_paths = 0;
};

struct LadderSample {
    std::uint64_t eta1 = 0;  // first return time to the axis U
    std::int64_t zeta1 = 0;  // S1 at that time
    bool censored = false;   // horizon reached before returning
};

enum class KillMode { PerStepCoin, SampledTime };

// Survival of the target set through each checkpoint. Counts are a pure
// function of (seed, streams, n_paths, dist): paths are partitioned over
// `streams` reproducible RNG streams, merged by integer addition, so thread
// count and scheduling never show in the result.
SurvivalCurve simulate_survival(const IncrementDistribution& dist, const SimConfig& config);

// P0{T_lambda < tau_target} under geometric killing.
GeometricEstimate simulate_geometric(const IncrementDistribution& dist, double lambda,
                                     const SimConfig& config,
                                     KillMode mode = KillMode::PerStepCoin);

// P0{S(tau_{V+}) = 0, tau_{V+} <= T_lambda}: the first V+ hit lands exactly on
// the origin before the killing time (the middle factor of Lemma 2.1).
GeometricEstimate simulate_origin_hit(const IncrementDistribution& dist, double lambda,
                                      const SimConfig& config);

std::vector<LadderSample> simulate_ladder(const IncrementDistribution& dist,
                                          const SimConfig& config);

// Exact forward dynamic programming over rational masses; P0{tau > n} for
// n = 1..n_max with no floating-point error. Requires a finite table with
// exact rational probabilities and n_max <= 24.
struct ExactSurvival {
    std::vector<double> p;              // P0{tau > n}, n = 1..n_max
    std::vector<std::string> rational;  // same values as exact fractions
};
ExactSurvival dp_exact_survival(const IncrementDistribution& dist, int n_max, Target target);

}  // namespace halfline
