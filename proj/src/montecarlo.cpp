#include "halfline/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/integer/common_factor.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "halfline/errors.hpp"
#include "halfline/parallel.hpp"
#include "halfline/rng.hpp"

namespace halfline {
namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

using BigInt = boost::multiprecision::cpp_int;

std::uint64_t paths_for_stream(std::uint64_t n_paths, std::uint32_t streams,
                               std::uint32_t s) {
    std::uint64_t base = n_paths / streams;
    return base + (s < n_paths % streams ? 1 : 0);
}

void check_config(const SimConfig& config) {
    if (config.n_paths == 0 || config.horizon == 0 || config.streams == 0)
        throw OutOfRange("simulate: n_paths, horizon, streams must be positive");
    for (std::size_t i = 0; i < config.checkpoints.size(); ++i) {
        std::uint64_t c = config.checkpoints[i];
        if (c < 1 || c > config.horizon)
            throw OutOfRange("simulate: checkpoints must lie in [1, horizon]");
        if (i > 0 && config.checkpoints[i - 1] >= c)
            throw OutOfRange("simulate: checkpoints must be strictly increasing");
    }
}

// One path: steps until the target absorbs it or the horizon runs out.
// Returns tau (horizon+1 when the path survives the whole window).
template <class Stepper>
std::uint64_t run_path(Target target, std::uint64_t horizon, Stepper& step) {
    std::int64_t x1 = 0, x2 = 0;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        LatticePoint d = step();
        x1 += d.x1;
        x2 += d.x2;
        // |x1| < 2^62  <=>  x1 + 2^62 lands in [0, 2^63)
        if (static_cast<std::uint64_t>(x1 + (std::int64_t{1} << 62)) >=
            (std::uint64_t{1} << 63))
            throw Error(ErrorClass::Numeric, "position overflow guard tripped");
        if (in_target(target, x1, x2)) return n;
    }
    return horizon + 1;
}

struct GenericStepper {
    const IncrementDistribution& dist;
    RngStream& rng;
    LatticePoint operator()() { return dist.sample_increment(rng); }
};

// Bit-sliced decode when every probability is k/2^B (simple walk, lazy X2).
struct DyadicStepper {
    const IncrementDistribution& dist;
    BitSource bits;
    LatticePoint operator()() {
        return dist.atoms()[dist.table_sampler().draw_bits(bits)].step;
    }
};

bool dyadic_usable(const IncrementDistribution& dist) {
    return dist.finite_support() && dist.table_sampler().is_dyadic();
}

// Heavy-tail fast path: inverse-CDF head search for X1 plus bit-sliced X2
// when its law allows it (the default lazy law does).
struct HeavyStepper {
    const IncrementDistribution& dist;
    RngStream& rng;
    BitSource bits;
    bool x2_dyadic;
    bool mirrored;
    LatticePoint operator()() {
        std::int64_t x1 = dist.sample_heavy_x1(rng.next_double());
        if (mirrored) x1 = -x1;
        std::uint32_t j = x2_dyadic ? dist.x2_sampler().draw_bits(bits)
                                    : dist.x2_sampler().draw(rng);
        return {x1, dist.x2_law().atoms[j].first};
    }
};

}  // namespace

bool in_target(Target t, std::int64_t x1, std::int64_t x2) {
    if (x2 != 0) return false;
    switch (t) {
        case Target::VMinus: return x1 <= 0;
        case Target::VPlus: return x1 >= 0;
        case Target::VPlusPunctured: return x1 >= 1;
        case Target::U: return true;
    }
    return false;
}

std::string target_name(Target t) {
    switch (t) {
        case Target::VMinus: return "V_minus";
        case Target::VPlus: return "V_plus";
        case Target::VPlusPunctured: return "V_plus_punctured";
        case Target::U: return "U";
    }
    return "?";
}

std::vector<std::uint64_t> SimConfig::pow2_checkpoints(std::uint64_t horizon) {
    std::vector<std::uint64_t> cp;
    for (std::uint64_t c = 1; c <= horizon; c *= 2) {
        cp.push_back(c);
        if (c > horizon / 2) break;
    }
    if (cp.back() != horizon) cp.push_back(horizon);
    return cp;
}

std::vector<std::uint64_t> SimConfig::log_checkpoints(std::uint64_t lo, std::uint64_t hi,
                                                      int points) {
    std::vector<std::uint64_t> cp;
    double step = std::log(static_cast<double>(hi) / static_cast<double>(lo)) /
                  static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) {
        auto c = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(lo) * std::exp(step * i)));
        if (cp.empty() || c > cp.back()) cp.push_back(c);
    }
    return cp;
}

SurvivalCurve simulate_survival(const IncrementDistribution& dist, const SimConfig& config) {
    check_config(config);
    const auto& cp = config.checkpoints;
    if (cp.empty()) throw OutOfRange("simulate_survival: no checkpoints");

    // death-index histogram per stream; hist[k] counts paths whose tau exceeds
    // exactly the first k checkpoints
    std::vector<std::vector<std::uint64_t>> hist(
        config.streams, std::vector<std::uint64_t>(cp.size() + 1, 0));

    parallel_for(config.streams, [&](std::size_t s) {
        RngStream rng(config.seed, s);
        std::uint64_t todo = paths_for_stream(config.n_paths, config.streams,
                                              static_cast<std::uint32_t>(s));
        auto run_all = [&](auto& stepper) {
            for (std::uint64_t p = 0; p < todo; ++p) {
                std::uint64_t tau = run_path(config.target, config.horizon, stepper);
                std::size_t k = static_cast<std::size_t>(
                    std::lower_bound(cp.begin(), cp.end(), tau) - cp.begin());
                ++hist[s][k];
            }
        };
        if (dyadic_usable(dist)) {
            DyadicStepper stepper{dist, BitSource(rng)};
            run_all(stepper);
        } else if (!dist.finite_support()) {
            HeavyStepper stepper{dist, rng, BitSource(rng),
                                 dist.x2_sampler().is_dyadic(), dist.x1_mirrored()};
            run_all(stepper);
        } else {
            GenericStepper stepper{dist, rng};
            run_all(stepper);
        }
    });

    SurvivalCurve curve;
    curve.n_paths = config.n_paths;
    curve.n_values = cp;
    curve.survivors.assign(cp.size(), 0);
    std::vector<std::uint64_t> total(cp.size() + 1, 0);
    for (const auto& h : hist)
        for (std::size_t k = 0; k <= cp.size(); ++k) total[k] += h[k];
    std::uint64_t acc = 0;
    for (std::size_t i = cp.size(); i-- > 0;) {
        acc += total[i + 1];
        curve.survivors[i] = acc;
    }
    curve.p_hat.resize(cp.size());
    curve.ci_half_width.resize(cp.size());
    for (std::size_t i = 0; i < cp.size(); ++i) {
        double p = static_cast<double>(curve.survivors[i]) /
                   static_cast<double>(config.n_paths);
        curve.p_hat[i] = p;
        curve.ci_half_width[i] =
            kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(config.n_paths));
    }
    return curve;
}

namespace {

GeometricEstimate finish_estimate(double lambda, std::uint64_t hits, std::uint64_t n,
                                  std::uint64_t horizon) {
    GeometricEstimate est;
    est.lambda = lambda;
    est.n_paths = n;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(n);
    est.ci_half_width =
        kZ99 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(n));
    // Censored paths are counted as failures; the bias is at most
    // P{T >= horizon} = lambda^horizon and must stay well inside the CI.
    double bias = std::pow(lambda, static_cast<double>(horizon));
    if (est.ci_half_width > 0.0 && bias > 0.1 * est.ci_half_width)
        throw HorizonTooShort("simulate_geometric: censoring bias " +
                              std::to_string(bias) + " vs ci " +
                              std::to_string(est.ci_half_width));
    return est;
}

}  // namespace

GeometricEstimate simulate_geometric(const IncrementDistribution& dist, double lambda,
                                     const SimConfig& config, KillMode mode) {
    check_config(config);
    if (!(lambda > 0.0 && lambda < 1.0))
        throw OutOfRange("simulate_geometric: lambda must lie in (0,1)");

    std::vector<std::uint64_t> wins(config.streams, 0);
    parallel_for(config.streams, [&](std::size_t s) {
        RngStream rng(config.seed, s);
        std::uint64_t todo = paths_for_stream(config.n_paths, config.streams,
                                              static_cast<std::uint32_t>(s));
        std::uint64_t local = 0;
        for (std::uint64_t p = 0; p < todo; ++p) {
            std::int64_t x1 = 0, x2 = 0;
            if (mode == KillMode::PerStepCoin) {
                for (std::uint64_t n = 1; n <= config.horizon; ++n) {
                    if (rng.next_double() < 1.0 - lambda) {
                        ++local;  // killed before the move: T = n-1 < tau
                        break;
                    }
                    LatticePoint d = dist.sample_increment(rng);
                    x1 += d.x1;
                    x2 += d.x2;
                    if (in_target(config.target, x1, x2)) break;  // tau <= T
                }
            } else {
                auto t_kill = static_cast<std::uint64_t>(
                    std::floor(std::log(rng.next_double_open()) / std::log(lambda)));
                bool hit = false;
                std::uint64_t limit = std::min(t_kill, config.horizon);
                for (std::uint64_t n = 1; n <= limit; ++n) {
                    LatticePoint d = dist.sample_increment(rng);
                    x1 += d.x1;
                    x2 += d.x2;
                    if (in_target(config.target, x1, x2)) {
                        hit = true;
                        break;
                    }
                }
                if (!hit && t_kill <= config.horizon) ++local;
            }
        }
        wins[s] = local;
    });

    std::uint64_t hits = 0;
    for (std::uint64_t w : wins) hits += w;
    return finish_estimate(lambda, hits, config.n_paths, config.horizon);
}

GeometricEstimate simulate_origin_hit(const IncrementDistribution& dist, double lambda,
                                      const SimConfig& config) {
    check_config(config);
    if (!(lambda > 0.0 && lambda < 1.0))
        throw OutOfRange("simulate_origin_hit: lambda must lie in (0,1)");

    std::vector<std::uint64_t> wins(config.streams, 0);
    parallel_for(config.streams, [&](std::size_t s) {
        RngStream rng(config.seed, s);
        std::uint64_t todo = paths_for_stream(config.n_paths, config.streams,
                                              static_cast<std::uint32_t>(s));
        std::uint64_t local = 0;
        for (std::uint64_t p = 0; p < todo; ++p) {
            std::int64_t x1 = 0, x2 = 0;
            for (std::uint64_t n = 1; n <= config.horizon; ++n) {
                if (rng.next_double() < 1.0 - lambda) break;  // killed first
                LatticePoint d = dist.sample_increment(rng);
                x1 += d.x1;
                x2 += d.x2;
                if (in_target(Target::VPlus, x1, x2)) {
                    if (x1 == 0) ++local;  // first V+ hit is the origin, within T
                    break;
                }
            }
        }
        wins[s] = local;
    });

    std::uint64_t hits = 0;
    for (std::uint64_t w : wins) hits += w;
    return finish_estimate(lambda, hits, config.n_paths, config.horizon);
}

std::vector<LadderSample> simulate_ladder(const IncrementDistribution& dist,
                                          const SimConfig& config) {
    check_config(config);
    std::vector<std::vector<LadderSample>> chunks(config.streams);
    parallel_for(config.streams, [&](std::size_t s) {
        RngStream rng(config.seed, s);
        std::uint64_t todo = paths_for_stream(config.n_paths, config.streams,
                                              static_cast<std::uint32_t>(s));
        chunks[s].reserve(todo);
        for (std::uint64_t p = 0; p < todo; ++p) {
            std::int64_t x1 = 0, x2 = 0;
            LadderSample sample;
            sample.censored = true;
            for (std::uint64_t n = 1; n <= config.horizon; ++n) {
                LatticePoint d = dist.sample_increment(rng);
                x1 += d.x1;
                x2 += d.x2;
                if (x2 == 0) {
                    sample.eta1 = n;
                    sample.zeta1 = x1;
                    sample.censored = false;
                    break;
                }
            }
            chunks[s].push_back(sample);
        }
    });
    std::vector<LadderSample> out;
    out.reserve(config.n_paths);
    for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
    return out;
}

ExactSurvival dp_exact_survival(const IncrementDistribution& dist, int n_max,
                                Target target) {
    if (!dist.finite_support())
        throw SupportUnbounded("dp_exact_survival: heavy-tail support is unbounded");
    if (!dist.has_exact_table())
        throw MalformedDistribution(
            "dp_exact_survival: table needs exact rational probabilities");
    if (n_max < 1 || n_max > 24) throw OutOfRange("dp_exact_survival: n_max must be 1..24");

    std::int64_t reach = static_cast<std::int64_t>(n_max) * dist.max_abs_step();
    if (reach > 512) throw SupportUnbounded("dp_exact_survival: support reach too large");
    const std::int64_t width = 2 * reach + 1;
    auto index = [&](std::int64_t x, std::int64_t y) {
        return static_cast<std::size_t>((x + reach) * width + (y + reach));
    };

    std::int64_t common = 1;
    for (const Atom& a : dist.atoms())
        common = boost::integer::lcm(common, a.exact->den);
    struct ScaledAtom {
        std::int64_t dx, dy;
        BigInt weight;
    };
    std::vector<ScaledAtom> steps;
    for (const Atom& a : dist.atoms()) {
        BigInt w = BigInt(a.exact->num) * (common / a.exact->den);
        if (w != 0) steps.push_back({a.step.x1, a.step.x2, w});
    }

    std::vector<BigInt> mass(static_cast<std::size_t>(width * width));
    mass[index(0, 0)] = 1;
    BigInt denom = 1;
    BigInt alive_total = 1;

    ExactSurvival out;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<BigInt> next(mass.size());
        std::int64_t prev_reach = static_cast<std::int64_t>(n - 1) * dist.max_abs_step();
        for (std::int64_t x = -prev_reach; x <= prev_reach; ++x) {
            for (std::int64_t y = -prev_reach; y <= prev_reach; ++y) {
                const BigInt& m = mass[index(x, y)];
                if (m == 0) continue;
                for (const ScaledAtom& a : steps)
                    next[index(x + a.dx, y + a.dy)] += m * a.weight;
            }
        }
        denom *= common;
        alive_total = 0;
        std::int64_t cur_reach = static_cast<std::int64_t>(n) * dist.max_abs_step();
        for (std::int64_t x = -cur_reach; x <= cur_reach; ++x) {
            for (std::int64_t y = -cur_reach; y <= cur_reach; ++y) {
                BigInt& m = next[index(x, y)];
                if (m == 0) continue;
                if (in_target(target, x, y))
                    m = 0;  // absorbed; mass removed from the alive set
                else
                    alive_total += m;
            }
        }
        mass.swap(next);

        BigInt g = boost::multiprecision::gcd(alive_total, denom);
        BigInt num = alive_total / g, den = denom / g;
        out.rational.push_back(num.str() + "/" + den.str());
        out.p.push_back(num.convert_to<double>() / den.convert_to<double>());
    }
    return out;
}

}  // namespace halfline
