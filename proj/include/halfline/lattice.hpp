#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "halfline/rng.hpp"

namespace halfline {

struct LatticePoint {
    std::int64_t x1 = 0;
    std::int64_t x2 = 0;
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

// Exact probability for table walks; keeps the dynamic-programming oracle
// rational end to end.
struct Rational64 {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational64 parse(const std::string& text);
    static Rational64 make(std::int64_t num, std::int64_t den);
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    friend bool operator==(const Rational64&, const Rational64&) = default;
};

struct Atom {
    LatticePoint step;
    double p = 0.0;
    std::optional<Rational64> exact;
};

// Finite one-dimensional law, used for the coordinates of product walks and
// for X2 of the heavy-tail walk.
struct OneDimLaw {
    std::vector<std::pair<std::int64_t, double>> atoms;
    std::vector<std::optional<Rational64>> exact;  // parallel to atoms, may be empty

    static OneDimLaw from_rationals(
        const std::vector<std::pair<std::int64_t, Rational64>>& entries);
};

enum class DistKind { Table, Product, HeavyTailX1Product };

struct HeavyTailParams {
    double alpha = 1.5;
    double c_minus = 0.0;
    double c_plus = 0.0;
    int head_size = 4096;
};

// Law of the increment X = (X1, X2). Immutable after construction; sampling
// tables are built once, so all operations except sample_increment are pure
// and safe for shared concurrent use.
class IncrementDistribution {
public:
    static IncrementDistribution simple_walk();
    static IncrementDistribution table(std::vector<Atom> atoms, double delta = 0.5);
    static IncrementDistribution product(OneDimLaw x1, OneDimLaw x2, double delta = 0.5);
    // The heavy-tail X1 of the worked example: p(n) = c_minus |n|^{-1-alpha} for
    // n <= -1, p(1) = c_plus, with (c_minus, c_plus) solved so that the law is
    // normalized with zero mean. X2 defaults to {-1,0,1} w.p. {1/4,1/2,1/4}.
    static IncrementDistribution heavy_tail(double alpha, OneDimLaw x2 = default_x2_law(),
                                            int head_size = 4096, double delta = 0.5);
    static OneDimLaw default_x2_law();

    // Law of (-X1, X2); swaps the roles of V- and V+.
    IncrementDistribution mirrored_x1() const;
    bool x1_mirrored() const { return x1_mirrored_; }

    DistKind kind() const { return kind_; }
    double delta() const { return delta_; }
    const std::vector<Atom>& atoms() const { return atoms_; }  // empty for heavy tail
    const HeavyTailParams& heavy() const { return heavy_; }
    const OneDimLaw& x1_law() const { return x1_law_; }  // product kind only
    const OneDimLaw& x2_law() const { return x2_law_; }  // product / heavy tail

    bool finite_support() const { return kind_ != DistKind::HeavyTailX1Product; }
    bool has_exact_table() const;
    std::int64_t max_abs_step() const;  // finite kinds only

    // Sampling; mutates only the caller's stream.
    LatticePoint sample_increment(RngStream& rng) const;

    // Heavy-tail X1 CDF on {..., -2, -1} cup {1}:  P{X1 <= t}. Used by the
    // sampler's tail inversion and by the distribution tests.
    double heavy_x1_cdf(std::int64_t t) const;

private:
    friend class SamplerAccess;
    IncrementDistribution() = default;
    void build_samplers();

    DistKind kind_ = DistKind::Table;
    double delta_ = 0.5;
    std::vector<Atom> atoms_;
    OneDimLaw x1_law_, x2_law_;
    HeavyTailParams heavy_;
    bool x1_mirrored_ = false;  // heavy tail only; finite kinds mirror their atoms

    // Prepared sampling state (exact inverse CDF with a guide table, or a
    // dyadic bit decoder when every probability is k/2^B).
    struct DiscreteSampler {
        std::vector<double> cdf;
        std::vector<std::uint32_t> guide;
        std::vector<std::uint32_t> dyadic;  // 2^B entries when usable
        unsigned dyadic_bits = 0;
        std::uint32_t draw(RngStream& rng) const;
        std::uint32_t draw_bits(BitSource& bits) const;
        bool is_dyadic() const { return dyadic_bits > 0; }
    };
    DiscreteSampler table_sampler_;  // over atoms_ (finite kinds)
    DiscreteSampler x2_sampler_;     // over x2_law_ (heavy tail)
    std::vector<double> heavy_cdf_;  // P{X1 in head prefix}, see sampler impl
    std::vector<std::uint32_t> heavy_guide_;
    double heavy_guide_scale_ = 0.0;

public:
    const DiscreteSampler& table_sampler() const { return table_sampler_; }
    const DiscreteSampler& x2_sampler() const { return x2_sampler_; }
    std::int64_t sample_heavy_x1(double u) const;  // inverse CDF at u in [0,1)
};

struct ValidationReport {
    bool normalized = false;
    bool mean_zero_x2 = false;
    bool aperiodic = false;
    bool moments_finite = false;
    bool ok() const { return normalized && mean_zero_x2 && aperiodic && moments_finite; }
    std::string failure_message() const;
};

struct MomentSet {
    double e_x2 = 0.0;
    double e_x2_sq = 0.0;
    double e_abs_x1_delta = 0.0;
    double e_abs_x2_2plus_delta = 0.0;
    double delta = 0.5;
    double delta_hat = 0.0;  // delta^2 / (2 + delta)
};

struct TrigMoments {
    double theta1 = 0.0;
    double cos1 = 0.0;    // E[cos theta1 X1]
    double sin1 = 0.0;    // E[sin theta1 X1]
    double sin_x2 = 0.0;  // E[(sin theta1 X1) X2]
    double cos_x2 = 0.0;  // E[(-1 + cos theta1 X1) X2]
};

// Standing assumptions (a)-(c): aperiodicity via elementary divisors of the
// support, E[X2] = 0 within 1e-10, and finiteness of E[|X1|^delta],
// E[|X2|^{2+delta}]. Throws on structural defects, returns flags otherwise.
ValidationReport validate(const IncrementDistribution& dist);

MomentSet moments(const IncrementDistribution& dist);

std::complex<double> char_fn(const IncrementDistribution& dist, double theta1, double theta2);

TrigMoments trig_moments(const IncrementDistribution& dist, double theta1);

// 1 - E[cos theta1 X1] in a cancellation-free form (2 sin^2 for finite
// support, the polylog expansion for the heavy tail).
double one_minus_cos_x1(const IncrementDistribution& dist, double theta1);

// Normalization of the heavy-tail example: c_minus (zeta(1+alpha) + zeta(alpha)) = 1
// and c_plus = c_minus zeta(alpha), which enforce total mass 1 and zero mean.
std::pair<double, double> solve_heavy_tail(double alpha);

// phi(theta1, theta2) for a pinned theta1, grouped by distinct x2 values so
// inner quadratures over theta2 pay one complex exponential per group.
class PhiSlice {
public:
    PhiSlice(const IncrementDistribution& dist, double theta1);
    std::complex<double> operator()(double theta2) const;

private:
    std::vector<std::pair<double, std::complex<double>>> groups_;  // (x2, coeff)
};

}  // namespace halfline
