#include "halfline/asymptotics.hpp"

#include <cmath>

#include "doctest.h"
#include "halfline/errors.hpp"
#include "halfline/rng.hpp"
#include "oracles.hpp"

using namespace halfline;

namespace {

const double kPi = 3.141592653589793238462643383279502884;

IncrementDistribution x1_one_walk() {
    return IncrementDistribution::product(
        OneDimLaw::from_rationals({{1, Rational64::make(1, 1)}}),
        IncrementDistribution::default_x2_law());
}

}  // namespace

TEST_CASE("bd_profile: simple walk collapses to B = (1-cos)/2, D = 0") {
    auto profile = bd_profile(IncrementDistribution::simple_walk(), log_grid(1e-3, 1e-1, 32));
    for (std::size_t i = 0; i < profile.grid.size(); ++i) {
        double t = profile.grid[i];
        CHECK(profile.b_prof[i] == doctest::Approx((1.0 - std::cos(t)) / 2.0).epsilon(1e-12));
        CHECK(std::fabs(profile.d_prof[i]) < 1e-15);
    }
}

TEST_CASE("bd_profile: both curves vanish as theta -> 0") {
    auto heavy = IncrementDistribution::heavy_tail(1.5);
    auto profile = bd_profile(heavy, {1e-9, 1e-8});
    CHECK(std::fabs(profile.b_prof[0]) < 1e-10);
    CHECK(std::fabs(profile.d_prof[0]) < 1e-10);
}

TEST_CASE("bd_profile: heavy tail matches direct series summation at theta = 0.05") {
    auto heavy = IncrementDistribution::heavy_tail(1.5);
    const auto& h = heavy.heavy();
    auto profile = bd_profile(heavy, {0.05});
    // independent oracle: direct series for 1 - E[cos theta X1]
    double oracle_b = h.c_plus * (1.0 - std::cos(0.05)) +
                      h.c_minus * oracle::heavy_cos_defect(1.5, 0.05, 1'000'000);
    CHECK(profile.b_prof[0] == doctest::Approx(oracle_b).epsilon(1e-7));
    // leading-order constant: B ~ c1 theta^alpha with relative error O(theta^{1/2})
    auto [c1, c2] = heavy_tail_constants(h.alpha, h.c_minus);
    (void)c2;
    CHECK(std::fabs(profile.b_prof[0] / (c1 * std::pow(0.05, 1.5)) - 1.0) < 0.15);
}

TEST_CASE("heavy_tail_constants: alpha = 1.5 pins c1 = c2 near 0.4226") {
    auto [c_minus, c_plus] = solve_heavy_tail(1.5);
    (void)c_plus;
    auto [c1, c2] = heavy_tail_constants(1.5, c_minus);
    // cos((a-1)pi/2) = sin((a-1)pi/2) at a = 3/2 forces equality
    CHECK(c1 == doctest::Approx(c2).epsilon(1e-14));
    // Gamma(2.5) = (3/4) sqrt(pi); independent arithmetic for the target value
    double expected = c_minus * kPi / (2.0 * 0.75 * std::sqrt(kPi) * std::cos(kPi / 4.0));
    CHECK(c1 == doctest::Approx(expected).epsilon(1e-12));
    CHECK(c1 == doctest::Approx(0.42263).epsilon(2e-4));
}

TEST_CASE("heavy_tail_constants: c2 blows up as alpha -> 1") {
    auto [c1a, c2a] = heavy_tail_constants(1.05, 0.25);
    auto [c1b, c2b] = heavy_tail_constants(1.005, 0.25);
    (void)c1a;
    (void)c1b;
    CHECK(c2b > c2a);
    CHECK(c2b > 10.0);
    CHECK_THROWS_AS(heavy_tail_constants(0.9, 0.25), OutOfRange);
}

TEST_CASE("heavy-tail beta chain: constants feed the arcsin formula to 1/12") {
    auto [c_minus, c_plus] = solve_heavy_tail(1.5);
    (void)c_plus;
    auto [c1, c2] = heavy_tail_constants(1.5, c_minus);
    CHECK(beta_from_constants(1.5, c1, c2) == doctest::Approx(1.0 / 12.0).epsilon(1e-10));
}

TEST_CASE("fit_tail: exact synthetic power law is recovered to 1e-3") {
    ThetaProfile p;
    p.grid = log_grid(1e-3, 1e-1, 32);
    for (double t : p.grid) {
        p.b_prof.push_back(0.3 * std::pow(t, 1.7));
        p.d_prof.push_back(0.1 * std::pow(t, 1.7));
    }
    auto fit = fit_tail(p);
    CHECK(fit.alpha_hat == doctest::Approx(1.7).epsilon(1e-3));
    CHECK(fit.c1_hat == doctest::Approx(0.3).epsilon(1e-3));
    CHECK(fit.c2_hat == doctest::Approx(0.1).epsilon(1e-3));
    CHECK_FALSE(fit.reflected);
}

TEST_CASE("fit_tail: simple walk lands in the Corollary 1.2 regime") {
    auto profile = bd_profile(IncrementDistribution::simple_walk(), log_grid(1e-3, 1e-1, 32));
    auto fit = fit_tail(profile);
    CHECK(fit.alpha_hat == doctest::Approx(2.0).epsilon(2e-3));
    CHECK(fit.c1_hat == doctest::Approx(0.25).epsilon(2e-2));
    CHECK(fit.c2_hat == 0.0);
}

TEST_CASE("fit_tail: X1 = 1 walk lands in the Corollary 1.3 regime") {
    auto profile = bd_profile(x1_one_walk(), log_grid(1e-3, 1e-1, 32));
    auto fit = fit_tail(profile);
    CHECK(fit.c1_hat == 0.0);
    CHECK(fit.alpha_hat == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(fit.c2_hat == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("fit_tail: preconditions") {
    ThetaProfile p;
    p.grid = log_grid(1e-3, 1e-1, 8);
    p.b_prof.assign(8, 1e-3);
    p.d_prof.assign(8, 1e-3);
    CHECK_THROWS_AS(fit_tail(p), InsufficientData);

    ThetaProfile flat;
    flat.grid = log_grid(1e-3, 1e-1, 32);
    flat.b_prof.assign(32, 0.0);
    flat.d_prof.assign(32, 0.0);
    CHECK_THROWS_AS(fit_tail(flat), FitDegenerate);
}

TEST_CASE("fit_tail: reflection antisymmetry") {
    auto heavy = IncrementDistribution::heavy_tail(1.5);
    auto profile = bd_profile(heavy, log_grid(1e-3, 1e-1, 32));
    auto fit = fit_tail(profile);
    ThetaProfile mirrored = profile;
    for (double& d : mirrored.d_prof) d = -d;
    auto fit2 = fit_tail(mirrored);
    CHECK(fit2.reflected != fit.reflected);
    CHECK(fit2.alpha_hat == doctest::Approx(fit.alpha_hat).epsilon(1e-9));
    CHECK(fit2.c1_hat == doctest::Approx(fit.c1_hat).epsilon(1e-9));
    CHECK(fit2.c2_hat == doctest::Approx(fit.c2_hat).epsilon(1e-9));
}

TEST_CASE("beta_from_constants: corollary limits and the 1/12 example") {
    CHECK(beta_from_constants(2.0, 0.25, 0.0) == 0.0);
    CHECK(beta_from_constants(1.0, 0.0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(beta_from_constants(1.5, 0.4226, 0.4226) ==
          doctest::Approx(1.0 / 12.0).epsilon(1e-10));
    CHECK_THROWS_AS(beta_from_constants(2.5, 1.0, 1.0), OutOfRange);
    CHECK_THROWS_AS(beta_from_constants(1.0, 0.0, 0.0), OutOfRange);
}

TEST_CASE("beta bound: 0 <= beta <= 1/(4 alpha), equality only at c1 = 0") {
    RngStream rng(1234, 0);
    for (int i = 0; i < 500; ++i) {
        double alpha = 0.05 + 1.95 * rng.next_double();
        double c1 = rng.next_double() * 3.0;
        double c2 = rng.next_double() * 3.0 + 1e-9;
        double beta = beta_from_constants(alpha, c1, c2);
        CHECK(beta >= 0.0);
        CHECK(beta <= 1.0 / (4.0 * alpha) + 1e-12);
        if (c1 > 1e-6) CHECK(beta < 1.0 / (4.0 * alpha));
    }
}

TEST_CASE("beta_from_constants is scale-invariant") {
    RngStream rng(77, 0);
    for (int i = 0; i < 200; ++i) {
        double alpha = 0.1 + 1.9 * rng.next_double();
        double c1 = rng.next_double() * 2.0 + 0.01;
        double c2 = rng.next_double() * 2.0 + 0.01;
        double t = std::exp(4.0 * (rng.next_double() - 0.5));
        CHECK(beta_from_constants(alpha, t * c1, t * c2) ==
              doctest::Approx(beta_from_constants(alpha, c1, c2)).epsilon(1e-12));
    }
}

TEST_CASE("exponent_report: simple walk survival exponent 1/4") {
    auto rep = exponent_report(IncrementDistribution::simple_walk());
    CHECK(rep.survival_exponent == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(rep.beta == doctest::Approx(0.0).scale(1.0).epsilon(1e-3));
}

TEST_CASE("exponent_report: heavy tail alpha=1.5 gives 1/6 within 5e-3") {
    auto rep = exponent_report(IncrementDistribution::heavy_tail(1.5));
    CHECK(std::fabs(rep.survival_exponent - 1.0 / 6.0) < 5e-3);
}

TEST_CASE("exponent_report: beta = (2-a)/(4a) within 5e-3 for three alphas") {
    for (double alpha : {1.2, 1.5, 1.8}) {
        auto rep = exponent_report(IncrementDistribution::heavy_tail(alpha));
        CHECK(std::fabs(rep.beta - (2.0 - alpha) / (4.0 * alpha)) < 5e-3);
    }
}

TEST_CASE("exponent_report: X1 = 1 walk has survival exponent 0") {
    auto rep = exponent_report(x1_one_walk());
    CHECK(std::fabs(rep.survival_exponent) < 1e-3);
    CHECK(rep.beta == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("loglog_fit: exact, constant, and noisy synthetic data") {
    std::vector<double> xs = log_grid(1.0, 100.0, 24);
    std::vector<double> exact, constant;
    for (double x : xs) {
        exact.push_back(3.0 * std::pow(x, -0.25));
        constant.push_back(2.5);
    }
    auto f1 = loglog_fit(xs, exact, {xs.front(), xs.back()});
    CHECK(f1.slope == doctest::Approx(-0.25).epsilon(1e-12));
    auto f2 = loglog_fit(xs, constant, {xs.front(), xs.back()});
    CHECK(f2.slope == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    RngStream rng(5150, 0);
    std::vector<double> noisy;
    for (double x : xs)
        noisy.push_back(std::pow(x, -1.0 / 6.0) * (1.0 + 0.01 * (2.0 * rng.next_double() - 1.0)));
    auto f3 = loglog_fit(xs, noisy, {xs.front(), xs.back()});
    CHECK(std::fabs(f3.slope - (-1.0 / 6.0)) < 0.01);

    CHECK_THROWS_AS(loglog_fit(xs, exact, {1.0, 1.5}), InsufficientData);
}
