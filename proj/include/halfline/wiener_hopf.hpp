#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "halfline/lattice.hpp"
#include "halfline/quadrature.hpp"

namespace halfline {

// Normalized coefficients of the quadratic expansion
//   phi_lambda = (lambda/2) E[X2^2] { t2^2 + A t2 + B - i (C t2 + D) }
// together with the derived quantities K, H, J1, J2, J used by the quartic
// factorization and the closed forms.
struct AbcdSet {
    double theta1 = 0.0, lambda = 0.0;
    double a_n = 0.0, b_n = 0.0, c_n = 0.0, d_n = 0.0;
    double k_val = 0.0;    // K = (4B - A^2 + C^2)^2 + 4 (2D - AC)^2
    double h_val = 0.0;    // H = (sqrtK - (4B - A^2 + C^2)) / 2
    double j1 = 0.0;       // (4B - A^2 + 3C^2 + sqrtK) / 2
    double j2 = 0.0;       // -2C (2D - AC) / sqrtH
    double j_total = 0.0;  // J = 4B - A^2 + C^2 + sqrtK
    double m2 = 0.0;       // E[X2^2], carried for the closed forms
};

enum class QuarticBranch { Generic, Degenerate };

// (t2^2 + A t2 + B)^2 + (C t2 + D)^2 = (t2^2 + a+ t2 + b+)(t2^2 + a- t2 + b-)
// plus the partial-fraction triples for Re[1/phi], Im[1/phi] and 1/|phi|^2.
struct QuarticFactors {
    double a_plus = 0.0, a_minus = 0.0, b_plus = 0.0, b_minus = 0.0;
    QuarticBranch branch = QuarticBranch::Generic;
    std::array<double, 3> pf_re{};  // (F, G, I)
    std::array<double, 3> pf_im{};  // (F~, G~, I~)
    std::array<double, 3> pf_sq{};  // (F-, G-, I-)
    bool pf_sq_valid = true;        // false when the two quadratic factors coincide
};

struct HalfPlaneIntegrals {
    double theta1 = 0.0, lambda = 0.0;
    double a_num = 0.0, b_num = 0.0;      // quadrature of Re/Im over theta2
    double quad_error = 0.0;
    double a_tilde = 0.0, b_tilde = 0.0;  // Lemma 3.2 / 3.4 closed forms
    double arcsin_num = 0.0;              // arcsin(b_num / hypot(a_num, b_num))
    double arcsin_closed = 0.0;           // model arcsin with (alpha, c1, c2)
};

struct SurvivalFactors {
    double lambda = 0.0;
    double c_lam = 0.0;   // c(lambda)
    double f_inf = 0.0;   // f_inf(1; lambda)
    double f_zero = 0.0;  // f_0(1; lambda)
    int k_max = 0, l_max = 0;
    double truncation_bound = 0.0;
    double p_v_minus() const { return c_lam * f_inf; }   // P0{T < tau_{V-}}
    double p_v_plus() const { return c_lam * f_zero; }   // P0{T < tau_{V+}}
};

enum class RatioMethod { ArcsinIntegral, DirectKernel, Series };

struct RatioCurve {
    std::vector<double> lambdas;
    std::vector<double> log_ratio;  // lim_L Re[C_L(lambda)] estimates
    std::vector<double> i0_vals, i1_vals, i4_vals;
    std::vector<double> direct_kernel;  // finite-L kernel values, cross-check
    double slope_vs_log1mlam = 0.0;
    RatioMethod method = RatioMethod::ArcsinIntegral;
};

// phi_lambda(theta1, theta2): the quadratic-in-theta2 surrogate for 1 - lambda phi.
std::complex<double> phi_lambda(const IncrementDistribution& dist, double theta1,
                                double theta2, double lambda);

AbcdSet abcd(const IncrementDistribution& dist, double theta1, double lambda);

QuarticFactors quartic_factor(const AbcdSet& set);

// Quartic factorization from raw coefficients (no walk attached); exposed for
// the seeded factorization sweeps.
QuarticFactors quartic_factor_raw(double a, double b, double c, double d);

// (1/2pi) int_{-pi}^{pi} dtheta2 / (1 - lambda phi(theta1, theta2)); returns
// (a_num, b_num) = (Re, Im) with the quadrature error estimate.
struct AbNumeric {
    double a = 0.0, b = 0.0, error = 0.0;
};
AbNumeric ab_numeric(const IncrementDistribution& dist, double theta1, double lambda,
                     const QuadratureSpec& quad = {});

// Closed forms of Lemmas 3.2 / 3.4, cross-checked against the (B(theta1), D(theta1))
// rewrite; throws on disagreement beyond 1e-9 relative.
std::pair<double, double> ab_closed(const AbcdSet& set, const IncrementDistribution& dist);

struct QTriple {
    double q = 0.0, q1 = 0.0, q2 = 0.0;  // Q_lambda and its two brackets
};
QTriple q_functions(double s, double lambda, double c1, double c2);

// Eq. (2.1): E_0[lambda^{eta(k)}; zeta(k) = l] by nested quadrature.
struct LadderTransform {
    double value = 0.0;
    double imag_residual = 0.0;
};
LadderTransform ladder_transform(const IncrementDistribution& dist, int k, std::int64_t l,
                                 double lambda, const QuadratureSpec& quad = {});

SurvivalFactors survival_factors(const IncrementDistribution& dist, double lambda,
                                 int k_max = 64, int l_max = 512,
                                 const QuadratureSpec& quad = {});

// P0{T_lambda < tau_U} = 1 / G2(lambda), G2 the lambda-Green function of X2 at 0.
double line_survival(const IncrementDistribution& dist, double lambda);

// I0(s0, lambda) evaluated by direct quadrature of the arcsin integrand and by
// the arcsin power series with per-term integrals from the I_n recursion run
// on both Q-bracket coefficient sets; `direct` is asserted to lie inside
// [series_lo, series_hi] up to the truncation slack.
struct I0Result {
    double direct = 0.0;
    double series_lo = 0.0;   // recursion with the Q^(1) coefficients
    double series_hi = 0.0;   // recursion with the Q^(2) coefficients
    int terms = 0;
};
I0Result i0_series(double s0, double lambda, double alpha, double c1, double c2,
                   int n_max = 40);

RatioCurve ratio_curve(const IncrementDistribution& dist, const std::vector<double>& lambdas,
                       double s0, std::int64_t L, const QuadratureSpec& quad = {});

// Largest radius <= 0.5 on which Re[phi_lambda] >= (c*/4) theta2^2 holds on a
// test grid; the numeric stand-in for the paper's existence constants r0, s0.
double pick_s0(const IncrementDistribution& dist);

// Diagnostics for the half-plane integrals at one (theta1, lambda), with the
// model arcsin built from (alpha, c1, c2).
HalfPlaneIntegrals half_plane_integrals(const IncrementDistribution& dist, double theta1,
                                        double lambda, double alpha, double c1, double c2,
                                        const QuadratureSpec& quad = {});

}  // namespace halfline
