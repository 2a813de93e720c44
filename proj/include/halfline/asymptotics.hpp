#pragma once

#include <utility>
#include <vector>

#include "halfline/lattice.hpp"

namespace halfline {

// Sampled hypothesis curves of (A1). b_prof holds
//   B(t) = 1 - E[cos tX1] - E[(sin tX1)X2]^2/(2E[X2^2]) + E[(-1+cos tX1)X2]^2/(2E[X2^2])
// and d_prof holds
//   D(t) = E[sin tX1] - E[(sin tX1)X2] E[(-1+cos tX1)X2] / E[X2^2].
struct ThetaProfile {
    std::vector<double> grid;
    std::vector<double> b_prof;
    std::vector<double> d_prof;
};

struct TailFit {
    double alpha_hat = 0.0;
    double c1_hat = 0.0;
    double c2_hat = 0.0;  // stored non-negative; `reflected` carries the sign convention
    std::pair<double, double> window{0.0, 0.0};
    double residual_rms = 0.0;
    bool reflected = false;  // fitted c2 < 0 was mapped by x1 -> -x1 (swaps V-/V+)
};

enum class ExponentSource { Fitted, ClosedForm };

struct ExponentReport {
    double beta = 0.0;
    double survival_exponent = 0.25;  // 1/4 - beta
    ExponentSource source = ExponentSource::Fitted;
    TailFit fit;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

std::vector<double> log_grid(double lo, double hi, int points);

// Pointwise (B(theta1), D(theta1)).
std::pair<double, double> bd_point(const IncrementDistribution& dist, double theta1);

ThetaProfile bd_profile(const IncrementDistribution& dist, const std::vector<double>& grid);

// Leading constants of the worked heavy-tail example:
//   c1 = c- pi / (2 Gamma(a+1) cos((a-1) pi/2)),  c2 = same with sin.
std::pair<double, double> heavy_tail_constants(double alpha, double c_minus);

// Joint log-log fit of |B| and |D| with a shared exponent. A curve whose
// maximum over the window is below 1e-12 counts as vanishing; when the two
// single-curve exponents differ by more than 0.2 the faster-decaying curve is
// dropped (the Corollary 1.2 / 1.3 regimes).
TailFit fit_tail(const ThetaProfile& profile);

// Theorem 1.1:  beta = (1/(a pi)) arcsin( c2 / (sqrt2 sqrt(c1^2+c2^2+c1 sqrt(c1^2+c2^2))) ).
double beta_from_constants(double alpha, double c1, double c2);

ExponentReport exponent_report(const IncrementDistribution& dist);

// Closed-form route for the canonical heavy-tail law (beta = (2-a)/(4a)).
ExponentReport heavy_tail_closed_form_report(const IncrementDistribution& dist);

// OLS on (log x, log y) restricted to window = [lo, hi]; needs >= 8 points.
LinearFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                     std::pair<double, double> window);

}  // namespace halfline
