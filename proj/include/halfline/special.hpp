#pragma once

namespace halfline {

// Riemann zeta on the real line (s != 1), Euler-Maclaurin summation with the
// functional equation taking over for s < -0.5. Absolute error target 1e-13
// on the range used here (roughly s in [-80, 80]).
double riemann_zeta(double s);

// Tail sum  sum_{n >= m} n^{-s}  for s > 1, m >= 1, same accuracy target.
double zeta_tail(double s, double m);

// Gamma for real x, poles excluded; negative non-integers via reflection.
double gamma_real(double x);

// Power sums of the one-sided heavy tail  sum_{n>=1} n^{-1-alpha} f(n theta)
// evaluated through the Jonquiere expansion of Li_{1+alpha}(e^{i theta});
// valid for |theta| <= pi, alpha in (0,2) non-integer.
//   heavy_one_minus_cos_sum = sum n^{-1-alpha} (1 - cos(n theta))   (>= 0)
//   heavy_sin_sum           = sum n^{-1-alpha} sin(n theta)
double heavy_one_minus_cos_sum(double alpha, double theta);
double heavy_sin_sum(double alpha, double theta);

}  // namespace halfline
