#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace halfline {

struct QuadratureSpec {
    double tol = 1e-9;      // absolute error target for the whole interval
    int max_panels = 4000;  // refinement budget
};

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    int panels = 0;
};

// Panel-adaptive Gauss-Kronrod (G7,K15) on [a,b]. `breakpoints` seeds the
// initial panel edges (sorted values inside (a,b) are kept, the rest ignored);
// peaked integrands should pass their peak scale here so the first refinement
// generation already sees the feature. Throws QuadratureNonConvergent when the
// panel budget is exhausted with the error estimate still above spec.tol.
QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                    double a, double b, const QuadratureSpec& spec,
                                    const std::vector<double>& breakpoints = {});

// Real-valued convenience wrapper.
double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               const QuadratureSpec& spec,
                               const std::vector<double>& breakpoints = {});

}  // namespace halfline
