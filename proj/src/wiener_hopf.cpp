#include "halfline/wiener_hopf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "halfline/asymptotics.hpp"
#include "halfline/errors.hpp"
#include "halfline/parallel.hpp"

namespace halfline {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

using Complex = std::complex<double>;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<std::pair<double, double>> x2_marginal(const IncrementDistribution& dist) {
    std::vector<std::pair<double, double>> marginal;
    if (dist.finite_support()) {
        for (const Atom& a : dist.atoms()) {
            double v = static_cast<double>(a.step.x2);
            auto it = std::find_if(marginal.begin(), marginal.end(),
                                   [&](const auto& m) { return m.first == v; });
            if (it == marginal.end())
                marginal.emplace_back(v, a.p);
            else
                it->second += a.p;
        }
        return marginal;
    }
    for (const auto& [v, p] : dist.x2_law().atoms)
        marginal.emplace_back(static_cast<double>(v), p);
    return marginal;
}

// Panel seeds for integrands peaked like 1/(1-lambda*phi): the peak sits near
// theta2 = -A/2 with width ~ sqrt(1-lambda), growing dyadically outward.
std::vector<double> peak_breakpoints(double center, double width) {
    std::vector<double> bp{center};
    for (int k = 0; k < 7; ++k) {
        double off = width * static_cast<double>(1 << k);
        bp.push_back(center - off);
        bp.push_back(center + off);
    }
    return bp;
}

struct InnerResult {
    Complex value;  // (1/2pi) int dtheta2 / (1 - lambda phi)
    double error;
};

InnerResult inner_integral(const IncrementDistribution& dist, double theta1, double lambda,
                           double m2, const QuadratureSpec& quad) {
    PhiSlice slice(dist, theta1);
    TrigMoments tm = trig_moments(dist, theta1);
    double center = -tm.sin_x2 / m2;  // -A/2 in the normalized coefficients
    double width = std::sqrt(2.0 * std::max(1.0 - lambda, 1e-14) / (lambda * m2));
    auto f = [&](double t2) { return 1.0 / (1.0 - lambda * slice(t2)); };
    auto res = integrate_adaptive(f, -kPi, kPi, quad, peak_breakpoints(center, width));
    return {res.value / (2.0 * kPi), res.error_estimate / (2.0 * kPi)};
}

}  // namespace

std::complex<double> phi_lambda(const IncrementDistribution& dist, double theta1,
                                double theta2, double lambda) {
    TrigMoments tm = trig_moments(dist, theta1);
    double m2 = moments(dist).e_x2_sq;
    double re = (1.0 - lambda) + lambda * one_minus_cos_x1(dist, theta1) +
                lambda * tm.sin_x2 * theta2 + 0.5 * lambda * m2 * theta2 * theta2;
    double im = -(lambda * tm.sin1 + lambda * tm.cos_x2 * theta2);
    return {re, im};
}

AbcdSet abcd(const IncrementDistribution& dist, double theta1, double lambda) {
    AbcdSet set;
    set.theta1 = theta1;
    set.lambda = lambda;
    set.m2 = moments(dist).e_x2_sq;
    TrigMoments tm = trig_moments(dist, theta1);
    const double half_m2 = 0.5 * set.m2;
    set.a_n = tm.sin_x2 / half_m2;
    set.c_n = tm.cos_x2 / half_m2;
    set.d_n = tm.sin1 / half_m2;
    // 1 - lambda E[cos] = (1-lambda) + lambda (1 - E[cos]), cancellation-free.
    set.b_n = ((1.0 - lambda) + lambda * one_minus_cos_x1(dist, theta1)) /
              (lambda * half_m2);

    const double u = 4.0 * set.b_n - set.a_n * set.a_n + set.c_n * set.c_n;
    const double v = 2.0 * set.d_n - set.a_n * set.c_n;
    set.k_val = u * u + 4.0 * v * v;
    if (set.k_val < 1e-300)
        throw DegenerateK("abcd: K vanishes (theta1 = 0 and lambda = 1)");
    const double sqrt_k = std::hypot(u, 2.0 * v);
    set.j_total = u + sqrt_k;
    // H = (sqrtK - u)/2, computed as 2v^2/J when u > 0 to dodge cancellation.
    set.h_val = u > 0.0 ? 2.0 * v * v / set.j_total : 0.5 * (sqrt_k - u);
    set.j1 = 0.5 * set.j_total + set.c_n * set.c_n;
    set.j2 = v == 0.0 ? 0.0 : -2.0 * set.c_n * v / std::sqrt(set.h_val);

    // Bridge identity to the section-4 profile: (lambda m2 / 8)^2 K
    // = (1 - lambda + lambda B)^2 + (lambda D)^2.
    auto [b_prof, d_prof] = bd_point(dist, theta1);
    double lhs = std::pow(lambda * set.m2 / 8.0, 2) * set.k_val;
    double x = 1.0 - lambda + lambda * b_prof;
    double y = lambda * d_prof;
    double rhs = x * x + y * y;
    if (std::fabs(lhs - rhs) > 1e-8 * std::max(rhs, 1e-300))
        throw Error(ErrorClass::Numeric, "abcd: bridge identity violated");
    return set;
}

namespace {

QuarticFactors factor_core(double A, double B, double C, double D) {
    const double u = 4.0 * B - A * A + C * C;
    if (!(4.0 * B - A * A - C * C > 0.0))
        throw NotPositiveDefinite("quartic_factor: needs 4B - A^2 - C^2 > 0");
    const double v = 2.0 * D - A * C;
    const double sqrt_k = std::hypot(u, 2.0 * v);
    const double j = u + sqrt_k;  // > 0 under the precondition

    QuarticFactors f;
    if (std::fabs(v) < 1e-12 * (1.0 + std::fabs(A) * std::fabs(C))) {
        f.branch = QuarticBranch::Degenerate;
        f.a_plus = f.a_minus = A;
        double root = std::sqrt(u) * std::fabs(C);
        f.b_plus = 0.5 * (2.0 * B + C * C + root);
        f.b_minus = 0.5 * (2.0 * B + C * C - root);
    } else {
        f.branch = QuarticBranch::Generic;
        const double h = 2.0 * v * v / j;
        const double sqrt_h = std::sqrt(h);
        // 2AH/sqrtH - 2C(2D-AC)/sqrtH with (2D-AC)/sqrtH = sgn(v) sqrt(J/2).
        const double cross = 2.0 * A * sqrt_h - 2.0 * C * sgn(v) * std::sqrt(0.5 * j);
        f.a_plus = A + sqrt_h;
        f.a_minus = A - sqrt_h;
        f.b_plus = 0.25 * (A * A + C * C + sqrt_k + cross);
        f.b_minus = 0.25 * (A * A + C * C + sqrt_k - cross);
    }

    const double da = f.a_plus - f.a_minus;
    const double db = f.b_minus - f.b_plus;
    const double w = da * (f.a_plus * f.b_minus - f.a_minus * f.b_plus) + db * db;
    if (std::fabs(w) < 1e-14 * (1.0 + B * B + D * D)) {
        // Both quadratic factors coincide (C = 0 and 2D = AC): Re[1/phi]
        // reduces to 1/q which the (0, 1/2, 1/2) split still represents;
        // 1/|phi|^2 = 1/q^2 leaves the partial-fraction family.
        f.pf_re = {0.0, 0.5, 0.5};
        f.pf_im = {0.0, 0.0, 0.0};
        f.pf_sq = {0.0, 0.0, 0.0};
        f.pf_sq_valid = false;
        return f;
    }

    const double cross_b = f.a_plus * f.b_minus - f.a_minus * f.b_plus;
    f.pf_re = {(-cross_b + A * db + B * da) / w,
               (-f.b_plus * db - A * da * f.b_plus + B * f.a_plus * da + B * db) / w,
               (f.b_minus * db + A * da * f.b_minus - B * f.a_minus * da - B * db) / w};
    f.pf_im = {(C * db + D * da) / w,
               (-C * da * f.b_plus + D * f.a_plus * da + D * db) / w,
               (C * da * f.b_minus - D * f.a_minus * da - D * db) / w};
    f.pf_sq = {da / w, (f.a_plus * da + db) / w, (-f.a_minus * da - db) / w};
    return f;
}

}  // namespace

QuarticFactors quartic_factor(const AbcdSet& set) {
    return factor_core(set.a_n, set.b_n, set.c_n, set.d_n);
}

QuarticFactors quartic_factor_raw(double a, double b, double c, double d) {
    return factor_core(a, b, c, d);
}

AbNumeric ab_numeric(const IncrementDistribution& dist, double theta1, double lambda,
                     const QuadratureSpec& quad) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw OutOfRange("ab_numeric: lambda must lie in (0,1)");
    double m2 = moments(dist).e_x2_sq;
    InnerResult r = inner_integral(dist, theta1, lambda, m2, quad);
    return {r.value.real(), r.value.imag(), r.error};
}

std::pair<double, double> ab_closed(const AbcdSet& set, const IncrementDistribution& dist) {
    if (!(set.k_val > 0.0)) throw DegenerateK("ab_closed: K must be positive");
    const double sqrt_k = std::sqrt(set.k_val);
    const double v = 2.0 * set.d_n - set.a_n * set.c_n;
    const double lm2 = set.lambda * set.m2;
    const double sqrt_j = std::sqrt(set.j_total);
    double a_tilde = std::sqrt(2.0) * sqrt_j / (lm2 * sqrt_k);
    double b_tilde = std::sqrt(2.0) * 2.0 * v / (lm2 * sqrt_k * sqrt_j);

    // Section-4 rewrite in terms of (1 - lambda + lambda B, lambda D).
    auto [b_prof, d_prof] = bd_point(dist, set.theta1);
    const double x = 1.0 - set.lambda + set.lambda * b_prof;
    const double y = set.lambda * d_prof;
    const double r = std::hypot(x, y);
    const double scale = 2.0 * std::sqrt(set.lambda * set.m2);
    double a_alt = std::sqrt(x + r) / (scale * r);
    double b_alt = y / (scale * r * std::sqrt(x + r));
    double tol = 1e-9 * (std::fabs(a_tilde) + std::fabs(b_tilde) + 1.0);
    if (std::fabs(a_tilde - a_alt) > tol || std::fabs(b_tilde - b_alt) > tol)
        throw Error(ErrorClass::Numeric,
                    "ab_closed: section-3 and section-4 forms disagree");
    return {a_tilde, b_tilde};
}

QTriple q_functions(double s, double lambda, double c1, double c2) {
    if (!(s >= 0.0) || !(lambda > 0.0 && lambda < 1.0) || !(c1 > 0.0) || !(c2 > 0.0))
        throw OutOfRange("q_functions: needs s >= 0, lambda in (0,1), c1, c2 > 0");
    const double r0 = std::hypot(c1, c2);
    const double x = 1.0 - lambda + lambda * c1 * s;
    const double y = lambda * c2 * s;
    const double r = std::hypot(x, y);
    QTriple q;
    q.q = std::sqrt(x * x + y * y + x * r);
    const double a = lambda * lambda * (c1 * c1 + c2 * c2 + c1 * r0);
    q.q1 = std::sqrt(a * s * s + (1.0 - lambda) * lambda * (3.0 * c1 + r0) * s +
                     2.0 * (1.0 - lambda) * (1.0 - lambda));
    q.q2 = std::sqrt(a * s * s +
                     (1.0 - lambda) * lambda * (2.0 * c1 + r0 + c1 * c1 / r0) * s +
                     (1.0 - lambda) * (1.0 - lambda) * (1.0 + c1 / r0));
    double slack = 1e-12 * (1.0 + q.q);
    if (!(q.q2 <= q.q + slack && q.q <= q.q1 + slack))
        throw Error(ErrorClass::Numeric, "q_functions: bracket ordering violated");
    return q;
}

double line_survival(const IncrementDistribution& dist, double lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw OutOfRange("line_survival: lambda must lie in [0,1)");
    if (lambda == 0.0) return 1.0;
    auto marginal = x2_marginal(dist);
    double m2 = moments(dist).e_x2_sq;
    auto psi2 = [&](double t) {
        Complex s = 0.0;
        for (const auto& [v, p] : marginal) s += p * std::polar(1.0, t * v);
        return s;
    };
    auto f = [&](double t) { return 1.0 / (1.0 - lambda * psi2(t)); };
    QuadratureSpec spec;
    spec.tol = 1e-10;
    double width = std::sqrt(2.0 * (1.0 - lambda) / (lambda * m2));
    auto res = integrate_adaptive(f, -kPi, kPi, spec, peak_breakpoints(0.0, width));
    double g2 = res.value.real() / (2.0 * kPi);
    return 1.0 / g2;
}

LadderTransform ladder_transform(const IncrementDistribution& dist, int k, std::int64_t l,
                                 double lambda, const QuadratureSpec& quad) {
    if (k < 1) throw OutOfRange("ladder_transform: k must be >= 1");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw OutOfRange("ladder_transform: lambda must lie in (0,1)");
    double m2 = moments(dist).e_x2_sq;
    auto f = [&](double theta1) {
        InnerResult inner = inner_integral(dist, theta1, lambda, m2, quad);
        Complex h = 1.0 - 1.0 / inner.value;
        return std::polar(1.0, -theta1 * static_cast<double>(l)) *
               std::pow(h, static_cast<double>(k));
    };
    double width = std::sqrt(std::max(1.0 - lambda, 1e-14));
    auto res = integrate_adaptive(f, -kPi, kPi, quad, peak_breakpoints(0.0, width));
    Complex val = res.value / (2.0 * kPi);
    return {val.real(), std::fabs(val.imag())};
}

SurvivalFactors survival_factors(const IncrementDistribution& dist, double lambda,
                                 int k_max, int l_max, const QuadratureSpec& quad) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw OutOfRange("survival_factors: lambda must lie in (0,1)");
    if (k_max < 1 || l_max < 1) throw OutOfRange("survival_factors: bad truncations");
    const double m2 = moments(dist).e_x2_sq;

    struct Sums {
        double c = 0.0, f_minus = 0.0, f_plus = 0.0;
        double f_minus_half = 0.0, f_plus_half = 0.0;  // at l_max/2, l-tail probe
        double k_tail = 0.0;
    };

    // Midpoint grid over (0, pi); the negative half contributes the conjugate.
    auto pass = [&](int m_nodes) {
        Sums s;
        std::vector<Sums> partial(static_cast<std::size_t>(m_nodes));
        parallel_for(static_cast<std::size_t>(m_nodes), [&](std::size_t j) {
            double theta = (static_cast<double>(j) + 0.5) * kPi / m_nodes;
            InnerResult inner = inner_integral(dist, theta, lambda, m2, quad);
            Complex h = 1.0 - 1.0 / inner.value;
            // P(h) = sum_{k<=k_max} h^k / k and its geometric tail bound.
            Complex p = 0.0, z = h;
            for (int k = 1; k <= k_max; ++k) {
                p += z / static_cast<double>(k);
                z *= h;
            }
            double ah = std::abs(h);
            double tail = ah < 1.0
                              ? std::pow(ah, k_max + 1) /
                                    ((k_max + 1.0) * std::max(1.0 - ah, 1e-12))
                              : 1.0;
            // w-(theta) = sum_{l=1..l_max} e^{i theta l}; w+ its conjugate.
            auto geom = [&](int lmax) {
                Complex e = std::polar(1.0, theta);
                return e * (std::polar(1.0, theta * lmax) - 1.0) / (e - 1.0);
            };
            Complex w_minus = geom(l_max);
            Complex w_minus_half = geom(l_max / 2);
            Sums& out = partial[j];
            out.c = p.real();
            out.f_minus = (w_minus * p).real();
            out.f_plus = (std::conj(w_minus) * p).real();
            out.f_minus_half = (w_minus_half * p).real();
            out.f_plus_half = (std::conj(w_minus_half) * p).real();
            out.k_tail = tail * std::max(1.0, std::abs(w_minus));
        });
        for (const Sums& p : partial) {
            s.c += p.c;
            s.f_minus += p.f_minus;
            s.f_plus += p.f_plus;
            s.f_minus_half += p.f_minus_half;
            s.f_plus_half += p.f_plus_half;
            s.k_tail = std::max(s.k_tail, p.k_tail);
        }
        // (1/2pi) int over (-pi,pi) = (1/pi) * mean over (0,pi) of the real part.
        double scale = 1.0 / m_nodes;
        s.c *= scale;
        s.f_minus *= scale;
        s.f_plus *= scale;
        s.f_minus_half *= scale;
        s.f_plus_half *= scale;
        return s;
    };

    int m_nodes = std::max(2048, 4 * l_max);
    Sums s = pass(m_nodes);
    for (int round = 0; round < 3; ++round) {
        Sums s2 = pass(2 * m_nodes);
        double drift = std::fabs(s2.c - s.c) + std::fabs(s2.f_minus - s.f_minus) +
                       std::fabs(s2.f_plus - s.f_plus);
        s = s2;
        m_nodes *= 2;
        if (drift < std::max(quad.tol * 100.0, 1e-8)) break;
    }

    if (s.k_tail > 1e-4)
        throw TruncationNotConverged("survival_factors: k-tail bound " +
                                     std::to_string(s.k_tail) + " exceeds 1e-4");

    SurvivalFactors out;
    out.lambda = lambda;
    out.k_max = k_max;
    out.l_max = l_max;
    out.c_lam = std::exp(-s.c);
    out.f_inf = std::exp(-s.f_minus);
    out.f_zero = std::exp(-s.f_plus);
    double l_tail = std::fabs(s.f_minus - s.f_minus_half) +
                    std::fabs(s.f_plus - s.f_plus_half);
    out.truncation_bound = s.k_tail + l_tail;
    return out;
}

I0Result i0_series(double s0, double lambda, double alpha, double c1, double c2,
                   int n_max) {
    if (!(s0 > 0.0 && s0 < 1.0)) throw OutOfRange("i0_series: s0 must lie in (0,1)");
    if (!(lambda > 0.5 && lambda < 1.0))
        throw OutOfRange("i0_series: lambda must lie in (1/2,1)");
    if (!(c1 > 0.0 && c2 > 0.0)) throw OutOfRange("i0_series: needs c1, c2 > 0");
    if (n_max < 8) throw OutOfRange("i0_series: n_max must be >= 8");

    I0Result out;

    // Direct quadrature of (2/pi) int_0^{s0} arcsin(lambda c2 t^a / (sqrt2 Q)) dt/t.
    {
        auto f = [&](double t) {
            double s = std::pow(t, alpha);
            double q = q_functions(s, lambda, c1, c2).q;
            return std::asin(lambda * c2 * s / (std::sqrt(2.0) * q)) / t;
        };
        QuadratureSpec spec;
        spec.tol = 1e-10;
        std::vector<double> bp;
        for (double e = s0 * 0.5; e > 1e-12; e *= 0.25) bp.push_back(e);
        out.direct =
            (2.0 / kPi) *
            integrate_adaptive_real([&](double t) { return f(t); }, 1e-14, s0, spec, bp);
    }

    // Series route: arcsin power series, per-term integrals from the
    // integration-by-parts recursion seeded by the n = 0 log antiderivative.
    const double upper = std::pow(s0, alpha);
    auto series_for = [&](double a, double b, double c) {
        // J~_n = a^n J_n stays O(1); term_n = coef_n (2/(a pi)) (l c2/sqrt2)^{2n+1} a^{-n} J~_n.
        double log_q_upper = std::log(a * upper * upper + b * upper + c);
        double j0 = (1.0 / std::sqrt(a)) *
                    std::log((2.0 * a * upper + b +
                              2.0 * std::sqrt(a * (a * upper * upper + b * upper + c))) /
                             (b + 2.0 * std::sqrt(a * c)));
        double j_scaled = j0;
        double coef_ratio = 1.0;  // (2n-1)!! / (2n)!!
        double weight = lambda * c2 / std::sqrt(2.0);
        double ratio = weight * weight / a;  // <= 1/2 by the arcsin-argument bound
        double pow_ratio = weight;           // weight^{2n+1} a^{-n}
        double sum = 0.0, last = 0.0;
        QuadratureSpec spec;
        spec.tol = 1e-11;
        for (int n = 0; n <= n_max; ++n) {
            if (n > 0) {
                // boundary term a^{n-1} S^{2n-1} / ((2n-1) q(S)^{(2n-1)/2})
                double log_bnd = (n - 1) * std::log(a) +
                                 (2.0 * n - 1.0) * std::log(upper) -
                                 0.5 * (2.0 * n - 1.0) * log_q_upper;
                double boundary = std::exp(log_bnd) / (2.0 * n - 1.0);
                // R~_n = a^n int_0^S s^{2n-1} q^{-(2n+1)/2} ds, log-space integrand
                auto rn = [&](double s) {
                    if (s <= 0.0) return 0.0;
                    double logq = std::log(a * s * s + b * s + c);
                    return std::exp(n * std::log(a) + (2.0 * n - 1.0) * std::log(s) -
                                    0.5 * (2.0 * n + 1.0) * logq);
                };
                std::vector<double> bp;
                for (double e = upper * 0.5; e > 1e-12; e *= 0.25) bp.push_back(e);
                double r_scaled = integrate_adaptive_real(rn, 0.0, upper, spec, bp);
                j_scaled += -boundary - (b / (2.0 * a)) * r_scaled;
                coef_ratio *= (2.0 * n - 1.0) / (2.0 * n);
                pow_ratio *= ratio;
            }
            double coef = coef_ratio / (2.0 * n + 1.0);
            last = coef * (2.0 / (alpha * kPi)) * pow_ratio * j_scaled;
            sum += last;
        }
        if (std::fabs(last) > 1e-10 * std::max(std::fabs(sum), 1e-30))
            throw SeriesNotConverged("i0_series: term at n_max still above 1e-10");
        return sum;
    };

    const double r0 = std::hypot(c1, c2);
    const double a = lambda * lambda * (c1 * c1 + c2 * c2 + c1 * r0);
    out.series_lo = series_for(a, (1.0 - lambda) * lambda * (3.0 * c1 + r0),
                               2.0 * (1.0 - lambda) * (1.0 - lambda));
    out.series_hi =
        series_for(a, (1.0 - lambda) * lambda * (2.0 * c1 + r0 + c1 * c1 / r0),
                   (1.0 - lambda) * (1.0 - lambda) * (1.0 + c1 / r0));
    out.terms = n_max + 1;

    double slack = 1e-6 * (1.0 + std::fabs(out.direct));
    if (!(out.direct >= out.series_lo - slack && out.direct <= out.series_hi + slack))
        throw Error(ErrorClass::Numeric,
                    "i0_series: direct value escapes the Q-bracket envelope");
    return out;
}

namespace {

// Fitted (alpha, c1, c2) driving the model arcsin inside ratio_curve.
struct ModelConstants {
    double alpha = 0.0, c1 = 0.0, c2 = 0.0;
    bool reflected = false;
    bool has_c2() const { return c2 > 0.0; }
};

ModelConstants fit_constants(const IncrementDistribution& dist) {
    TailFit fit = exponent_report(dist).fit;
    return {fit.alpha_hat, fit.c1_hat, fit.c2_hat, fit.reflected};
}

}  // namespace

RatioCurve ratio_curve(const IncrementDistribution& dist, const std::vector<double>& lambdas,
                       double s0, std::int64_t L, const QuadratureSpec& quad) {
    for (double l : lambdas)
        if (!(l > 0.5 && l < 1.0))
            throw OutOfRange("ratio_curve: lambda grid must lie in (1/2,1)");
    if (L < 1000) throw OutOfRange("ratio_curve: direct kernel needs L >= 1000");
    if (!(s0 > 0.0 && s0 < kPi)) throw OutOfRange("ratio_curve: s0 must lie in (0,pi)");

    ModelConstants mc = fit_constants(dist);
    const double m2 = moments(dist).e_x2_sq;
    const double sign = mc.reflected ? -1.0 : 1.0;

    RatioCurve curve;
    curve.lambdas = lambdas;
    curve.log_ratio.resize(lambdas.size());
    curve.i0_vals.resize(lambdas.size());
    curve.i1_vals.resize(lambdas.size());
    curve.i4_vals.resize(lambdas.size());
    curve.direct_kernel.resize(lambdas.size());

    QuadratureSpec outer;
    outer.tol = std::max(quad.tol, 1e-7);
    outer.max_panels = quad.max_panels;

    parallel_for(lambdas.size(), [&](std::size_t i) {
        const double lambda = lambdas[i];
        auto g = [&](double theta) {
            InnerResult inner = inner_integral(dist, theta, lambda, m2, quad);
            return std::atan2(inner.value.imag(), inner.value.real());
        };
        auto model = [&](double theta) {
            if (!mc.has_c2()) return 0.0;
            double s = std::pow(std::fabs(theta), mc.alpha);
            double q = q_functions(s, lambda, mc.c1, mc.c2).q;
            return std::asin(sign * lambda * mc.c2 * s * sgn(theta) /
                             (std::sqrt(2.0) * q));
        };

        // I0 by direct quadrature (the series route lives in i0_series).
        double i0 = 0.0;
        if (mc.has_c2()) {
            std::vector<double> bp;
            for (double e = s0 * 0.5; e > 1e-12; e *= 0.25) bp.push_back(e);
            i0 = sign * (2.0 / kPi) *
                 integrate_adaptive_real(
                     [&](double t) { return std::fabs(model(t)) / t; }, 1e-14, s0, outer,
                     bp);
        }

        // I1: the kernel-vs-model mismatch inside |theta| <= s0 (even integrand).
        std::vector<double> bp1;
        for (double e = s0 * 0.5; e > s0 * 1e-6; e *= 0.5) bp1.push_back(e);
        double i1 = (1.0 / kPi) *
                    integrate_adaptive_real(
                        [&](double t) {
                            double cot = std::cos(0.5 * t) / std::sin(0.5 * t);
                            return cot * g(t) - 2.0 / t * model(t);
                        },
                        s0 * 1e-6, s0, outer, bp1);

        // I4: the kernel contribution outside the asymptotic window.
        double i4 = (1.0 / kPi) *
                    integrate_adaptive_real(
                        [&](double t) {
                            double cot = std::cos(0.5 * t) / std::sin(0.5 * t);
                            return cot * g(t);
                        },
                        s0, kPi, outer, {});

        curve.i0_vals[i] = i0;
        curve.i1_vals[i] = i1;
        curve.i4_vals[i] = i4;
        curve.log_ratio[i] = i0 + i1 + i4;

        // Method (b): finite-L kernel against the same arcsin curve, composite
        // midpoint on (0, pi) with the grid resolving both sin(L theta) and the
        // (1-lambda)^{1/alpha} feature scale of g.
        std::int64_t m_nodes =
            std::clamp<std::int64_t>(8 * L, 8192, 65536);
        double acc = 0.0;
        for (std::int64_t jn = 0; jn < m_nodes; ++jn) {
            double t = (static_cast<double>(jn) + 0.5) * kPi / static_cast<double>(m_nodes);
            double cot = std::cos(0.5 * t) / std::sin(0.5 * t);
            double kernel = cot * (1.0 - std::cos(static_cast<double>(L) * t)) +
                            std::sin(static_cast<double>(L) * t);
            acc += kernel * g(t);
        }
        curve.direct_kernel[i] = acc / static_cast<double>(m_nodes);

        if (std::fabs(curve.direct_kernel[i] - curve.log_ratio[i]) > 0.5)
            throw KernelNotConverged("ratio_curve: arcsin-integral and direct kernel "
                                     "disagree at lambda = " +
                                     std::to_string(lambda));
    });

    if (lambdas.size() >= 8) {
        std::vector<double> one_minus, ratio;
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            one_minus.push_back(1.0 - lambdas[i]);
            ratio.push_back(std::exp(curve.log_ratio[i]));
        }
        auto mm = std::minmax_element(one_minus.begin(), one_minus.end());
        curve.slope_vs_log1mlam = loglog_fit(one_minus, ratio, {*mm.first, *mm.second}).slope;
    } else {
        curve.slope_vs_log1mlam = std::numeric_limits<double>::quiet_NaN();
    }
    curve.method = RatioMethod::ArcsinIntegral;
    return curve;
}

double pick_s0(const IncrementDistribution& dist) {
    // c* from the aperiodicity bound 1 - Re[phi] >= (c*/2)|theta|^2 on a grid.
    double c_star = 1e30;
    const int n = 48;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            double t1 = -kPi + 2.0 * kPi * i / n;
            double t2 = -kPi + 2.0 * kPi * j / n;
            double norm2 = t1 * t1 + t2 * t2;
            if (norm2 < 1e-4) continue;
            double defect = 1.0 - char_fn(dist, t1, t2).real();
            c_star = std::min(c_star, 2.0 * defect / norm2);
        }
    }
    c_star = std::max(c_star, 1e-12);

    const double m2 = moments(dist).e_x2_sq;
    for (double r = 0.5; r >= 0.05; r -= 0.05) {
        bool ok = true;
        for (int i = -8; i <= 8 && ok; ++i) {
            double t1 = r * i / 8.0;
            TrigMoments tm = trig_moments(dist, t1);
            double omc = one_minus_cos_x1(dist, t1);
            for (int j = -8; j <= 8 && ok; ++j) {
                double t2 = r * j / 8.0;
                if (t1 * t1 + t2 * t2 > r * r) continue;
                for (double lambda : {0.6, 0.9, 0.99, 0.999}) {
                    double re = (1.0 - lambda) + lambda * omc + lambda * tm.sin_x2 * t2 +
                                0.5 * lambda * m2 * t2 * t2;
                    if (re < 0.25 * c_star * t2 * t2) {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if (ok) return r;
    }
    return 0.05;
}

HalfPlaneIntegrals half_plane_integrals(const IncrementDistribution& dist, double theta1,
                                        double lambda, double alpha, double c1, double c2,
                                        const QuadratureSpec& quad) {
    HalfPlaneIntegrals out;
    out.theta1 = theta1;
    out.lambda = lambda;
    AbNumeric num = ab_numeric(dist, theta1, lambda, quad);
    out.a_num = num.a;
    out.b_num = num.b;
    out.quad_error = num.error;
    auto closed = ab_closed(abcd(dist, theta1, lambda), dist);
    out.a_tilde = closed.first;
    out.b_tilde = closed.second;
    out.arcsin_num = std::asin(num.b / std::hypot(num.a, num.b));
    if (c2 > 0.0) {
        double s = std::pow(std::fabs(theta1), alpha);
        double q = q_functions(s, lambda, c1, c2).q;
        out.arcsin_closed =
            std::asin(lambda * c2 * s * sgn(theta1) / (std::sqrt(2.0) * q));
    }
    return out;
}

}  // namespace halfline
