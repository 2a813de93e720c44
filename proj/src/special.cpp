#include "halfline/special.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace halfline {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// B_2 .. B_24, even Bernoulli numbers for the Euler-Maclaurin correction.
constexpr double kBernoulli[] = {
    1.0 / 6.0,           -1.0 / 30.0,          1.0 / 42.0,
    -1.0 / 30.0,         5.0 / 66.0,           -691.0 / 2730.0,
    7.0 / 6.0,           -3617.0 / 510.0,      43867.0 / 798.0,
    -174611.0 / 330.0,   854513.0 / 138.0,     -236364091.0 / 2730.0,
};

// Euler-Maclaurin for sum_{n>=m} n^{-s}; converges as an asymptotic expansion
// for s > -(2*terms - 1). Cutoff m must be large enough that the first
// omitted term is below target accuracy.
double em_tail(double s, double m) {
    double tail = std::pow(m, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(m, -s);
    // Correction terms B_{2k}/(2k)! * (s)(s+1)...(s+2k-2) * m^{-s-2k+1}.
    double poch = s;                      // rising factorial (s)_{2k-1}
    double mpow = std::pow(m, -s - 1.0);  // m^{-s-2k+1}
    double m2 = 1.0 / (m * m);
    double fact_inv = 0.5;                // 1/(2k)!
    for (int k = 0; k < 12; ++k) {
        tail += kBernoulli[k] * fact_inv * poch * mpow;
        double two_k = 2.0 * (k + 1);
        fact_inv /= (two_k + 1.0) * (two_k + 2.0);
        poch *= (s + two_k - 1.0) * (s + two_k);
        mpow *= m2;
    }
    return tail;
}

double zeta_em(double s) {
    // Head size chosen so the asymptotic tail is past its optimal truncation.
    const int m = 24;
    double head = 0.0;
    for (int n = 1; n < m; ++n) head += std::pow(static_cast<double>(n), -s);
    return head + em_tail(s, static_cast<double>(m));
}

}  // namespace

double gamma_real(double x) {
    if (x > 0.0) return std::tgamma(x);
    if (x == std::floor(x)) throw std::domain_error("gamma_real: pole at non-positive integer");
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return kPi / (std::sin(kPi * x) * std::tgamma(1.0 - x));
}

double riemann_zeta(double s) {
    if (s == 1.0) throw std::domain_error("riemann_zeta: pole at s=1");
    if (s >= -0.5) return zeta_em(s);
    // zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    double t = 1.0 - s;
    return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s / 2.0) *
           std::tgamma(t) * zeta_em(t);
}

double zeta_tail(double s, double m) {
    if (s <= 1.0) throw std::domain_error("zeta_tail: needs s > 1");
    if (m < 1.0) throw std::domain_error("zeta_tail: needs m >= 1");
    if (m < 16.0) {
        double head = 0.0;
        for (double n = m; n < 16.0; n += 1.0) head += std::pow(n, -s);
        return head + em_tail(s, 16.0);
    }
    return em_tail(s, m);
}

namespace {

// Shared core: Re/Im of  Li_{1+alpha}(e^{i theta}) - zeta(1+alpha)  assembled
// from  Gamma(-alpha) (-i theta)^alpha + sum_{k>=1} zeta(1+alpha-k) (i theta)^k / k!.
// The expansion converges for |theta| < 2 pi; term ratio ~ |theta| / (2 pi).
struct LiParts {
    double re;  // Re[Li] - zeta(1+alpha)
    double im;  // Im[Li]
};

// The zeta ladder zeta(1+alpha-k) depends only on alpha; the sums are hit
// inside quadrature loops, so memoize per thread for the last alpha seen.
const std::vector<double>& zeta_ladder(double alpha) {
    thread_local double cached_alpha = -1.0;
    thread_local std::vector<double> ladder;
    if (cached_alpha != alpha) {
        ladder.resize(160);
        for (int k = 1; k < 160; ++k)
            ladder[static_cast<std::size_t>(k)] =
                riemann_zeta(1.0 + alpha - static_cast<double>(k));
        cached_alpha = alpha;
    }
    return ladder;
}

LiParts li_oscillatory(double alpha, double theta) {
    double at = std::fabs(theta);
    double sgn = (theta > 0.0) ? 1.0 : (theta < 0.0 ? -1.0 : 0.0);
    LiParts out{0.0, 0.0};
    if (at == 0.0) return out;

    double g = gamma_real(-alpha);
    double power = std::pow(at, alpha);
    out.re = g * power * std::cos(kPi * alpha / 2.0);
    out.im = -g * power * std::sin(kPi * alpha / 2.0) * sgn;

    const std::vector<double>& zetas = zeta_ladder(alpha);
    // k >= 1 terms of the analytic part; i^k cycles Re/Im with alternating sign.
    double term = theta;  // theta^k / k!
    double re_sum = 0.0, im_sum = 0.0;
    for (int k = 1; k < 160; ++k) {
        double z = zetas[static_cast<std::size_t>(k)];
        double contrib = z * term;
        switch (k & 3) {
            case 0: re_sum += contrib; break;
            case 1: im_sum += contrib; break;
            case 2: re_sum -= contrib; break;
            case 3: im_sum -= contrib; break;
        }
        term *= theta / static_cast<double>(k + 1);
        if (std::fabs(z * term) < 1e-17 * (1.0 + std::fabs(re_sum) + std::fabs(im_sum)) &&
            k > 8)
            break;
    }
    out.re += re_sum;
    out.im += im_sum;
    return out;
}

}  // namespace

double heavy_one_minus_cos_sum(double alpha, double theta) {
    // sum n^{-1-alpha} (1 - cos n theta) = zeta(1+alpha) - Re[Li_{1+alpha}(e^{i theta})]
    return -li_oscillatory(alpha, theta).re;
}

double heavy_sin_sum(double alpha, double theta) {
    return li_oscillatory(alpha, theta).im;
}

}  // namespace halfline
