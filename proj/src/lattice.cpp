#include "halfline/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "halfline/errors.hpp"
#include "halfline/special.hpp"

namespace halfline {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw MalformedDistribution("rational overflow while combining probabilities");
    return r;
}

}  // namespace

Rational64 Rational64::make(std::int64_t num, std::int64_t den) {
    if (den == 0) throw MalformedDistribution("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational64{num, den};
}

Rational64 Rational64::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return make(std::stoll(text), 1);
        return make(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw MalformedDistribution("cannot parse rational '" + text + "'");
    }
}

std::string Rational64::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

OneDimLaw OneDimLaw::from_rationals(
    const std::vector<std::pair<std::int64_t, Rational64>>& entries) {
    OneDimLaw law;
    for (const auto& [v, r] : entries) {
        law.atoms.emplace_back(v, r.to_double());
        law.exact.push_back(r);
    }
    return law;
}

// ---------------------------------------------------------------------------
// Construction

IncrementDistribution IncrementDistribution::simple_walk() {
    std::vector<Atom> atoms;
    const Rational64 quarter = Rational64::make(1, 4);
    atoms.push_back({{1, 0}, 0.25, quarter});
    atoms.push_back({{-1, 0}, 0.25, quarter});
    atoms.push_back({{0, 1}, 0.25, quarter});
    atoms.push_back({{0, -1}, 0.25, quarter});
    return table(std::move(atoms));
}

IncrementDistribution IncrementDistribution::table(std::vector<Atom> atoms, double delta) {
    IncrementDistribution d;
    d.kind_ = DistKind::Table;
    d.delta_ = delta;
    d.atoms_ = std::move(atoms);
    d.build_samplers();
    return d;
}

IncrementDistribution IncrementDistribution::product(OneDimLaw x1, OneDimLaw x2,
                                                     double delta) {
    IncrementDistribution d;
    d.kind_ = DistKind::Product;
    d.delta_ = delta;
    d.x1_law_ = std::move(x1);
    d.x2_law_ = std::move(x2);
    const bool exact = d.x1_law_.exact.size() == d.x1_law_.atoms.size() &&
                       d.x2_law_.exact.size() == d.x2_law_.atoms.size();
    for (std::size_t i = 0; i < d.x1_law_.atoms.size(); ++i) {
        for (std::size_t j = 0; j < d.x2_law_.atoms.size(); ++j) {
            Atom a;
            a.step = {d.x1_law_.atoms[i].first, d.x2_law_.atoms[j].first};
            a.p = d.x1_law_.atoms[i].second * d.x2_law_.atoms[j].second;
            if (exact && d.x1_law_.exact[i] && d.x2_law_.exact[j]) {
                const Rational64& r1 = *d.x1_law_.exact[i];
                const Rational64& r2 = *d.x2_law_.exact[j];
                a.exact = Rational64::make(checked_mul(r1.num, r2.num),
                                           checked_mul(r1.den, r2.den));
                a.p = a.exact->to_double();
            }
            d.atoms_.push_back(a);
        }
    }
    d.build_samplers();
    return d;
}

OneDimLaw IncrementDistribution::default_x2_law() {
    return OneDimLaw::from_rationals({{-1, Rational64::make(1, 4)},
                                      {0, Rational64::make(1, 2)},
                                      {1, Rational64::make(1, 4)}});
}

IncrementDistribution IncrementDistribution::heavy_tail(double alpha, OneDimLaw x2,
                                                        int head_size, double delta) {
    auto [c_minus, c_plus] = solve_heavy_tail(alpha);
    IncrementDistribution d;
    d.kind_ = DistKind::HeavyTailX1Product;
    d.delta_ = delta;
    d.x2_law_ = std::move(x2);
    d.heavy_ = HeavyTailParams{alpha, c_minus, c_plus, head_size};
    if (head_size < 16) throw OutOfRange("heavy_tail: head_size must be at least 16");
    d.build_samplers();
    return d;
}

IncrementDistribution IncrementDistribution::mirrored_x1() const {
    IncrementDistribution d = *this;
    if (!finite_support()) {
        d.x1_mirrored_ = !d.x1_mirrored_;
        return d;
    }
    for (Atom& a : d.atoms_) a.step.x1 = -a.step.x1;
    for (auto& [v, p] : d.x1_law_.atoms) {
        (void)p;
        v = -v;
    }
    d.build_samplers();
    return d;
}

std::pair<double, double> solve_heavy_tail(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw OutOfRange("solve_heavy_tail: alpha must lie in (1,2)");
    // Total mass: c-(zeta(1+a)) + c+ = 1; zero mean: c+ = c-(zeta(a)).
    double za = riemann_zeta(alpha);
    double za1 = riemann_zeta(1.0 + alpha);
    double c_minus = 1.0 / (za1 + za);
    return {c_minus, c_minus * za};
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

// Probabilities representable as m / 2^bits for bits <= 8 admit an exact
// bit-slice decoder; covers the simple walk and the default X2 law.
bool try_dyadic(const std::vector<double>& probs, unsigned max_bits,
                std::vector<std::uint32_t>* decode, unsigned* bits_out) {
    for (unsigned bits = 1; bits <= max_bits; ++bits) {
        double scale = static_cast<double>(1u << bits);
        std::vector<std::uint32_t> counts(probs.size());
        std::uint64_t total = 0;
        bool ok = true;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            double scaled = probs[i] * scale;
            double rounded = std::nearbyint(scaled);
            if (scaled != rounded) {
                ok = false;
                break;
            }
            counts[i] = static_cast<std::uint32_t>(rounded);
            total += counts[i];
        }
        if (!ok || total != (1ull << bits)) continue;
        decode->clear();
        for (std::size_t i = 0; i < probs.size(); ++i)
            decode->insert(decode->end(), counts[i], static_cast<std::uint32_t>(i));
        *bits_out = bits;
        return true;
    }
    return false;
}

}  // namespace

void IncrementDistribution::build_samplers() {
    auto build = [](const std::vector<double>& probs, DiscreteSampler* s) {
        s->cdf.resize(probs.size());
        double run = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            run += probs[i];
            s->cdf[i] = run;
        }
        if (!s->cdf.empty()) s->cdf.back() = std::max(s->cdf.back(), 1.0);
        std::size_t guide_size = std::max<std::size_t>(64, 4 * probs.size());
        s->guide.resize(guide_size + 1);
        std::size_t idx = 0;
        for (std::size_t k = 0; k <= guide_size; ++k) {
            double u = static_cast<double>(k) / static_cast<double>(guide_size);
            while (idx + 1 < s->cdf.size() && s->cdf[idx] <= u) ++idx;
            s->guide[k] = static_cast<std::uint32_t>(idx);
        }
        try_dyadic(probs, 8, &s->dyadic, &s->dyadic_bits);
    };

    if (finite_support()) {
        std::vector<double> probs;
        probs.reserve(atoms_.size());
        for (const Atom& a : atoms_) probs.push_back(a.p);
        if (!probs.empty()) build(probs, &table_sampler_);
        return;
    }

    std::vector<double> x2probs;
    for (const auto& [v, p] : x2_law_.atoms) x2probs.push_back(p);
    build(x2probs, &x2_sampler_);

    // Head CDF of the negative side: heavy_cdf_[n-1] = c- sum_{m<=n} m^{-1-a}.
    heavy_cdf_.resize(static_cast<std::size_t>(heavy_.head_size));
    double run = 0.0;
    for (int n = 1; n <= heavy_.head_size; ++n) {
        run += heavy_.c_minus * std::pow(static_cast<double>(n), -1.0 - heavy_.alpha);
        heavy_cdf_[static_cast<std::size_t>(n - 1)] = run;
    }
    // Guide table over [0, C(head)]: cuts the head search to O(1) probes.
    std::size_t g = heavy_cdf_.size() * 2;
    heavy_guide_.resize(g + 1);
    heavy_guide_scale_ = static_cast<double>(g) / heavy_cdf_.back();
    std::size_t idx = 0;
    for (std::size_t k = 0; k <= g; ++k) {
        double w = static_cast<double>(k) / heavy_guide_scale_;
        while (idx + 1 < heavy_cdf_.size() && heavy_cdf_[idx] <= w) ++idx;
        heavy_guide_[k] = static_cast<std::uint32_t>(idx);
    }
}

std::uint32_t IncrementDistribution::DiscreteSampler::draw(RngStream& rng) const {
    double u = rng.next_double();
    std::size_t guide_size = guide.size() - 1;
    std::size_t idx = guide[static_cast<std::size_t>(u * static_cast<double>(guide_size))];
    while (idx + 1 < cdf.size() && cdf[idx] <= u) ++idx;
    return static_cast<std::uint32_t>(idx);
}

std::uint32_t IncrementDistribution::DiscreteSampler::draw_bits(BitSource& bits) const {
    return dyadic[bits.take(dyadic_bits)];
}

std::int64_t IncrementDistribution::sample_heavy_x1(double u) const {
    if (u < heavy_.c_plus) return 1;
    const double w = u - heavy_.c_plus;  // position within the negative side
    if (w < heavy_cdf_.back()) {
        std::size_t idx = heavy_guide_[static_cast<std::size_t>(w * heavy_guide_scale_)];
        while (heavy_cdf_[idx] <= w) ++idx;
        return -(static_cast<std::int64_t>(idx) + 1);
    }
    // Tail inversion on the analytic remainder R(n) = c- sum_{m>n} m^{-1-a};
    // want the smallest n with R(n) < r, r = (1 - c+) - w > 0.
    const double total_neg = heavy_.c_minus * riemann_zeta(1.0 + heavy_.alpha);
    const double r = std::max(total_neg - w, 1e-300);
    auto remainder = [&](double n) {
        return heavy_.c_minus * zeta_tail(1.0 + heavy_.alpha, n + 1.0);
    };
    double lo = static_cast<double>(heavy_.head_size);  // R(lo) >= r
    double hi = 2.0 * lo;
    while (remainder(hi) >= r) {
        lo = hi;
        hi *= 2.0;
        if (hi > 9e15) break;  // beyond resolvable mass of a 53-bit uniform
    }
    while (hi - lo > 0.5) {
        double mid = std::floor(0.5 * (lo + hi));
        if (mid <= lo || mid >= hi) break;
        if (remainder(mid) < r)
            hi = mid;
        else
            lo = mid;
    }
    return -static_cast<std::int64_t>(hi);
}

LatticePoint IncrementDistribution::sample_increment(RngStream& rng) const {
    if (finite_support()) {
        std::uint32_t idx = table_sampler_.draw(rng);
        return atoms_[idx].step;
    }
    std::int64_t x1 = sample_heavy_x1(rng.next_double());
    if (x1_mirrored_) x1 = -x1;
    std::uint32_t j = x2_sampler_.draw(rng);
    return {x1, x2_law_.atoms[j].first};
}

double IncrementDistribution::heavy_x1_cdf(std::int64_t t) const {
    if (x1_mirrored_) {
        // P{-X <= t} = 1 - P{X <= -t-1} on the integer lattice
        IncrementDistribution base = *this;
        base.x1_mirrored_ = false;
        return 1.0 - base.heavy_x1_cdf(-t - 1);
    }
    if (t >= 1) return 1.0;
    if (t >= 0) return 1.0 - heavy_.c_plus;
    double n = static_cast<double>(-t);  // P{X1 <= -n} = c- sum_{m>=n} m^{-1-a}
    return heavy_.c_minus * zeta_tail(1.0 + heavy_.alpha, n);
}

bool IncrementDistribution::has_exact_table() const {
    if (!finite_support() || atoms_.empty()) return false;
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [](const Atom& a) { return a.exact.has_value(); });
}

std::int64_t IncrementDistribution::max_abs_step() const {
    std::int64_t m = 0;
    for (const Atom& a : atoms_) {
        m = std::max(m, a.step.x1 < 0 ? -a.step.x1 : a.step.x1);
        m = std::max(m, a.step.x2 < 0 ? -a.step.x2 : a.step.x2);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

// Elementary-divisor test: the subgroup generated by the support equals Z^2
// iff gcd of all coordinates is 1 and gcd of all 2x2 minors is 1.
bool generates_z2(const std::vector<LatticePoint>& support) {
    std::int64_t g_coord = 0;
    for (const auto& v : support) g_coord = std::gcd(g_coord, std::gcd(v.x1, v.x2));
    if (g_coord != 1) return false;
    std::int64_t g_minor = 0;
    for (std::size_t i = 0; i < support.size() && g_minor != 1; ++i) {
        for (std::size_t j = i + 1; j < support.size() && g_minor != 1; ++j) {
            std::int64_t det = support[i].x1 * support[j].x2 - support[i].x2 * support[j].x1;
            g_minor = std::gcd(g_minor, det);
        }
    }
    return g_minor == 1;
}

}  // namespace

ValidationReport validate(const IncrementDistribution& dist) {
    ValidationReport rep;
    double total = 0.0;
    std::vector<LatticePoint> support;

    if (dist.finite_support()) {
        if (dist.atoms().empty()) throw MalformedDistribution("empty support");
        for (const Atom& a : dist.atoms()) {
            if (a.p < 0.0) throw MalformedDistribution("negative probability");
            total += a.p;
            if (a.p > 0.0) support.push_back(a.step);
        }
        if (support.empty()) throw MalformedDistribution("all atoms have zero probability");
    } else {
        const auto& h = dist.heavy();
        if (h.c_minus <= 0.0 || h.c_plus <= 0.0)
            throw MalformedDistribution("heavy tail needs positive c-, c+");
        double x2_total = 0.0;
        for (const auto& [v, p] : dist.x2_law().atoms) {
            (void)v;
            if (p < 0.0) throw MalformedDistribution("negative probability");
            x2_total += p;
        }
        double x1_total = h.c_plus + h.c_minus * riemann_zeta(1.0 + h.alpha);
        total = x1_total * x2_total;
        for (const auto& [v, p] : dist.x2_law().atoms)
            if (p > 0.0)
                for (std::int64_t x1 : {1LL, -1LL, -2LL}) support.push_back({x1, v});
    }

    if (std::fabs(total - 1.0) > 1e-9)
        throw NotNormalized("probabilities sum to " + std::to_string(total));
    rep.normalized = std::fabs(total - 1.0) <= 1e-12;
    rep.aperiodic = generates_z2(support);

    double e_x2 = 0.0;
    if (dist.finite_support()) {
        for (const Atom& a : dist.atoms()) e_x2 += a.p * static_cast<double>(a.step.x2);
    } else {
        for (const auto& [v, p] : dist.x2_law().atoms) e_x2 += p * static_cast<double>(v);
    }
    rep.mean_zero_x2 = std::fabs(e_x2) <= 1e-10;

    rep.moments_finite =
        dist.finite_support() || dist.delta() < dist.heavy().alpha;
    return rep;
}

std::string ValidationReport::failure_message() const {
    std::string msg;
    if (!aperiodic) msg += "condition (a) violated: support does not generate Z^2; ";
    if (!mean_zero_x2) msg += "condition (b) violated: E[X2] != 0; ";
    if (!moments_finite) msg += "condition (c) violated: divergent moment; ";
    if (!normalized) msg += "probabilities do not sum to 1; ";
    return msg;
}

// ---------------------------------------------------------------------------
// Moments and characteristic function

MomentSet moments(const IncrementDistribution& dist) {
    MomentSet m;
    m.delta = dist.delta();
    m.delta_hat = dist.delta() * dist.delta() / (2.0 + dist.delta());

    auto accumulate_x2 = [&m](double p, double v) {
        m.e_x2 += p * v;
        m.e_x2_sq += p * v * v;
        m.e_abs_x2_2plus_delta += p * std::pow(std::fabs(v), 2.0 + m.delta);
    };

    if (dist.finite_support()) {
        for (const Atom& a : dist.atoms()) {
            accumulate_x2(a.p, static_cast<double>(a.step.x2));
            m.e_abs_x1_delta += a.p * std::pow(std::fabs(static_cast<double>(a.step.x1)),
                                               dist.delta());
        }
        return m;
    }

    const auto& h = dist.heavy();
    if (dist.delta() >= h.alpha)
        throw DivergentMoment("E[|X1|^delta] diverges: delta >= alpha");
    for (const auto& [v, p] : dist.x2_law().atoms) accumulate_x2(p, static_cast<double>(v));
    // c+ * 1^delta + c- * sum n^{delta-1-alpha}
    m.e_abs_x1_delta = h.c_plus + h.c_minus * riemann_zeta(1.0 + h.alpha - dist.delta());
    return m;
}

double one_minus_cos_x1(const IncrementDistribution& dist, double theta1) {
    if (dist.finite_support()) {
        double sum = 0.0;
        for (const Atom& a : dist.atoms()) {
            double s = std::sin(0.5 * theta1 * static_cast<double>(a.step.x1));
            sum += a.p * 2.0 * s * s;
        }
        return sum;
    }
    const auto& h = dist.heavy();
    double s = std::sin(0.5 * theta1);
    return h.c_plus * 2.0 * s * s +
           h.c_minus * heavy_one_minus_cos_sum(h.alpha, theta1);
}

namespace {

double heavy_e_sin(const HeavyTailParams& h, double theta1) {
    // X1 = +1 carries c+, the negative side flips the sign of the sine sum.
    return h.c_plus * std::sin(theta1) - h.c_minus * heavy_sin_sum(h.alpha, theta1);
}

}  // namespace

TrigMoments trig_moments(const IncrementDistribution& dist, double theta1) {
    TrigMoments t;
    t.theta1 = theta1;
    if (dist.finite_support()) {
        double omc = 0.0;
        for (const Atom& a : dist.atoms()) {
            double x1 = static_cast<double>(a.step.x1);
            double x2 = static_cast<double>(a.step.x2);
            double s = std::sin(theta1 * x1);
            double half = std::sin(0.5 * theta1 * x1);
            double one_minus_cos = 2.0 * half * half;
            t.sin1 += a.p * s;
            omc += a.p * one_minus_cos;
            t.sin_x2 += a.p * s * x2;
            t.cos_x2 -= a.p * one_minus_cos * x2;
        }
        t.cos1 = 1.0 - omc;
        return t;
    }
    const auto& h = dist.heavy();
    t.cos1 = 1.0 - one_minus_cos_x1(dist, theta1);
    t.sin1 = (dist.x1_mirrored() ? -1.0 : 1.0) * heavy_e_sin(h, theta1);
    double e_x2 = 0.0;
    for (const auto& [v, p] : dist.x2_law().atoms) e_x2 += p * static_cast<double>(v);
    // X1 independent of X2, so the cross moments factor through E[X2].
    t.sin_x2 = t.sin1 * e_x2;
    t.cos_x2 = (t.cos1 - 1.0) * e_x2;
    return t;
}

std::complex<double> char_fn(const IncrementDistribution& dist, double theta1,
                             double theta2) {
    if (dist.finite_support()) {
        std::complex<double> sum = 0.0;
        for (const Atom& a : dist.atoms())
            sum += a.p * std::polar(1.0, theta1 * static_cast<double>(a.step.x1) +
                                             theta2 * static_cast<double>(a.step.x2));
        return sum;
    }
    TrigMoments t = trig_moments(dist, theta1);
    std::complex<double> phi1(t.cos1, t.sin1);
    std::complex<double> phi2 = 0.0;
    for (const auto& [v, p] : dist.x2_law().atoms)
        phi2 += p * std::polar(1.0, theta2 * static_cast<double>(v));
    return phi1 * phi2;
}

PhiSlice::PhiSlice(const IncrementDistribution& dist, double theta1) {
    if (dist.finite_support()) {
        std::vector<std::pair<std::int64_t, std::complex<double>>> acc;
        for (const Atom& a : dist.atoms()) {
            std::complex<double> c =
                a.p * std::polar(1.0, theta1 * static_cast<double>(a.step.x1));
            auto it = std::find_if(acc.begin(), acc.end(),
                                   [&](const auto& g) { return g.first == a.step.x2; });
            if (it == acc.end())
                acc.emplace_back(a.step.x2, c);
            else
                it->second += c;
        }
        for (const auto& [x2, c] : acc) groups_.emplace_back(static_cast<double>(x2), c);
        return;
    }
    TrigMoments t = trig_moments(dist, theta1);
    std::complex<double> phi1(t.cos1, t.sin1);
    for (const auto& [v, p] : dist.x2_law().atoms)
        groups_.emplace_back(static_cast<double>(v), phi1 * p);
}

std::complex<double> PhiSlice::operator()(double theta2) const {
    std::complex<double> sum = 0.0;
    for (const auto& [x2, coeff] : groups_) sum += coeff * std::polar(1.0, theta2 * x2);
    return sum;
}

}  // namespace halfline
