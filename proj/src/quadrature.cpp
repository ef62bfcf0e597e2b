#include "ratclust/quadrature.hpp"

#include "ratclust/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace ratclust {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// sech^2(v) = 4 e^{-2|v|} / (1 + e^{-2|v|})^2, finite for all v.
double sech2(double v) {
    const double e = std::exp(-2.0 * std::abs(v));
    return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

// 8-point Gauss-Legendre on [-1, 1], expanded from the half-rule Boost stores.
struct GaussRule {
    std::array<double, 8> x{};
    std::array<double, 8> w{};
};

const GaussRule& gauss8() {
    static const GaussRule rule = [] {
        using G = boost::math::quadrature::gauss<double, 8>;
        GaussRule r;
        const auto& ab = G::abscissa();
        const auto& wt = G::weights();
        for (std::size_t i = 0; i < 4; ++i) {
            r.x[i] = -ab[3 - i];
            r.w[i] = wt[3 - i];
            r.x[7 - i] = ab[3 - i];
            r.w[7 - i] = wt[3 - i];
        }
        return r;
    }();
    return rule;
}

// phi(t) - r(t) on the real axis at distance u > 0 outside the endpoint (left: t = -1-u).
double axis_error(const QuadratureRule& rule, bool left, double u) {
    double r = 0.0;
    if (left) {
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) r -= rule.weights[k] / (u + rule.left_gap[k]);
        return std::log(u / (2.0 + u)) - r;
    }
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) r += rule.weights[k] / (u + rule.right_gap[k]);
    return std::log((2.0 + u) / u) - r;
}

}  // namespace

double VariableTransform::g(double s) const {
    return kind == TransformKind::tanh ? std::tanh(s) : std::tanh(kHalfPi * std::sinh(s));
}

double VariableTransform::g_prime(double s) const {
    if (kind == TransformKind::tanh) return sech2(s);
    return kHalfPi * std::cosh(s) * sech2(kHalfPi * std::sinh(s));
}

double VariableTransform::gap_left(double s) const {
    const double v = kind == TransformKind::tanh ? s : kHalfPi * std::sinh(s);
    return 2.0 / (1.0 + std::exp(-2.0 * v));
}

double VariableTransform::gap_right(double s) const {
    const double v = kind == TransformKind::tanh ? s : kHalfPi * std::sinh(s);
    return 2.0 / (1.0 + std::exp(2.0 * v));
}

double QuadratureRule::offset(std::size_t i) const { return static_cast<double>(i) - (n - 1) / 2.0; }

double default_step(TransformKind kind, int n) {
    if (n < 1) throw InvalidArgument("quadrature rule needs n >= 1");
    if (kind == TransformKind::tanh) return std::numbers::pi / std::sqrt(static_cast<double>(n));
    return 1.2 * std::log(2.0 * std::numbers::pi * n) / n;
}

QuadratureRule build_rule(TransformKind kind, int n, std::optional<double> h) {
    if (n < 1) throw InvalidArgument("quadrature rule needs n >= 1");
    const double step = h.value_or(default_step(kind, n));
    if (!(step > 0) || !std::isfinite(step)) throw InvalidArgument("quadrature step must be positive");
    const VariableTransform g{kind};
    QuadratureRule rule;
    rule.kind = kind;
    rule.n = n;
    rule.h = step;
    const auto size = static_cast<std::size_t>(n);
    rule.nodes.resize(size);
    rule.weights.resize(size);
    rule.left_gap.resize(size);
    rule.right_gap.resize(size);
    // Computed from |k| and mirrored so the rule is exactly symmetric.
    for (std::size_t i = 0; i < size; ++i) {
        const double k = rule.offset(i);
        const double s = std::abs(k) * step;
        const double x = g.g(s), w = step * g.g_prime(s);
        const double near = g.gap_right(s), far = g.gap_left(s);  // 1 - |x|, 1 + |x|
        rule.weights[i] = w;
        if (k < 0) {
            rule.nodes[i] = -x;
            rule.left_gap[i] = near;
            rule.right_gap[i] = far;
        } else {
            rule.nodes[i] = x;
            rule.left_gap[i] = far;
            rule.right_gap[i] = near;
        }
    }
    return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
    return integrate(rule, GapIntegrand([&](double x, double, double) { return f(x); }));
}

double integrate(const QuadratureRule& rule, const GapIntegrand& f) {
    const std::size_t size = rule.nodes.size();
    auto value = [&](std::size_t i) {
        const double v = f(rule.nodes[i], rule.left_gap[i], rule.right_gap[i]);
        if (!std::isfinite(v)) throw EvaluationError("non-finite integrand at node", rule.nodes[i]);
        return v;
    };
    // Pairwise symmetric accumulation: odd integrands cancel exactly.
    double sum = 0.0;
    for (std::size_t i = 0; i < size / 2; ++i) sum += rule.weights[i] * (value(i) + value(size - 1 - i));
    if (size % 2 == 1) sum += rule.weights[size / 2] * value(size / 2);
    return sum;
}

std::vector<double> endpoint_distances(const QuadratureRule& rule) {
    std::vector<double> d;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        if (rule.offset(i) < 0) d.push_back(rule.left_gap[i]);
    std::sort(d.begin(), d.end());
    return d;
}

Complex characteristic_phi(Complex t) {
    if (t.imag() == 0.0 && std::abs(t.real()) <= 1.0)
        throw BranchCutError("characteristic function evaluated on the cut [-1, 1]");
    // log(1 + w), w = 2/(t - 1), with log1p for the modulus
    const Complex w = 2.0 / (t - 1.0);
    const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
    const double im = std::atan2(w.imag(), 1.0 + w.real());
    return {re, im};
}

Complex rule_rational(const QuadratureRule& rule, Complex t) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const Complex diff = rule.nodes[k] < 0 ? (t + 1.0) - rule.left_gap[k] : (t - 1.0) + rule.right_gap[k];
        if (diff == 0.0) throw PoleEvaluationError("rule rational evaluated at node " + std::to_string(k), k);
        sum += rule.weights[k] / diff;
    }
    return sum;
}

Complex rule_rational_closed_form(TransformKind kind, int n, double h, Complex t) {
    Complex sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = (i - (n - 1) / 2.0) * h;
        if (kind == TransformKind::tanh) {
            const double c = std::cosh(s);
            sum += (1.0 / (c * c)) / (t - std::tanh(s));
        } else {
            const double v = kHalfPi * std::sinh(s);
            const double c = std::cosh(v);
            sum += (kHalfPi * std::cosh(s) / (c * c)) / (t - std::tanh(v));
        }
    }
    return h * sum;
}

double reference_integral(const AnalyticFunction& f) {
    const QuadratureRule rule = build_rule(TransformKind::tanh_sinh, 200);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * f(Complex(rule.nodes[k])).real();
    return sum;
}

namespace {

void validate_contour(const Contour& contour) {
    if (const auto* rect = std::get_if<RectangleContour>(&contour)) {
        if (!(rect->x_min < -1.0 && rect->x_max > 1.0 && rect->y_min < 0.0 && rect->y_max > 0.0))
            throw InvalidArgument("contour rectangle must enclose [-1, 1] strictly");
    } else {
        const auto& ell = std::get<EllipseContour>(contour);
        if (!(ell.a > 1.0 && ell.b > 0.0))
            throw InvalidArgument("contour ellipse must enclose [-1, 1] strictly");
    }
}

// Accumulates \int g(t) dt along a straight segment with `panels` Gauss panels.
template <class G>
Complex segment_integral(Complex from, Complex to, int panels, const G& g) {
    const auto& gl = gauss8();
    const Complex step = (to - from) / static_cast<double>(panels);
    Complex sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const Complex mid = from + step * (p + 0.5);
        for (std::size_t j = 0; j < 8; ++j) sum += gl.w[j] * g(mid + 0.5 * gl.x[j] * step);
    }
    return sum * 0.5 * step;
}

}  // namespace

GtmCheck gtm_error_identity_check(const QuadratureRule& rule, const AnalyticFunction& f, const Contour& contour,
                                  std::optional<double> exact, ContourQuadrature discretization) {
    validate_contour(contour);
    if (discretization.panels < 1) throw InvalidArgument("contour needs at least one panel");
    const double reference = exact ? *exact : reference_integral(f);
    double quadrature_sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        quadrature_sum += rule.weights[k] * f(Complex(rule.nodes[k])).real();

    auto integrand = [&](Complex t) { return f(t) * (characteristic_phi(t) - rule_rational(rule, t)); };
    Complex total = 0.0;
    if (const auto* rect = std::get_if<RectangleContour>(&contour)) {
        const Complex c0(rect->x_min, rect->y_min), c1(rect->x_max, rect->y_min), c2(rect->x_max, rect->y_max),
            c3(rect->x_min, rect->y_max);
        const int p = discretization.panels;
        total = segment_integral(c0, c1, p, integrand) + segment_integral(c1, c2, p, integrand) +
                segment_integral(c2, c3, p, integrand) + segment_integral(c3, c0, p, integrand);
    } else {
        const auto& ell = std::get<EllipseContour>(contour);
        const auto& gl = gauss8();
        const int panels = discretization.panels;
        const double dtheta = 2.0 * std::numbers::pi / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * dtheta;
            for (std::size_t j = 0; j < 8; ++j) {
                const double th = mid + 0.5 * gl.x[j] * dtheta;
                const Complex t(ell.a * std::cos(th), ell.b * std::sin(th));
                const Complex dt(-ell.a * std::sin(th), ell.b * std::cos(th));
                total += gl.w[j] * 0.5 * dtheta * integrand(t) * dt;
            }
        }
    }
    const Complex rhs = total / Complex(0.0, 2.0 * std::numbers::pi);
    return {reference - quadrature_sum, rhs.real()};
}

double gtm_error_on_axis(const QuadratureRule& rule, double t) {
    if (t <= -1.0) {
        const double u = -1.0 - t;
        if (u == 0.0) throw BranchCutError("phi is singular at t = -1");
        return std::abs(axis_error(rule, true, u));
    }
    if (t >= 1.0) {
        const double u = t - 1.0;
        if (u == 0.0) throw BranchCutError("phi is singular at t = 1");
        return std::abs(axis_error(rule, false, u));
    }
    throw BranchCutError("t lies on the cut (-1, 1)");
}

double gtm_l1_norm(const QuadratureRule& rule, double a, double b) {
    if (a > b) throw InvalidArgument("gtm_l1_norm: need a <= b");
    if (a == b) return 0.0;
    bool left;
    double u0, u1;
    if (b <= -1.0) {
        left = true;
        u0 = -1.0 - b;
        u1 = -1.0 - a;
    } else if (a >= 1.0) {
        left = false;
        u0 = a - 1.0;
        u1 = b - 1.0;
    } else {
        throw InvalidArgument("gtm_l1_norm: segment must lie outside (-1, 1)");
    }
    const auto& gaps = left ? rule.left_gap : rule.right_gap;
    if (u0 == 0.0 && std::any_of(gaps.begin(), gaps.end(), [](double g) { return g == 0.0; }))
        throw PoleEvaluationError("segment endpoint coincides with a node", 0);

    // Decade breakpoints from u1 down to u0 (or deep enough past the smallest node gap).
    double floor_u = u0;
    if (u0 == 0.0) {
        double smallest = 1.0;
        for (double g : gaps)
            if (g > 0) smallest = std::min(smallest, g);
        floor_u = std::min(u1 * 1e-40, smallest * 1e-8);
    }
    std::vector<double> breaks{u1};
    while (breaks.back() / 10.0 > floor_u) breaks.push_back(breaks.back() / 10.0);
    breaks.push_back(floor_u);

    constexpr int kPanelsPerDecade = 24;
    const auto& gl = gauss8();
    double total = 0.0;
    for (std::size_t d = 0; d + 1 < breaks.size(); ++d) {
        const double hi = breaks[d], lo = breaks[d + 1];
        if (hi <= lo) continue;
        // geometric panels inside each decade
        const double ratio = std::pow(hi / lo, 1.0 / kPanelsPerDecade);
        double p_lo = lo;
        for (int p = 0; p < kPanelsPerDecade; ++p) {
            const double p_hi = (p == kPanelsPerDecade - 1) ? hi : p_lo * ratio;
            const double mid = 0.5 * (p_lo + p_hi), half = 0.5 * (p_hi - p_lo);
            for (std::size_t j = 0; j < 8; ++j)
                total += gl.w[j] * half * std::abs(axis_error(rule, left, mid + half * gl.x[j]));
            p_lo = p_hi;
        }
    }
    // The remaining [0, floor_u] piece contributes O(floor_u |log floor_u|) and is dropped.
    return total;
}

}  // namespace ratclust
