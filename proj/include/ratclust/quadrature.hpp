#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace ratclust {

using Complex = std::complex<double>;

enum class TransformKind { tanh, tanh_sinh };

/// Change of variables g: R -> (-1, 1) used by the trapezoidal rule.
///   tanh:      g(s) = tanh(s),                 g'(s) = sech^2(s)
///   tanh_sinh: g(s) = tanh((pi/2) sinh(s)),    g'(s) = (pi/2) cosh(s) sech^2((pi/2) sinh(s))
struct VariableTransform {
    TransformKind kind;

    [[nodiscard]] double g(double s) const;
    [[nodiscard]] double g_prime(double s) const;
    /// 1 + g(s) and 1 - g(s) without cancellation.
    [[nodiscard]] double gap_left(double s) const;
    [[nodiscard]] double gap_right(double s) const;
};

/// n-point truncated trapezoidal rule x_k = g(kh), w_k = h g'(kh),
/// k = -(n-1)/2 .. (n-1)/2 (half-integers for even n).
///
/// Nodes very close to +-1 may round to +-1 in double precision; left_gap and
/// right_gap hold 1 + x_k and 1 - x_k exactly enough to keep them distinct.
struct QuadratureRule {
    TransformKind kind = TransformKind::tanh;
    int n = 0;
    double h = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> left_gap;
    std::vector<double> right_gap;

    [[nodiscard]] double offset(std::size_t i) const;  // k = i - (n-1)/2
};

/// Empirical defaults: pi/sqrt(n) for tanh, 1.2 log(2 pi n)/n for tanh-sinh.
[[nodiscard]] double default_step(TransformKind kind, int n);

[[nodiscard]] QuadratureRule build_rule(TransformKind kind, int n, std::optional<double> h = std::nullopt);

[[nodiscard]] double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

/// Integrand receiving (x, 1 + x, 1 - x) so endpoint singularities can be evaluated
/// from the cancellation-free gaps.
using GapIntegrand = std::function<double(double x, double one_plus_x, double one_minus_x)>;
[[nodiscard]] double integrate(const QuadratureRule& rule, const GapIntegrand& f);

/// 1 + x_k for the nodes left of the origin, ascending.
[[nodiscard]] std::vector<double> endpoint_distances(const QuadratureRule& rule);

/// log((t + 1)/(t - 1)), principal branch, analytic off [-1, 1].
[[nodiscard]] Complex characteristic_phi(Complex t);

/// r(t) = sum_k w_k / (t - x_k), evaluated with the stored endpoint gaps.
[[nodiscard]] Complex rule_rational(const QuadratureRule& rule, Complex t);

/// Same function summed directly from the closed forms in k and h for the two rule families.
[[nodiscard]] Complex rule_rational_closed_form(TransformKind kind, int n, double h, Complex t);

/// Axis-aligned rectangle [x_min, x_max] x [y_min, y_max].
struct RectangleContour {
    double x_min, x_max, y_min, y_max;
};

/// Ellipse centred at 0 with semi-axes a (real) and b (imaginary).
struct EllipseContour {
    double a, b;
};

using Contour = std::variant<RectangleContour, EllipseContour>;

struct ContourQuadrature {
    int panels = 64;  // per side (rectangle) or total (ellipse); 8-point Gauss each
};

struct GtmCheck {
    double lhs;  // I - I_n
    double rhs;  // (1/2 pi i) contour integral of f (phi - r)
};

using AnalyticFunction = std::function<Complex(Complex)>;

/// Reference integral of f over [-1, 1] by tanh-sinh with n = 200 and the default step.
[[nodiscard]] double reference_integral(const AnalyticFunction& f);

/// Evaluates both sides of I - I_n = (1/2 pi i) \oint f(t) (phi(t) - r(t)) dt.
/// If `exact` is absent, I comes from reference_integral().
[[nodiscard]] GtmCheck gtm_error_identity_check(const QuadratureRule& rule, const AnalyticFunction& f,
                                                const Contour& contour,
                                                std::optional<double> exact = std::nullopt,
                                                ContourQuadrature discretization = {});

/// |phi(t) - r(t)| for real t outside [-1, 1], using the endpoint gaps.
[[nodiscard]] double gtm_error_on_axis(const QuadratureRule& rule, double t);

/// \int_a^b |phi(t) - r(t)| dt over a real segment outside (-1, 1), by Gauss panels on a
/// mesh graded toward the endpoint nearest the singularity.
[[nodiscard]] double gtm_l1_norm(const QuadratureRule& rule, double a, double b);

}  // namespace ratclust
