#pragma once

#include "ratclust/core.hpp"

#include <complex>
#include <variant>
#include <vector>

namespace ratclust {

using Complex = std::complex<double>;

/// Newman's approximation to sqrt(x):
///   r(x) = sqrt(x) (p(sqrt x) - p(-sqrt x)) / (p(sqrt x) + p(-sqrt x)),
///   p(t) = prod_{k=0}^{2n-1} (t + xi^k).
struct NewmanForm {
    int n = 0;
    double xi = 0.0;
};

/// r(x) = sum_k residues[k] / (x - poles[k]) + sum_j poly_coeffs[j] x^j
struct PoleResidue {
    std::vector<Complex> poles;
    std::vector<Complex> residues;
    std::vector<double> poly_coeffs;
};

/// Rational interpolant with preassigned poles, stored with its expansion
/// coefficients: r(x) = coeffs[0] + sum_k coeffs[k+1] / (x - poles[k]).
struct NodePoleInterpolant {
    std::vector<double> nodes;
    std::vector<double> poles;
    std::vector<double> values;
    std::vector<double> coeffs;
};

using RationalApproximant = std::variant<NewmanForm, PoleResidue, NodePoleInterpolant>;

enum class NewmanXi { classic, improved };

[[nodiscard]] RationalApproximant newman(int n, NewmanXi mode = NewmanXi::classic);

/// Default trapezoidal step h = pi sqrt(2/n).
[[nodiscard]] double trapezoidal_default_h(int n);

/// Trapezoidal-rule approximation of sqrt(x) with poles -exp(2kh),
/// k = -(n-1)/2 .. (n-1)/2 (half-integers when n is even), in pole-residue form.
[[nodiscard]] RationalApproximant trapezoidal_sqrt(int n, double h);
[[nodiscard]] RationalApproximant trapezoidal_sqrt(int n);

/// Direct summation r(x) = (2hx/pi) sum_k e^{kh} / (e^{2kh} + x).
[[nodiscard]] double trapezoidal_sqrt_direct(int n, double h, double x);

/// Default Stenger step h = pi / sqrt(n).
[[nodiscard]] double stenger_default_h(int n);

/// Interpolant with poles -exp(-(k-1)h), k = 1..n, interpolating f at
/// x_0 = 0 and x_k = exp(-(k-1)h).
[[nodiscard]] RationalApproximant stenger_interpolant(const RealFunction& f, int n, double h);

/// Relative tolerance used to reject evaluation at (or next to) a pole.
inline constexpr double kPoleProximity = 1e-14;

[[nodiscard]] double evaluate(const RationalApproximant& r, double x);
[[nodiscard]] Complex evaluate(const RationalApproximant& r, Complex z);

/// Finite poles of the approximant (Newman poles are not enumerated and return empty).
[[nodiscard]] std::vector<Complex> poles_of(const RationalApproximant& r);

/// Convenience: wraps evaluate() as a RealFunction.
[[nodiscard]] RealFunction as_function(const RationalApproximant& r);

}  // namespace ratclust
