#pragma once

#include "ratclust/clustering.hpp"

#include <complex>
#include <span>
#include <vector>

namespace ratclust {

using Complex = std::complex<double>;

/// Interpolation points x_0..x_n and poles p_1..p_n of a rational interpolant.
struct PointConfiguration {
    std::vector<Complex> interp_points;
    std::vector<Complex> poles;
};

/// phi(z) = prod (z - x_k) / prod (z - p_k), accumulated as a sum of logarithms.
[[nodiscard]] Complex phi(const PointConfiguration& cfg, Complex z);
[[nodiscard]] double log_abs_phi(const PointConfiguration& cfg, Complex z);

struct TauValue {
    double value;
    bool vacuous;  // value >= 1: the sup-norm bound says nothing
};

/// max over E of |phi| divided by min over Gamma of |phi|.
[[nodiscard]] TauValue tau(const PointConfiguration& cfg, std::span<const Complex> e_samples,
                           std::span<const Complex> gamma_samples);

/// u(z) = (sum log|z - x_k| - sum log|z - p_k|) / n with n = number of poles
/// (number of interpolation points when there are none), so exp(n u) = |phi|.
[[nodiscard]] double discrete_potential(const PointConfiguration& cfg, Complex z);

/// Points and trapezoid weights on a contour discretization.
struct WeightedSamples {
    std::vector<Complex> points;
    std::vector<double> weights;
};

/// Real segment from `near` to `far`, graded geometrically toward `near` over `decades`.
[[nodiscard]] WeightedSamples graded_segment(double near, double far, int count = 2000, double decades = 12.0);

/// (1/2 pi) sum_j w_j |phi(x)/phi(t_j)| |t_j - zc|^(alpha-1), times f_bound.
[[nodiscard]] double hermite_error_bound_l1(const PointConfiguration& cfg, Complex x, double f_bound,
                                            double alpha, Complex zc, const WeightedSamples& gamma);

/// Parameters of the strip model: alpha in (0, 1], n >= 1, epsilon in (0, 1).
struct StripModel {
    double alpha = 0.5;
    int n = 1;
    double epsilon = 0.0;
};

/// Closest-pole distance that makes the strip density integrate to n.
[[nodiscard]] double strip_epsilon(double alpha, int n);

/// Poisson integral for the strip 0 < Im s < pi with boundary data x - log(epsilon) on Im s = 0.
[[nodiscard]] double strip_potential_exact(const StripModel& m, Complex s);
[[nodiscard]] double strip_potential_bilinear(const StripModel& m, Complex s);
[[nodiscard]] double strip_density(const StripModel& m, double x);

struct RatePrediction {
    double closest_pole;
    double accuracy;
};

[[nodiscard]] RatePrediction predict_rates(double alpha, int n, ClusterKind kind);

}  // namespace ratclust
