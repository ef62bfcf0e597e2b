#pragma once

#include "ratclust/approximants.hpp"
#include "ratclust/clustering.hpp"
#include "ratclust/core.hpp"

#include <cmath>
#include <optional>

namespace ratclust {

/// Linear fitting problem with preassigned poles on a graded grid.
///
/// Two distinct weights are involved. `weight` compensates for the grid density in
/// the discrete least-squares objective (sqrt(x) on a logarithmic grid approximates a
/// uniformly weighted continuum problem). `error_weight`, when present, changes the
/// norm being approximated: the stored error curve and the Lawson target become
/// error_weight(x) * (f(x) - r(x)).
struct FitProblem {
    RealFunction f;
    ClusteredPoleSet poles;
    GradedGrid grid = fitting_grid();
    RealFunction weight = [](double x) { return std::sqrt(x); };
    std::optional<RealFunction> error_weight;
    int poly_degree = 0;
};

struct FitResult {
    RationalApproximant approximant;  // always the PoleResidue arm
    ErrorCurve error_curve;           // on the problem grid, weighted by error_weight
    int lawson_iterations = 0;
    int equioscillation_count = 0;
    bool converged = true;
    /// max/min ratio of |error| over the alternating extrema at the returned iterate.
    double extrema_ratio = 0.0;
};

[[nodiscard]] FitResult least_squares_fit(const FitProblem& problem);

struct LawsonOptions {
    int max_iter = 100;
    double tol = 0.05;
};

/// Linear minimax fit by Lawson's iteratively reweighted least squares.
/// Returns the best iterate seen; `converged` is false when the extrema ratio never
/// came within 1 + tol with enough alternations.
[[nodiscard]] FitResult lawson_minimax_fit(const FitProblem& problem, LawsonOptions options = {});

/// Number of maximal runs of constant sign (ignoring |e| below the dead-band), i.e.
/// the number of alternating-sign extrema.
[[nodiscard]] int equioscillation_count(const ErrorCurve& curve);

/// max/min of |e| over the alternating extrema (1 for a perfectly equioscillating curve).
[[nodiscard]] double extrema_ratio(const ErrorCurve& curve);

/// Weighted residual sum sum_i (w_i (f_i - r_i))^2 on the problem grid for the given
/// coefficients (poly coefficients first, then residues in pole order).
[[nodiscard]] double weighted_residual_norm2(const FitProblem& problem, std::span<const double> coeffs);

/// Flattened coefficients of a fit: poly coefficients then residues.
[[nodiscard]] std::vector<double> fit_coefficients(const FitResult& result);

/// Approximant assembled from a coefficient vector in fit_coefficients() layout.
[[nodiscard]] RationalApproximant approximant_from_coefficients(const FitProblem& problem,
                                                                std::span<const double> coeffs);

/// Zeros of the error curve (interpolation points of the fit), located by linear
/// interpolation in log x between sign changes.
[[nodiscard]] std::vector<double> error_zeros(const ErrorCurve& curve);

}  // namespace ratclust
