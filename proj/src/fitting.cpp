#include "ratclust/fitting.hpp"

#include "ratclust/errors.hpp"
#include "ratclust/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ratclust {

namespace {

struct Design {
    Eigen::MatrixXd basis;     // unweighted basis columns on the grid
    Eigen::VectorXd target;    // f on the grid
    Eigen::VectorXd density;   // least-squares density weight
    Eigen::VectorXd norm_weight;  // error weight (ones when absent)
};

Design build_design(const FitProblem& p) {
    const auto m = static_cast<Eigen::Index>(p.grid.points.size());
    const auto npoly = static_cast<Eigen::Index>(p.poly_degree + 1);
    const auto npoles = static_cast<Eigen::Index>(p.poles.size());
    if (p.poly_degree < 0) throw InvalidArgument("poly_degree must be >= 0");
    if (m < npoly + npoles) throw InvalidArgument("grid smaller than the number of basis functions");
    Design d;
    d.basis.resize(m, npoly + npoles);
    d.target.resize(m);
    d.density.resize(m);
    d.norm_weight.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double x = p.grid.points[static_cast<std::size_t>(i)];
        double xp = 1.0;
        for (Eigen::Index j = 0; j < npoly; ++j, xp *= x) d.basis(i, j) = xp;
        for (Eigen::Index k = 0; k < npoles; ++k) {
            const double pole = p.poles.poles[static_cast<std::size_t>(k)];
            if (x == pole) throw InvalidArgument("grid point coincides with a pole");
            d.basis(i, npoly + k) = 1.0 / (x - pole);
        }
        const double fx = p.f(x);
        if (!std::isfinite(fx)) throw EvaluationError("non-finite target value", x);
        d.target(i) = fx;
        const double w = p.weight(x);
        if (!(w >= 0) || !std::isfinite(w)) throw InvalidArgument("weight must be finite and nonnegative");
        d.density(i) = w;
        d.norm_weight(i) = p.error_weight ? (*p.error_weight)(x) : 1.0;
    }
    return d;
}

Eigen::VectorXd solve_weighted(const Design& d, const Eigen::VectorXd& row_scale, RankPolicy policy) {
    const Eigen::MatrixXd a = row_scale.asDiagonal() * d.basis;
    const Eigen::VectorXd b = row_scale.cwiseProduct(d.target);
    return solve_least_squares(a, b, policy).coefficients;
}

ErrorCurve curve_for(const FitProblem& p, const Design& d, const Eigen::VectorXd& coeffs) {
    const Eigen::VectorXd e = d.norm_weight.cwiseProduct(d.target - d.basis * coeffs);
    std::vector<ErrorSample> samples(p.grid.points.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = {p.grid.points[i], e(static_cast<Eigen::Index>(i))};
    return make_error_curve(std::move(samples));
}

FitResult make_result(const FitProblem& p, const Design& d, const Eigen::VectorXd& coeffs) {
    FitResult r;
    r.approximant = approximant_from_coefficients(
        p, std::span<const double>(coeffs.data(), static_cast<std::size_t>(coeffs.size())));
    r.error_curve = curve_for(p, d, coeffs);
    r.equioscillation_count = equioscillation_count(r.error_curve);
    r.extrema_ratio = extrema_ratio(r.error_curve);
    return r;
}

}  // namespace

RationalApproximant approximant_from_coefficients(const FitProblem& problem, std::span<const double> coeffs) {
    const auto npoly = static_cast<std::size_t>(problem.poly_degree + 1);
    if (coeffs.size() != npoly + problem.poles.size()) throw InvalidArgument("coefficient count mismatch");
    PoleResidue pr;
    pr.poly_coeffs.assign(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(npoly));
    for (std::size_t k = 0; k < problem.poles.size(); ++k) {
        pr.poles.emplace_back(problem.poles.poles[k]);
        pr.residues.emplace_back(coeffs[npoly + k]);
    }
    return pr;
}

std::vector<double> fit_coefficients(const FitResult& result) {
    const auto& pr = std::get<PoleResidue>(result.approximant);
    std::vector<double> c(pr.poly_coeffs);
    for (const auto& res : pr.residues) c.push_back(res.real());
    return c;
}

double weighted_residual_norm2(const FitProblem& problem, std::span<const double> coeffs) {
    const Design d = build_design(problem);
    const Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    const Eigen::VectorXd res =
        d.density.cwiseProduct(d.norm_weight).cwiseProduct(d.target - d.basis * c);
    return res.squaredNorm();
}

FitResult least_squares_fit(const FitProblem& problem) {
    const Design d = build_design(problem);
    const Eigen::VectorXd scale = d.density.cwiseProduct(d.norm_weight);
    return make_result(problem, d, solve_weighted(d, scale, RankPolicy::strict));
}

FitResult lawson_minimax_fit(const FitProblem& problem, LawsonOptions options) {
    if (options.max_iter < 1) throw InvalidArgument("lawson: max_iter must be >= 1");
    if (!(options.tol > 0)) throw InvalidArgument("lawson: tol must be positive");
    const Design d = build_design(problem);
    const int required_alternations = static_cast<int>(d.basis.cols()) + 1;

    // Lawson measure starts from the density weights so the first step is the LS fit.
    Eigen::VectorXd lambda = d.density.cwiseAbs2();
    lambda /= lambda.maxCoeff();

    Eigen::VectorXd best_coeffs;
    double best_norm = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
    for (int it = 0; it < options.max_iter; ++it) {
        iterations = it + 1;
        const Eigen::VectorXd scale = lambda.cwiseSqrt().cwiseProduct(d.norm_weight);
        const Eigen::VectorXd coeffs =
            solve_weighted(d, scale, it == 0 ? RankPolicy::strict : RankPolicy::truncate);
        const Eigen::VectorXd e = d.norm_weight.cwiseProduct(d.target - d.basis * coeffs);
        const double norm = e.cwiseAbs().maxCoeff();
        if (norm < best_norm) {
            best_norm = norm;
            best_coeffs = coeffs;
        }
        const ErrorCurve curve = curve_for(problem, d, coeffs);
        if (equioscillation_count(curve) >= required_alternations &&
            extrema_ratio(curve) <= 1.0 + options.tol) {
            converged = true;
            break;
        }
        lambda = lambda.cwiseProduct(e.cwiseAbs());
        const double top = lambda.maxCoeff();
        if (!(top > 0)) break;  // exact fit
        lambda /= top;
    }
    FitResult r = make_result(problem, d, best_coeffs);
    r.lawson_iterations = iterations;
    r.converged = converged;
    return r;
}

int equioscillation_count(const ErrorCurve& curve) { return static_cast<int>(curve.extrema.size()); }

double extrema_ratio(const ErrorCurve& curve) {
    if (curve.extrema.empty()) return 1.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& s : curve.extrema) {
        lo = std::min(lo, std::abs(s.e));
        hi = std::max(hi, std::abs(s.e));
    }
    return hi / lo;
}

std::vector<double> error_zeros(const ErrorCurve& curve) {
    std::vector<double> zeros;
    const ErrorSample* prev = nullptr;
    for (const auto& s : curve.samples) {
        if (std::abs(s.e) <= kSignDeadBand) continue;
        if (prev && (prev->e > 0) != (s.e > 0)) {
            const double t = prev->e / (prev->e - s.e);
            if (prev->x > 0 && s.x > 0) {
                const double la = std::log(prev->x), lb = std::log(s.x);
                zeros.push_back(std::exp(la + t * (lb - la)));
            } else {
                zeros.push_back(prev->x + t * (s.x - prev->x));
            }
        }
        prev = &s;
    }
    return zeros;
}

}  // namespace ratclust
