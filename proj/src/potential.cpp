#include "ratclust/potential.hpp"

#include "ratclust/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ratclust {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(const StripModel& m) {
    if (!(m.alpha > 0.0 && m.alpha <= 1.0)) throw InvalidArgument("strip model: alpha must lie in (0, 1]");
    if (m.n < 1) throw InvalidArgument("strip model: n must be >= 1");
    if (!(m.epsilon > 0.0 && m.epsilon < 1.0)) throw InvalidArgument("strip model: epsilon must lie in (0, 1)");
}

}  // namespace

Complex phi(const PointConfiguration& cfg, Complex z) {
    Complex log_sum = 0.0;
    for (std::size_t k = 0; k < cfg.poles.size(); ++k) {
        if (z == cfg.poles[k]) throw PoleEvaluationError("phi evaluated at pole " + std::to_string(k), k);
        log_sum -= std::log(z - cfg.poles[k]);
    }
    for (const auto& x : cfg.interp_points) {
        if (z == x) return 0.0;
        log_sum += std::log(z - x);
    }
    return std::exp(log_sum);
}

double log_abs_phi(const PointConfiguration& cfg, Complex z) {
    double s = 0.0;
    for (std::size_t k = 0; k < cfg.poles.size(); ++k) {
        if (z == cfg.poles[k]) throw PoleEvaluationError("phi evaluated at pole " + std::to_string(k), k);
        s -= std::log(std::abs(z - cfg.poles[k]));
    }
    for (const auto& x : cfg.interp_points) s += std::log(std::abs(z - x));
    return s;
}

TauValue tau(const PointConfiguration& cfg, std::span<const Complex> e_samples,
             std::span<const Complex> gamma_samples) {
    if (e_samples.empty() || gamma_samples.empty()) throw InvalidArgument("tau: sample sets must be nonempty");
    double top = -std::numeric_limits<double>::infinity();
    double bottom = std::numeric_limits<double>::infinity();
    for (const auto& z : e_samples) top = std::max(top, log_abs_phi(cfg, z));
    for (const auto& z : gamma_samples) bottom = std::min(bottom, log_abs_phi(cfg, z));
    const double value = std::exp(top - bottom);
    return {value, !(value < 1.0)};
}

double discrete_potential(const PointConfiguration& cfg, Complex z) {
    const std::size_t n = cfg.poles.empty() ? cfg.interp_points.size() : cfg.poles.size();
    if (n == 0) throw InvalidArgument("discrete_potential: empty configuration");
    double s = 0.0;
    for (const auto& x : cfg.interp_points) {
        if (z == x) throw EvaluationError("discrete_potential: z coincides with an interpolation point", z.real());
        s += std::log(std::abs(z - x));
    }
    for (const auto& p : cfg.poles) {
        if (z == p) throw EvaluationError("discrete_potential: z coincides with a pole", z.real());
        s -= std::log(std::abs(z - p));
    }
    return s / static_cast<double>(n);
}

WeightedSamples graded_segment(double near, double far, int count, double decades) {
    if (count < 2) throw InvalidArgument("graded_segment: count must be >= 2");
    if (near == far) throw InvalidArgument("graded_segment: empty segment");
    if (!(decades > 0)) throw InvalidArgument("graded_segment: decades must be positive");
    const double length = far - near;
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double e = -decades + decades * i / (count - 1);
        t[static_cast<std::size_t>(i)] = near + length * std::pow(10.0, e);
    }
    t.back() = far;
    WeightedSamples out;
    out.points.assign(t.begin(), t.end());
    out.weights.assign(t.size(), 0.0);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double half = 0.5 * std::abs(t[i + 1] - t[i]);
        out.weights[i] += half;
        out.weights[i + 1] += half;
    }
    return out;
}

double hermite_error_bound_l1(const PointConfiguration& cfg, Complex x, double f_bound, double alpha, Complex zc,
                              const WeightedSamples& gamma) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("hermite bound: alpha must lie in (0, 1]");
    if (gamma.points.size() != gamma.weights.size() || gamma.points.empty())
        throw InvalidArgument("hermite bound: need matching nonempty points and weights");
    const double log_phi_x = log_abs_phi(cfg, x);
    double sum = 0.0;
    for (std::size_t j = 0; j < gamma.points.size(); ++j) {
        const double dist = std::abs(gamma.points[j] - zc);
        if (dist == 0.0 && alpha < 1.0)
            throw InvalidArgument("hermite bound: sample at z_c makes the weight non-integrable");
        if (std::find(cfg.poles.begin(), cfg.poles.end(), gamma.points[j]) != cfg.poles.end()) continue;  // 1/phi = 0
        const double factor = alpha == 1.0 ? 1.0 : std::pow(dist, alpha - 1.0);
        sum += gamma.weights[j] * std::exp(log_phi_x - log_abs_phi(cfg, gamma.points[j])) * factor;
    }
    return sum / (2.0 * kPi) * f_bound;
}

double strip_epsilon(double alpha, int n) {
    if (!(alpha > 0.0) || n < 1) throw InvalidArgument("strip_epsilon: need alpha > 0 and n >= 1");
    return std::exp(-kPi * std::sqrt(2.0 * n / alpha));
}

double strip_potential_exact(const StripModel& m, Complex s) {
    validate(m);
    const double y = s.imag();
    if (!(y > 0.0 && y < kPi)) throw InvalidArgument("strip_potential_exact: need 0 < Im s < pi");
    const double shift = s.real() - std::log(m.epsilon);
    const double sin_y = std::sin(y), half_sin = std::sin(0.5 * y);
    // cosh(a) - cos(y) = 2 sinh^2(a/2) + 2 sin^2(y/2)
    auto integrand = [&](double xi) {
        const double sh = std::sinh(0.5 * (xi - shift));
        return xi * sin_y / (2.0 * sh * sh + 2.0 * half_sin * half_sin);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    constexpr double kTol = 1e-14;
    constexpr unsigned kDepth = 20;
    const double peak = std::max(shift, 0.0);
    // integrand decays like xi e^{-(xi - shift)}; the tail past peak + 50 is below 1e-20 relative
    const double end = peak + 50.0;
    double total = GK::integrate(integrand, peak, end, kDepth, kTol);
    if (peak > 0.0) total += GK::integrate(integrand, 0.0, peak, kDepth, kTol);
    return m.alpha / m.n * total / (2.0 * kPi);
}

double strip_potential_bilinear(const StripModel& m, Complex s) {
    validate(m);
    return m.alpha / m.n * (1.0 - s.imag() / kPi) * (s.real() - std::log(m.epsilon));
}

double strip_density(const StripModel& m, double x) {
    validate(m);
    const double shift = x - std::log(m.epsilon);
    if (shift < 0.0) throw InvalidArgument("strip_density: x must be >= log(epsilon)");
    return m.alpha / (kPi * kPi) * shift;
}

RatePrediction predict_rates(double alpha, int n, ClusterKind kind) {
    if (!(alpha > 0.0)) throw InvalidArgument("predict_rates: alpha must be positive");
    if (n < 1) throw InvalidArgument("predict_rates: n must be >= 1");
    switch (kind) {
        case ClusterKind::uniform:
            return {std::exp(-kPi * std::sqrt(n / alpha)), std::exp(-kPi * std::sqrt(alpha * n))};
        case ClusterKind::tapered:
            return {std::exp(-kPi * std::sqrt(2.0 * n / alpha)), std::exp(-kPi * std::sqrt(2.0 * alpha * n))};
        case ClusterKind::custom:
            break;
    }
    throw InvalidArgument("predict_rates: kind must be uniform or tapered");
}

}  // namespace ratclust
