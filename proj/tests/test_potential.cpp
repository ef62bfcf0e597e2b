#include "ratclust/errors.hpp"
#include "ratclust/fitting.hpp"
#include "ratclust/potential.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ratclust;

namespace {
constexpr double kPi = std::numbers::pi;

PointConfiguration annulus(int n, double rho) {
    PointConfiguration cfg;
    for (int k = 0; k < n; ++k) {
        cfg.interp_points.push_back(std::polar(rho, 2 * kPi * k / n));
        cfg.poles.push_back(std::polar(1.0, 2 * kPi * k / n));
    }
    return cfg;
}

std::vector<Complex> circle(double r, int m) {
    std::vector<Complex> z;
    for (int j = 0; j < m; ++j) z.push_back(std::polar(r, 2 * kPi * (j + 0.3) / m));
    return z;
}

PointConfiguration fitted(int n) {
    FitProblem p;
    p.f = [](double x) { return std::sqrt(x); };
    p.poles = tapered_poles(n, std::numbers::sqrt2 * kPi);
    const auto r = lawson_minimax_fit(p);
    PointConfiguration cfg;
    for (double x : error_zeros(r.error_curve)) cfg.interp_points.emplace_back(x);
    for (double q : p.poles.poles) cfg.poles.emplace_back(q);
    return cfg;
}
}  // namespace

TEST_CASE("phi trivial configurations") {
    PointConfiguration one{{Complex(0.3, 0.1)}, {}};
    CHECK(std::abs(phi(one, Complex(0.3, 1.1))) == doctest::Approx(1.0));
    CHECK(std::abs(phi(one, Complex(2.0, 0.0))) == doctest::Approx(std::abs(Complex(1.7, -0.1))));

    PointConfiguration same{{Complex(1, 1), Complex(-2, 0.5), Complex(0, -3)}, {Complex(1, 1), Complex(-2, 0.5), Complex(0, -3)}};
    const Complex v = phi(same, Complex(0.2, 0.7));
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(v.imag()) <= 1e-14);
    CHECK_THROWS_AS((void)phi(same, Complex(-2, 0.5)), PoleEvaluationError);
}

TEST_CASE("phi survives products that overflow doubles") {
    PointConfiguration big;
    for (int k = 0; k < 400; ++k) {
        big.interp_points.emplace_back(100.0 + k, 0.0);
        big.poles.emplace_back(1e-3 * (k + 1), 0.0);
    }
    const Complex z(0.5, 0.5);
    double expected = 0.0;
    for (int k = 0; k < 400; ++k)
        expected += std::log(std::abs(z - big.interp_points[k])) - std::log(std::abs(z - big.poles[k]));
    CHECK(log_abs_phi(big, z) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(expected > 709.0);  // exp would overflow
}

TEST_CASE("tau on the annulus decays like rho^n") {
    const int n = 32;
    const double rho = 0.5;
    const auto cfg = annulus(n, rho);
    const auto e = circle(rho, 997), g = circle(1.0, 997);
    const TauValue t = tau(cfg, e, g);
    CHECK_FALSE(t.vacuous);
    CHECK(std::log(t.value) / n == doctest::Approx(std::log(rho)).epsilon(0.10));

    const TauValue same = tau(cfg, e, e);
    CHECK(same.value >= 1.0);
    CHECK(same.vacuous);
}

TEST_CASE("tau is vacuous when the poles cluster at E") {
    const auto cfg = fitted(12);
    std::vector<Complex> e, g;
    const auto& pts = build_graded_grid(-12, 0, 400).points;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        e.emplace_back(pts[i]);
        g.emplace_back(-std::sqrt(pts[i] * pts[i + 1]));  // off the poles
    }
    const TauValue t = tau(cfg, e, g);
    CHECK(t.value >= 1.0);
    CHECK(t.vacuous);
}

TEST_CASE("discrete potential identity and ordering") {
    PointConfiguration one{{Complex(0.0)}, {}};
    CHECK(discrete_potential(one, Complex(0.0, 1.0)) == 0.0);

    const auto cfg = fitted(10);
    const double n = static_cast<double>(cfg.poles.size());
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const Complex z(u(rng), u(rng));
        CHECK(std::exp(n * discrete_potential(cfg, z)) == doctest::Approx(std::abs(phi(cfg, z))).epsilon(1e-10));
    }

    const auto ann = annulus(16, 0.5);
    double u_e = -1e300;
    for (const auto& z : circle(0.5, 512)) u_e = std::max(u_e, discrete_potential(ann, z));
    const double u_mid = discrete_potential(ann, std::polar(0.75, kPi / 16));
    CHECK(u_e < u_mid);
    CHECK(u_mid < 0.0);
    CHECK_THROWS_AS((void)discrete_potential(ann, Complex(1.0, 0.0)), EvaluationError);
    CHECK_THROWS_AS((void)discrete_potential(ann, Complex(0.5, 0.0)), EvaluationError);
}

TEST_CASE("1-norm bound: trivial case and validation") {
    const PointConfiguration empty;
    const auto gamma = graded_segment(0.0, -1.0);
    const double bound = hermite_error_bound_l1(empty, Complex(0.5), 3.0, 1.0, Complex(0.0), gamma);
    CHECK(bound == doctest::Approx(3.0 / (2 * kPi)).epsilon(1e-10));
    CHECK_THROWS_AS((void)hermite_error_bound_l1(empty, Complex(0.5), 1.0, 0.0, Complex(0.0), gamma), InvalidArgument);
    WeightedSamples at_zc{{Complex(0.0), Complex(-0.5)}, {0.25, 0.5}};
    CHECK_THROWS_AS((void)hermite_error_bound_l1(empty, Complex(0.5), 1.0, 0.5, Complex(0.0), at_zc), InvalidArgument);
}

TEST_CASE("1-norm bound is finite for clustered fits and degrades when n is halved") {
    const auto gamma = graded_segment(0.0, -1.0);
    const double b20 = hermite_error_bound_l1(fitted(20), Complex(0.5), 1.0, 0.5, Complex(0.0), gamma);
    const double b10 = hermite_error_bound_l1(fitted(10), Complex(0.5), 1.0, 0.5, Complex(0.0), gamma);
    CHECK(std::isfinite(b20));
    CHECK(b20 > 0.0);
    CHECK(b10 > b20);
}

TEST_CASE("strip Poisson integral against an independent high-precision oracle") {
    // Reference values of (1/2pi) int_0^inf xi sin y / (cosh(xi - X) - cos y) dxi computed
    // once with 30-digit adaptive quadrature.
    const StripModel m{1.0, 1, std::exp(-20.0)};
    const double le = -20.0;
    CHECK(strip_potential_exact(m, Complex(le + 10, kPi / 2)) == doctest::Approx(5.000014451246472).epsilon(1e-12));
    CHECK(strip_potential_exact(m, Complex(le + 5, kPi / 2)) == doctest::Approx(2.5021447443234868).epsilon(1e-12));
    CHECK(strip_potential_exact(m, Complex(le + 10, 0.5)) == doctest::Approx(8.408457497515695).epsilon(1e-12));
    CHECK(strip_potential_exact(m, Complex(le + 15, 2.5)) == doctest::Approx(3.0633793263821123).epsilon(1e-12));

    const StripModel scaled{0.5, 50, std::exp(-20.0)};
    CHECK(strip_potential_exact(scaled, Complex(le + 10, kPi / 2)) ==
          doctest::Approx(0.01 * 5.000014451246472).epsilon(1e-12));
}

TEST_CASE("strip potential boundary behaviour and positivity") {
    const StripModel m{0.5, 50, std::exp(-20.0)};
    CHECK(strip_potential_exact(m, Complex(-10.0, kPi - 1e-7)) < 1e-7);
    for (double x : {-30.0, -20.0, -10.0, 0.0, 5.0})
        for (double y : {0.01, 1.0, 2.0, 3.1}) CHECK(strip_potential_exact(m, Complex(x, y)) > 0.0);
    CHECK_THROWS_AS((void)strip_potential_exact(m, Complex(-5.0, 0.0)), InvalidArgument);
    CHECK_THROWS_AS((void)strip_potential_exact(m, Complex(-5.0, kPi)), InvalidArgument);
    CHECK_THROWS_AS((void)strip_potential_exact(StripModel{0.5, 50, 1.0}, Complex(-5.0, 1.0)), InvalidArgument);
}

TEST_CASE("bilinear strip solution") {
    const StripModel m{0.5, 50, std::exp(-20.0)};
    CHECK(strip_potential_bilinear(m, Complex(-7.0, kPi)) == 0.0);
    CHECK(strip_potential_bilinear(m, Complex(-20.0, 1.3)) == 0.0);
    const double h = 1e-3;
    for (double x : {-15.0, -10.0, -6.0})
        for (double y : {0.5, 1.5, 2.5}) {
            const Complex s(x, y);
            const double lap = strip_potential_bilinear(m, s + h) + strip_potential_bilinear(m, s - h) +
                               strip_potential_bilinear(m, s + Complex(0, h)) +
                               strip_potential_bilinear(m, s - Complex(0, h)) - 4 * strip_potential_bilinear(m, s);
            const double scale = std::abs(strip_potential_bilinear(m, s));
            CHECK(std::abs(lap / (h * h)) <= 1e-6 * scale);
        }
}

TEST_CASE("bilinear and exact strip potentials agree in the mid-strip window") {
    const StripModel m{0.5, 50, std::exp(-20.0)};
    for (double x = -15.0; x <= -5.0; x += 0.5)
        for (double y : {0.3, 0.8, kPi / 2, 2.2, 2.8}) {
            const double exact = strip_potential_exact(m, Complex(x, y));
            CHECK(std::abs(strip_potential_bilinear(m, Complex(x, y)) - exact) <= 0.05 * exact);
        }
}

TEST_CASE("strip density") {
    const double alpha = 0.5;
    const int n = 50;
    const double eps = strip_epsilon(alpha, n);
    CHECK(eps == doctest::Approx(std::exp(-kPi * std::sqrt(2.0 * n / alpha))).epsilon(1e-14));
    const StripModel m{alpha, n, eps};
    CHECK(strip_density(m, std::log(eps)) == 0.0);
    CHECK_THROWS_AS((void)strip_density(m, std::log(eps) - 1.0), InvalidArgument);
    // linear density: trapezoid rule is exact
    const double a = std::log(eps);
    const double integral = 0.5 * (strip_density(m, a) + strip_density(m, 0.0)) * (0.0 - a);
    CHECK(integral == doctest::Approx(alpha / (2 * kPi * kPi) * a * a).epsilon(1e-13));
    CHECK(integral == doctest::Approx(n).epsilon(1e-12));
    CHECK(std::pow(eps, alpha) == doctest::Approx(std::exp(-kPi * std::sqrt(50.0))).epsilon(1e-12));
}

TEST_CASE("rate predictions") {
    const auto u = predict_rates(0.5, 50, ClusterKind::uniform);
    const auto t = predict_rates(0.5, 50, ClusterKind::tapered);
    CHECK(u.accuracy == doctest::Approx(std::exp(-5 * kPi)).epsilon(1e-13));
    CHECK(t.accuracy == doctest::Approx(std::exp(-kPi * std::sqrt(50.0))).epsilon(1e-13));
    CHECK(t.closest_pole == doctest::Approx(strip_epsilon(0.5, 50)).epsilon(1e-13));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ua(0.05, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double alpha = ua(rng);
        const int n = 1 + i * 7;
        const double eu = std::log(predict_rates(alpha, n, ClusterKind::uniform).accuracy);
        const double et = std::log(predict_rates(alpha, n, ClusterKind::tapered).accuracy);
        CHECK(et * et / (eu * eu) == doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)predict_rates(0.5, 10, ClusterKind::custom), InvalidArgument);
    CHECK_THROWS_AS((void)predict_rates(0.0, 10, ClusterKind::uniform), InvalidArgument);
}

TEST_CASE("|phi| for the tapered fit tilts linearly on log-log axes and the E-Gamma gap shrinks") {
    const auto cfg = fitted(20);
    std::vector<double> decade, min_gamma, gap;
    for (int j = 0; j <= 6; ++j) {
        double max_e = -1e300, min_g = 1e300;
        for (int i = 0; i <= 400; ++i) {
            const double x = std::pow(10.0, -j - 1 + (i + 0.5) / 401.0);
            max_e = std::max(max_e, log_abs_phi(cfg, Complex(x)));
            min_g = std::min(min_g, log_abs_phi(cfg, Complex(-x)));
        }
        decade.push_back(-j);
        min_gamma.push_back(min_g);
        gap.push_back(min_g - max_e);
    }
    for (std::size_t j = 1; j < gap.size(); ++j) CHECK(gap[j] < gap[j - 1]);
    CHECK(fit_line(decade, min_gamma).r2 > 0.95);
    CHECK(fit_line(decade, min_gamma).slope > 0.0);
}
