#include "ratclust/approximants.hpp"
#include "ratclust/core.hpp"
#include "ratclust/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ratclust;

namespace {
double sq(double x) { return std::sqrt(x); }

double sup_err(const RationalApproximant& r) { return sup_error(sq, as_function(r), reporting_grid()).norm_inf; }
}  // namespace

TEST_CASE("newman basics") {
    for (int n : {1, 4, 20, 200}) {
        const auto r = newman(n);
        CHECK(evaluate(r, 0.0) == 0.0);
        for (double x : build_graded_grid(-12, 0, 300).points) REQUIRE(evaluate(r, x) > 0.0);
        const double one = evaluate(r, 1.0);
        CHECK(one > 0.0);
        CHECK(one < 2.0);
    }
    CHECK_THROWS_AS((void)newman(0), InvalidArgument);
    const auto& nf = std::get<NewmanForm>(newman(8, NewmanXi::improved));
    CHECK(nf.xi == doctest::Approx(std::exp(-(std::numbers::pi / 2) / 4.0)));
}

TEST_CASE("newman at n = 200 stays finite") {
    const auto r = newman(200);
    const double e = sup_err(r);
    CHECK(std::isfinite(e));
    for (double x : {1e-300, 1e-200, 1e-30, 1e-13})
        CHECK(evaluate(r, x) == doctest::Approx(std::sqrt(x)).epsilon(0.2));
}

TEST_CASE("newman complex evaluation agrees with real path") {
    const auto r = newman(10);
    for (double x : {1e-8, 0.01, 0.5, 1.0})
        CHECK(std::abs(evaluate(r, Complex(x)) - evaluate(r, x)) <= 1e-14);
}

TEST_CASE("improved xi beats classic at n = 20") {
    CHECK(sup_err(newman(20, NewmanXi::improved)) < sup_err(newman(20, NewmanXi::classic)));
}

TEST_CASE("trapezoidal approximant: poles, residues and the direct sum") {
    const int n = 20;
    const double h = trapezoidal_default_h(n);
    CHECK(h == doctest::Approx(std::numbers::pi * std::sqrt(2.0 / n)));
    const auto r = trapezoidal_sqrt(n);
    const auto& pr = std::get<PoleResidue>(r);
    REQUIRE(pr.poles.size() == static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double k = j - (n - 1) / 2.0;  // half-integers for even n
        CHECK(pr.poles[static_cast<std::size_t>(j)].real() == -std::exp(2.0 * k * h));
    }
    CHECK(trapezoidal_sqrt_direct(n, h, 0.0) == 0.0);
    double constant = pr.poly_coeffs.at(0);
    CHECK(std::abs(evaluate(r, 0.0)) <= 8 * std::numeric_limits<double>::epsilon() * constant);

    // Agreement measured against the size of the summands, the natural rounding scale of the
    // pole-residue form (its terms cancel to leave sqrt(x) << constant near x = 0).
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> expo(-12.0, 0.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::pow(10.0, expo(rng));
        double scale = constant;
        for (std::size_t k = 0; k < pr.poles.size(); ++k) scale += std::abs(pr.residues[k] / (x - pr.poles[k]));
        const double diff = std::abs(evaluate(r, x) - trapezoidal_sqrt_direct(n, h, x));
        REQUIRE(diff <= 1e-13 * scale);
    }
}

TEST_CASE("trapezoidal error near exp(-pi sqrt(n/2))") {
    const double e = sup_err(trapezoidal_sqrt(20));
    const double target = std::exp(-std::numbers::pi * std::sqrt(10.0));
    CHECK(e > target / 10);
    CHECK(e < target * 10);
}

TEST_CASE("stenger interpolant reproduces node values") {
    for (int n = 1; n <= 40; ++n) {
        const auto r = stenger_interpolant(sq, n, stenger_default_h(n));
        const auto& ip = std::get<NodePoleInterpolant>(r);
        REQUIRE(ip.nodes.size() == static_cast<std::size_t>(n) + 1);
        CHECK(ip.nodes[0] == 0.0);
        for (std::size_t i = 0; i < ip.nodes.size(); ++i) {
            const double fx = std::sqrt(ip.nodes[i]);
            CHECK(std::abs(evaluate(r, ip.nodes[i]) - fx) <= 1e-11 * std::max(1.0, fx));
        }
    }
}

TEST_CASE("stenger reproduces constants") {
    const auto r = stenger_interpolant([](double) { return 2.5; }, 12, stenger_default_h(12));
    const auto& ip = std::get<NodePoleInterpolant>(r);
    CHECK(ip.coeffs[0] == doctest::Approx(2.5).epsilon(1e-12));
    for (std::size_t k = 1; k < ip.coeffs.size(); ++k) CHECK(std::abs(ip.coeffs[k]) <= 1e-10);
    for (double x : {0.0, 1e-7, 0.3, 1.0}) CHECK(evaluate(r, x) == doctest::Approx(2.5).epsilon(1e-11));
}

TEST_CASE("stenger n = 20 error is root-exponentially small") {
    const double e = sup_err(stenger_interpolant(sq, 20, stenger_default_h(20)));
    CHECK(e < 1e-2);
    CHECK(e > 1e-8);
}

TEST_CASE("errors decrease along square indices") {
    for (int family = 0; family < 3; ++family) {
        double prev = 1e300;
        for (int n : {4, 9, 16, 25, 36}) {
            const RationalApproximant r = family == 0   ? newman(n)
                                          : family == 1 ? trapezoidal_sqrt(n)
                                                        : stenger_interpolant(sq, n, stenger_default_h(n));
            const double e = sup_err(r);
            CHECK(e < prev);
            prev = e;
        }
    }
}

TEST_CASE("pole-residue evaluation and pole proximity") {
    const RationalApproximant r = PoleResidue{{Complex(-1.0)}, {Complex(1.0)}, {}};
    CHECK(evaluate(r, 0.0) == 1.0);  // 1/(0 - (-1))
    CHECK(evaluate(r, Complex(1.0, 1.0)) == Complex(1.0) / Complex(2.0, 1.0));
    try {
        (void)evaluate(r, -1.0);
        FAIL("expected PoleEvaluationError");
    } catch (const PoleEvaluationError& e) {
        CHECK(e.pole_index() == 0);
    }
    const RationalApproximant two = PoleResidue{{Complex(-1.0), Complex(-2.0)}, {Complex(1.0), Complex(1.0)}, {3.0}};
    CHECK_THROWS_AS((void)evaluate(two, -2.0 * (1 + 1e-16)), PoleEvaluationError);
    CHECK(poles_of(two).size() == 2);
    CHECK(evaluate(two, 1.0) == doctest::Approx(0.5 + 1.0 / 3.0 + 3.0));
}
