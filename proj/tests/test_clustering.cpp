#include "ratclust/clustering.hpp"
#include "ratclust/errors.hpp"
#include "ratclust/quadrature.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ratclust;

namespace {
const double kSigmaFig12 = std::numbers::sqrt2 * std::numbers::pi;

bool strictly_increasing(const std::vector<double>& d) {
    for (std::size_t i = 1; i < d.size(); ++i)
        if (!(d[i] > d[i - 1])) return false;
    return true;
}
}  // namespace

TEST_CASE("uniform poles") {
    CHECK(uniform_poles(1, 0.7).poles == std::vector<double>{-1.0});
    const auto four = uniform_poles(4, std::numbers::pi / 2);
    CHECK(four.poles.front() == doctest::Approx(-std::exp(-3 * std::numbers::pi / 2)).epsilon(1e-15));
    CHECK(four.poles.back() == -1.0);
    const auto fifty = uniform_poles(50, std::numbers::pi / std::sqrt(50.0));
    CHECK(fifty.distances().front() == doctest::Approx(std::exp(-49 * std::numbers::pi / std::sqrt(50.0))).epsilon(1e-13));
    CHECK(fifty.kind == ClusterKind::uniform);
    CHECK(fifty.h == doctest::Approx(std::numbers::pi / std::sqrt(50.0)));
    CHECK_THROWS_AS((void)uniform_poles(0, 1.0), InvalidArgument);
    CHECK_THROWS_AS((void)uniform_poles(3, 0.0), InvalidArgument);
}

TEST_CASE("tapered poles") {
    CHECK(tapered_poles(1, 3.0).poles == std::vector<double>{-1.0});
    const auto four = tapered_poles(4, kSigmaFig12);
    CHECK(four.distances().front() == doctest::Approx(std::exp(-kSigmaFig12)).epsilon(1e-15));
    const auto fifty = tapered_poles(50, kSigmaFig12);
    CHECK(std::log(fifty.distances().front()) ==
          doctest::Approx(kSigmaFig12 * (1.0 - std::sqrt(50.0))).epsilon(1e-13));
    const auto d = fifty.distances();
    for (std::size_t k = 0; k < d.size(); ++k)
        CHECK(std::log(d[k]) == doctest::Approx(kSigmaFig12 * (std::sqrt(k + 1.0) - std::sqrt(50.0))).epsilon(1e-13));
}

TEST_CASE("lightning distances") {
    CHECK(lightning_distances(1) == std::vector<double>{1.0});
    CHECK(lightning_distances(16).front() == doctest::Approx(std::exp(-12.0)).epsilon(1e-14));
    CHECK(lightning_distances(100).front() == doctest::Approx(2.3195228302435691e-16).epsilon(1e-12));
    CHECK(lightning_distances(0).empty());
    CHECK(lightning_poles(9).sigma == kLightningSigma);
}

TEST_CASE("custom poles are sorted and validated") {
    const auto c = custom_poles({-3.0, -0.5, -1.0});
    CHECK(c.poles == std::vector<double>{-0.5, -1.0, -3.0});
    CHECK_THROWS_AS((void)custom_poles({-1.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS((void)custom_poles({-1.0, -1.0}), InvalidArgument);
}

TEST_CASE("every generator is strictly increasing in distance") {
    for (int n = 2; n <= 100; n += 7) {
        CHECK(strictly_increasing(uniform_poles(n, std::numbers::pi / std::sqrt(n)).distances()));
        CHECK(strictly_increasing(tapered_poles(n, kSigmaFig12).distances()));
        CHECK(strictly_increasing(lightning_distances(n)));
    }
}

TEST_CASE("analyze_taper on constructed sets") {
    const auto t = analyze_taper(tapered_poles(20, kSigmaFig12).distances());
    CHECK(t.r2_sqrtk == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.slope_sqrtk == doctest::Approx(kSigmaFig12).epsilon(1e-12));
    const auto u = analyze_taper(uniform_poles(20, std::numbers::pi / std::sqrt(20.0)).distances());
    CHECK(u.r2_k == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u.r2_sqrtk < u.r2_k);

    for (int n = 3; n <= 100; ++n) {
        const double sigma = 1.0 + 0.05 * n;
        CHECK(std::abs(analyze_taper(tapered_poles(n, sigma).distances()).slope_sqrtk - sigma) <= 1e-10 * sigma);
    }
    CHECK(analyze_taper(std::vector<double>{1.0, 2.0, 4.0}).r2_k == doctest::Approx(1.0));
}

TEST_CASE("analyze_taper validation") {
    CHECK_THROWS_AS((void)analyze_taper(std::vector<double>{0.0, 1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS((void)analyze_taper(std::vector<double>{1.0, 1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS((void)analyze_taper(std::vector<double>{1.0, 2.0}), InvalidArgument);
}

TEST_CASE("quadrature node distances: tanh straight in k, tanh-sinh closer to sqrt(k)") {
    const auto tanh = analyze_taper(endpoint_distances(build_rule(TransformKind::tanh, 40)));
    CHECK(tanh.r2_k > 0.999);
    const auto ts = analyze_taper(endpoint_distances(build_rule(TransformKind::tanh_sinh, 40)));
    CHECK(ts.r2_sqrtk > ts.r2_k);
}

TEST_CASE("cumulative count of tapered poles is quadratic in the log distance") {
    const int n = 100;
    const auto d = tapered_poles(n, kSigmaFig12).distances();
    const double log_eps = std::log(d.front());
    const int samples = 200;
    Eigen::MatrixXd a(samples, 3);
    Eigen::VectorXd y(samples);
    for (int i = 0; i < samples; ++i) {
        const double s = log_eps + (0.0 - log_eps) * i / (samples - 1);
        const double t = s - log_eps;
        a(i, 0) = 1.0;
        a(i, 1) = t;
        a(i, 2) = t * t;
        y(i) = cumulative_count(d, s);
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
    const double ss_res = (a * c - y).squaredNorm();
    const double ss_tot = (y.array() - y.mean()).square().sum();
    CHECK(1.0 - ss_res / ss_tot > 0.999);
    CHECK(cumulative_count(d, 0.0) == n);
    CHECK(cumulative_count(d, log_eps - 1.0) == 0);
}
