#pragma once

#include <span>
#include <vector>

namespace ratclust {

enum class ClusterKind { uniform, tapered, custom };

/// Negative real poles p_k = -d_k, sorted by distance d_k ascending (closest first).
///
/// Indexing conventions differ by kind and are fixed here:
///   uniform: d_k = exp(-k h),                 k = 0..n-1
///   tapered: d_k = beta exp(sigma (sqrt k - sqrt n)), k = 1..n
/// so the closest uniform pole has k = n-1 and the closest tapered pole has k = 1.
struct ClusteredPoleSet {
    std::vector<double> poles;
    ClusterKind kind = ClusterKind::custom;
    int n = 0;
    double sigma = 0.0;  // tapered rate
    double beta = 1.0;   // distance scale of the farthest tapered pole
    double h = 0.0;      // uniform log-spacing

    [[nodiscard]] std::vector<double> distances() const;
    [[nodiscard]] std::size_t size() const noexcept { return poles.size(); }
};

[[nodiscard]] ClusteredPoleSet uniform_poles(int n, double h);
[[nodiscard]] ClusteredPoleSet tapered_poles(int n, double sigma, double beta = 1.0);

/// Wraps arbitrary negative poles; sorts by distance and rejects duplicates.
[[nodiscard]] ClusteredPoleSet custom_poles(std::vector<double> poles);

inline constexpr double kLightningSigma = 4.0;

/// Preassignment distances d_k = exp(-sigma (sqrt n - sqrt k)), k = 1..n, for a unit
/// corner scale; callers multiply by their own geometric scale.
[[nodiscard]] std::vector<double> lightning_distances(int n, double sigma = kLightningSigma);
[[nodiscard]] ClusteredPoleSet lightning_poles(int n, double sigma = kLightningSigma);

struct TaperDiagnostic {
    double slope_sqrtk = 0.0;
    double intercept_sqrtk = 0.0;
    double r2_sqrtk = 0.0;
    double slope_k = 0.0;
    double r2_k = 0.0;
};

/// Fits log d_k against sqrt(k) and against k (k = 1..m) for ascending distances.
[[nodiscard]] TaperDiagnostic analyze_taper(std::span<const double> distances);

/// Number of distances d_k <= exp(s): the cumulative pole count measured from the singularity.
[[nodiscard]] int cumulative_count(std::span<const double> distances, double s);

}  // namespace ratclust
