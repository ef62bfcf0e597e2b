#pragma once

#include "ratclust/linalg.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace ratclust {

using Complex = std::complex<double>;

/// Simple counterclockwise polygon.
class PolygonDomain {
public:
    /// Throws InvalidArgument for fewer than 3 vertices, repeated vertices, crossing
    /// edges or clockwise orientation.
    explicit PolygonDomain(std::vector<Complex> vertices);

    [[nodiscard]] const std::vector<Complex>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }
    [[nodiscard]] Complex vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

    /// Strict interior test by winding number.
    [[nodiscard]] bool contains(Complex z) const;
    [[nodiscard]] double distance_to_boundary(Complex z) const;

    [[nodiscard]] double interior_angle(std::size_t corner) const;
    /// Unit vector bisecting the exterior angle at a corner.
    [[nodiscard]] Complex exterior_bisector(std::size_t corner) const;
    /// Shorter of the two edges meeting at a corner.
    [[nodiscard]] double corner_scale(std::size_t corner) const;

private:
    std::vector<Complex> vertices_;
};

struct LightningBasis {
    PolygonDomain domain;
    std::vector<std::vector<Complex>> corner_poles;
    std::vector<Complex> poles;  // flattened, corner by corner
    int n_per_corner = 0;
    int poly_degree = 0;
    Complex center;  // polynomial basis is ((z - center)/radius)^j
    double radius = 1.0;

    /// Re/Im of 1/(z - p_j) for every pole, Re of z^0..z^m, Im of z^1..z^m.
    [[nodiscard]] int dof() const noexcept {
        return 2 * static_cast<int>(poles.size()) + 2 * (poly_degree + 1) - 1;
    }
};

/// Poles at v_c + scale_c d_k b_c with d_k from lightning_distances(n_per_corner).
/// Throws BasisConstructionError naming the corner if a pole is not exterior.
[[nodiscard]] LightningBasis build_basis(const PolygonDomain& domain, int n_per_corner, int poly_degree);

/// Row of basis function values at z, in dof() order.
[[nodiscard]] std::vector<double> basis_row(const LightningBasis& basis, Complex z);

/// Dirichlet data g(z) on edge `edge` (from vertex edge to vertex edge+1).
using BoundaryData = std::function<double(Complex z, std::size_t edge)>;

struct BoundarySample {
    Complex z;
    double weight;  // local arc length
    std::size_t edge;
};

/// Points on every edge, graded toward both ends as exp(-4 (sqrt(q) - sqrt(k))) with
/// q = per_end, merged with `uniform` equispaced points.
[[nodiscard]] std::vector<BoundarySample> boundary_samples(const PolygonDomain& domain, int per_end, int uniform);

struct LightningSolution {
    std::vector<double> coefficients;
    double boundary_residual = 0.0;  // max |u - g| over the validation samples
    int dof = 0;
    long rank = 0;
    std::size_t fit_samples = 0;
    std::size_t validation_samples = 0;
};

struct LightningOptions {
    /// Graded points per edge end; 0 picks 3 n_per_corner (at least 3) and then raises it
    /// until the sample count is at least 3 dof.
    int samples_per_edge = 0;
    RankPolicy rank_policy = RankPolicy::truncate;
};

/// Weighted least-squares fit of the basis to g on the boundary; the residual is measured
/// on an independent sampling twice as fine.
[[nodiscard]] LightningSolution solve(const LightningBasis& basis, const BoundaryData& g,
                                      LightningOptions options = {});

/// Throws DomainError when z lies outside the closed polygon.
[[nodiscard]] double evaluate_solution(const LightningSolution& sol, const LightningBasis& basis, Complex z);

}  // namespace ratclust
