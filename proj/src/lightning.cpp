#include "ratclust/lightning.hpp"

#include "ratclust/clustering.hpp"
#include "ratclust/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ratclust {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on_segment = [](Complex p, Complex q, Complex r, double cr) {
        return cr == 0.0 && std::min(p.real(), q.real()) <= r.real() && r.real() <= std::max(p.real(), q.real()) &&
               std::min(p.imag(), q.imag()) <= r.imag() && r.imag() <= std::max(p.imag(), q.imag());
    };
    return on_segment(a, b, c, d1) || on_segment(a, b, d, d2) || on_segment(c, d, a, d3) || on_segment(c, d, b, d4);
}

double segment_distance(Complex z, Complex a, Complex b) {
    const Complex ab = b - a;
    const double t = std::clamp(((z - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

}  // namespace

PolygonDomain::PolygonDomain(std::vector<Complex> vertices) : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) throw InvalidArgument("polygon needs at least 3 vertices");
    for (const auto& v : vertices_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InvalidArgument("polygon vertex not finite");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (vertices_[i] == vertices_[j]) throw InvalidArgument("polygon vertices must be distinct");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(vertex(i), vertex(i + 1), vertex(j), vertex(j + 1)))
                throw InvalidArgument("polygon edges " + std::to_string(i) + " and " + std::to_string(j) + " cross");
        }
    }
    double area2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) area2 += cross(vertex(i), vertex(i + 1));
    if (!(area2 > 0.0)) throw InvalidArgument("polygon vertices must be counterclockwise");
}

double PolygonDomain::distance_to_boundary(Complex z) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i) d = std::min(d, segment_distance(z, vertex(i), vertex(i + 1)));
    return d;
}

bool PolygonDomain::contains(Complex z) const {
    if (distance_to_boundary(z) == 0.0) return false;
    double winding = 0.0;
    for (std::size_t i = 0; i < size(); ++i) winding += std::arg((vertex(i + 1) - z) / (vertex(i) - z));
    return std::abs(winding) > std::numbers::pi;
}

double PolygonDomain::interior_angle(std::size_t corner) const {
    const Complex v = vertex(corner);
    const Complex to_prev = vertex(corner + size() - 1) - v, to_next = vertex(corner + 1) - v;
    // counterclockwise sweep from the outgoing edge to the incoming edge covers the interior
    double angle = std::arg(to_prev / to_next);
    if (angle <= 0.0) angle += kTwoPi;
    return angle;
}

Complex PolygonDomain::exterior_bisector(std::size_t corner) const {
    const Complex v = vertex(corner);
    const Complex to_next = vertex(corner + 1) - v;
    const Complex inward = to_next / std::abs(to_next) * std::polar(1.0, 0.5 * interior_angle(corner));
    return -inward;
}

double PolygonDomain::corner_scale(std::size_t corner) const {
    const Complex v = vertex(corner);
    return std::min(std::abs(vertex(corner + size() - 1) - v), std::abs(vertex(corner + 1) - v));
}

LightningBasis build_basis(const PolygonDomain& domain, int n_per_corner, int poly_degree) {
    if (n_per_corner < 0) throw InvalidArgument("n_per_corner must be >= 0");
    if (poly_degree < 0) throw InvalidArgument("poly_degree must be >= 0");
    LightningBasis basis{domain, {}, {}, n_per_corner, poly_degree, {}, 1.0};
    const auto distances = lightning_distances(n_per_corner);
    for (std::size_t c = 0; c < domain.size(); ++c) {
        const Complex v = domain.vertex(c), dir = domain.exterior_bisector(c);
        const double scale = domain.corner_scale(c);
        std::vector<Complex> poles;
        for (double d : distances) {
            const Complex p = v + scale * d * dir;
            if (domain.contains(p) || domain.distance_to_boundary(p) == 0.0)
                throw BasisConstructionError("pole at corner " + std::to_string(c) + " is not exterior", c);
            poles.push_back(p);
        }
        basis.poles.insert(basis.poles.end(), poles.begin(), poles.end());
        basis.corner_poles.push_back(std::move(poles));
    }
    Complex sum = 0.0;
    for (const auto& v : domain.vertices()) sum += v;
    basis.center = sum / static_cast<double>(domain.size());
    double radius = 0.0;
    for (const auto& v : domain.vertices()) radius = std::max(radius, std::abs(v - basis.center));
    basis.radius = radius;
    return basis;
}

std::vector<double> basis_row(const LightningBasis& basis, Complex z) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(basis.dof()));
    for (const auto& p : basis.poles) {
        const Complex q = 1.0 / (z - p);
        row.push_back(q.real());
        row.push_back(q.imag());
    }
    const Complex w = (z - basis.center) / basis.radius;
    std::vector<Complex> powers(static_cast<std::size_t>(basis.poly_degree) + 1);
    powers[0] = 1.0;
    for (std::size_t j = 1; j < powers.size(); ++j) powers[j] = powers[j - 1] * w;
    for (const auto& pw : powers) row.push_back(pw.real());
    for (std::size_t j = 1; j < powers.size(); ++j) row.push_back(powers[j].imag());
    return row;
}

std::vector<BoundarySample> boundary_samples(const PolygonDomain& domain, int per_end, int uniform) {
    if (per_end < 0 || uniform < 2) throw InvalidArgument("boundary sampling needs per_end >= 0 and uniform >= 2");
    const auto graded = lightning_distances(per_end);
    std::vector<BoundarySample> out;
    for (std::size_t e = 0; e < domain.size(); ++e) {
        std::vector<double> s{0.0};
        for (double d : graded) {
            s.push_back(0.5 * d);
            s.push_back(1.0 - 0.5 * d);
        }
        for (int i = 0; i < uniform; ++i) s.push_back(static_cast<double>(i) / (uniform - 1));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        const Complex a = domain.vertex(e), b = domain.vertex(e + 1);
        for (double t : s)
            if (t < 1.0) out.push_back({a + (b - a) * t, 0.0, e});
    }
    const std::size_t m = out.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Complex next = out[(i + 1) % m].z, prev = out[(i + m - 1) % m].z;
        out[i].weight = 0.5 * (std::abs(next - out[i].z) + std::abs(out[i].z - prev));
    }
    return out;
}

namespace {

struct SamplingPlan {
    int per_end;
    int uniform;
};

SamplingPlan fit_plan(const LightningBasis& basis, const LightningOptions& options) {
    SamplingPlan plan{options.samples_per_edge > 0 ? options.samples_per_edge : 3 * std::max(basis.n_per_corner, 1),
                      3 * std::max(basis.n_per_corner, 10)};
    const auto edges = static_cast<int>(basis.domain.size());
    while (edges * (2 * plan.per_end + plan.uniform) < 3 * basis.dof()) {
        plan.per_end += std::max(1, plan.per_end / 2);
        plan.uniform += std::max(1, plan.uniform / 2);
    }
    return plan;
}

double evaluate_row(const LightningBasis& basis, const std::vector<double>& coefficients, Complex z) {
    const auto row = basis_row(basis, z);
    double sum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) sum += row[j] * coefficients[j];
    return sum;
}

}  // namespace

LightningSolution solve(const LightningBasis& basis, const BoundaryData& g, LightningOptions options) {
    const SamplingPlan plan = fit_plan(basis, options);
    const auto samples = boundary_samples(basis.domain, plan.per_end, plan.uniform);
    const auto rows = static_cast<Eigen::Index>(samples.size());
    const auto cols = static_cast<Eigen::Index>(basis.dof());
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        const double w = std::sqrt(s.weight);
        const auto row = basis_row(basis, s.z);
        for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = w * row[static_cast<std::size_t>(j)];
        const double gz = g(s.z, s.edge);
        if (!std::isfinite(gz)) throw EvaluationError("boundary data not finite", s.z.real());
        b(i) = w * gz;
    }
    const auto ls = solve_least_squares(a, b, options.rank_policy);

    LightningSolution sol;
    sol.coefficients.assign(ls.coefficients.data(), ls.coefficients.data() + ls.coefficients.size());
    sol.dof = basis.dof();
    sol.rank = ls.rank;
    sol.fit_samples = samples.size();

    const auto check = boundary_samples(basis.domain, 2 * plan.per_end, 2 * plan.uniform);
    sol.validation_samples = check.size();
    double residual = 0.0;
    for (const auto& s : check)
        residual = std::max(residual, std::abs(evaluate_row(basis, sol.coefficients, s.z) - g(s.z, s.edge)));
    sol.boundary_residual = residual;
    return sol;
}

double evaluate_solution(const LightningSolution& sol, const LightningBasis& basis, Complex z) {
    if (sol.coefficients.size() != static_cast<std::size_t>(basis.dof()))
        throw InvalidArgument("solution does not match basis");
    if (!basis.domain.contains(z) && basis.domain.distance_to_boundary(z) > 1e-12 * basis.radius)
        throw DomainError("evaluation point outside the polygon");
    return evaluate_row(basis, sol.coefficients, z);
}

}  // namespace ratclust
