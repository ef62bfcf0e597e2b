#include "ratclust/approximants.hpp"

#include "ratclust/errors.hpp"
#include "ratclust/linalg.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ratclust {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_pole_distance(Complex z, Complex p, std::size_t k) {
    const double gap = std::abs(z - p);
    if (gap == 0.0 || gap <= kPoleProximity * std::abs(p))
        throw PoleEvaluationError("evaluation point coincides with pole " + std::to_string(k), k);
}

// Newman in log space: d = p(-t)/p(t), r = t (1 - d) / (1 + d).
double newman_real(const NewmanForm& nf, double x) {
    const double t = std::sqrt(x);
    const int terms = 2 * nf.n;
    double log_plus = 0.0, log_minus = 0.0;
    int sign_minus = 1;
    bool minus_vanishes = false;
    double power = 1.0;
    for (int k = 0; k < terms; ++k) {
        log_plus += std::log(t + power);
        const double m = power - t;
        if (m == 0.0) {
            minus_vanishes = true;
        } else {
            if (m < 0) sign_minus = -sign_minus;
            log_minus += std::log(std::abs(m));
        }
        power *= nf.xi;
    }
    if (minus_vanishes) return t;
    const double d = sign_minus * std::exp(log_minus - log_plus);
    if (1.0 + d == 0.0) throw PoleEvaluationError("Newman denominator vanishes", 0);
    return t * (1.0 - d) / (1.0 + d);
}

Complex newman_complex(const NewmanForm& nf, Complex z) {
    const Complex t = std::sqrt(z);
    const int terms = 2 * nf.n;
    Complex log_plus = 0.0, log_minus = 0.0;
    bool plus_vanishes = false, minus_vanishes = false;
    double power = 1.0;
    for (int k = 0; k < terms; ++k) {
        const Complex a = t + power, b = power - t;
        if (a == 0.0) plus_vanishes = true; else log_plus += std::log(a);
        if (b == 0.0) minus_vanishes = true; else log_minus += std::log(b);
        power *= nf.xi;
    }
    if (plus_vanishes && minus_vanishes) return 0.0;
    if (minus_vanishes) return t;
    if (plus_vanishes) return -t;
    const Complex d = std::exp(log_minus - log_plus);
    if (std::abs(1.0 + d) <= kPoleProximity) throw PoleEvaluationError("Newman denominator vanishes", 0);
    return t * (1.0 - d) / (1.0 + d);
}

Complex pole_residue_eval(const PoleResidue& pr, Complex z) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < pr.poles.size(); ++k) {
        check_pole_distance(z, pr.poles[k], k);
        sum += pr.residues[k] / (z - pr.poles[k]);
    }
    Complex poly = 0.0;
    for (auto it = pr.poly_coeffs.rbegin(); it != pr.poly_coeffs.rend(); ++it) poly = poly * z + *it;
    return sum + poly;
}

Complex interpolant_eval(const NodePoleInterpolant& ip, Complex z) {
    Complex sum = ip.coeffs.empty() ? 0.0 : ip.coeffs[0];
    for (std::size_t k = 0; k < ip.poles.size(); ++k) {
        check_pole_distance(z, ip.poles[k], k);
        sum += ip.coeffs[k + 1] / (z - ip.poles[k]);
    }
    return sum;
}

}  // namespace

RationalApproximant newman(int n, NewmanXi mode) {
    if (n < 1) throw InvalidArgument("newman: n must be >= 1");
    const double root = std::sqrt(2.0 * n);
    const double xi = mode == NewmanXi::classic ? std::exp(-1.0 / root)
                                                : std::exp(-(std::numbers::pi / 2) / root);
    return NewmanForm{n, xi};
}

double trapezoidal_default_h(int n) {
    if (n < 1) throw InvalidArgument("trapezoidal: n must be >= 1");
    return std::numbers::pi * std::sqrt(2.0 / n);
}

RationalApproximant trapezoidal_sqrt(int n, double h) {
    if (n < 1) throw InvalidArgument("trapezoidal: n must be >= 1");
    if (!(h > 0)) throw InvalidArgument("trapezoidal: h must be positive");
    // x/(e^{2kh} + x) = 1 + p_k/(x - p_k) with p_k = -e^{2kh}
    PoleResidue pr;
    double constant = 0.0;
    for (int j = 0; j < n; ++j) {
        const double k = j - (n - 1) / 2.0;
        const double c = (2.0 * h / std::numbers::pi) * std::exp(k * h);
        const double p = -std::exp(2.0 * k * h);
        pr.poles.emplace_back(p);
        pr.residues.emplace_back(c * p);
        constant += c;
    }
    pr.poly_coeffs = {constant};
    return pr;
}

RationalApproximant trapezoidal_sqrt(int n) { return trapezoidal_sqrt(n, trapezoidal_default_h(n)); }

double trapezoidal_sqrt_direct(int n, double h, double x) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double k = j - (n - 1) / 2.0;
        sum += std::exp(k * h) / (std::exp(2.0 * k * h) + x);
    }
    return (2.0 * h * x / std::numbers::pi) * sum;
}

double stenger_default_h(int n) {
    if (n < 1) throw InvalidArgument("stenger: n must be >= 1");
    return std::numbers::pi / std::sqrt(static_cast<double>(n));
}

RationalApproximant stenger_interpolant(const RealFunction& f, int n, double h) {
    if (n < 1) throw InvalidArgument("stenger: n must be >= 1");
    if (!(h > 0)) throw InvalidArgument("stenger: h must be positive");
    NodePoleInterpolant ip;
    ip.nodes.push_back(0.0);
    for (int k = 1; k <= n; ++k) {
        const double xk = std::exp(-(k - 1) * h);
        ip.nodes.push_back(xk);
        ip.poles.push_back(-xk);
    }
    const auto size = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXd a(size, size);
    Eigen::VectorXd b(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        const double x = ip.nodes[static_cast<std::size_t>(i)];
        const double fx = f(x);
        if (!std::isfinite(fx)) throw EvaluationError("stenger: non-finite f at node", x);
        ip.values.push_back(fx);
        b(i) = fx;
        a(i, 0) = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) a(i, k + 1) = 1.0 / (x - ip.poles[static_cast<std::size_t>(k)]);
    }
    const auto sol = solve_least_squares(a, b, RankPolicy::strict);
    ip.coeffs.assign(sol.coefficients.data(), sol.coefficients.data() + sol.coefficients.size());
    return ip;
}

double evaluate(const RationalApproximant& r, double x) {
    return std::visit(Overloaded{
                          [&](const NewmanForm& nf) {
                              return x >= 0 ? newman_real(nf, x) : newman_complex(nf, Complex(x)).real();
                          },
                          [&](const PoleResidue& pr) { return pole_residue_eval(pr, Complex(x)).real(); },
                          [&](const NodePoleInterpolant& ip) {
                              double sum = ip.coeffs.empty() ? 0.0 : ip.coeffs[0];
                              for (std::size_t k = 0; k < ip.poles.size(); ++k) {
                                  check_pole_distance(Complex(x), Complex(ip.poles[k]), k);
                                  sum += ip.coeffs[k + 1] / (x - ip.poles[k]);
                              }
                              return sum;
                          },
                      },
                      r);
}

Complex evaluate(const RationalApproximant& r, Complex z) {
    return std::visit(Overloaded{
                          [&](const NewmanForm& nf) { return newman_complex(nf, z); },
                          [&](const PoleResidue& pr) { return pole_residue_eval(pr, z); },
                          [&](const NodePoleInterpolant& ip) { return interpolant_eval(ip, z); },
                      },
                      r);
}

std::vector<Complex> poles_of(const RationalApproximant& r) {
    return std::visit(Overloaded{
                          [](const NewmanForm&) { return std::vector<Complex>{}; },
                          [](const PoleResidue& pr) { return pr.poles; },
                          [](const NodePoleInterpolant& ip) {
                              return std::vector<Complex>(ip.poles.begin(), ip.poles.end());
                          },
                      },
                      r);
}

RealFunction as_function(const RationalApproximant& r) {
    return [r](double x) { return evaluate(r, x); };
}

}  // namespace ratclust
