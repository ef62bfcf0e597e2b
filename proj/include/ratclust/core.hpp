#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ratclust {

using RealFunction = std::function<double(double)>;

/// Logarithmically equispaced points 10^t, t uniform in [a_exp, b_exp].
struct GradedGrid {
    std::vector<double> points;
    double a_exp = 0.0;
    double b_exp = 0.0;

    [[nodiscard]] double decades() const noexcept { return b_exp - a_exp; }
    [[nodiscard]] std::size_t count() const noexcept { return points.size(); }
};

/// Throws InvalidArgument unless count >= 2 and a_exp < b_exp.
[[nodiscard]] GradedGrid build_graded_grid(double a_exp, double b_exp, int count);

/// Grid on which fits are computed: logspace(-12, 0, 2000).
[[nodiscard]] const GradedGrid& fitting_grid();
/// Finer grid used for reported sup-norms: logspace(-12, 0, 100000).
[[nodiscard]] const GradedGrid& reporting_grid();

struct ErrorSample {
    double x;
    double e;
};

struct ErrorCurve {
    std::vector<ErrorSample> samples;
    double norm_inf = 0.0;
    /// One entry per maximal run of constant sign: the sample of largest |e| in that run.
    std::vector<ErrorSample> extrema;
};

/// Dead-band below which an error value is treated as having no sign.
inline constexpr double kSignDeadBand = 1e-15;

/// Builds an ErrorCurve from already-computed samples.
[[nodiscard]] ErrorCurve make_error_curve(std::vector<ErrorSample> samples);

/// Samples e = f - r over the grid. A non-finite f or r raises EvaluationError at that x.
[[nodiscard]] ErrorCurve sup_error(const RealFunction& f, const RealFunction& r,
                                   std::span<const double> points);
[[nodiscard]] ErrorCurve sup_error(const RealFunction& f, const RealFunction& r,
                                   const GradedGrid& grid);

enum class RateAxis { sqrt_n, n };

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    RateAxis axis = RateAxis::sqrt_n;
};

struct RatePoint {
    int n;
    double error;
};

/// Points with n < min_n are dropped before fitting (preasymptotic data).
inline constexpr int kDefaultRateMinN = 4;

/// Least-squares line of log(error) against sqrt(n) or n.
[[nodiscard]] RateFit fit_rate(std::span<const RatePoint> errors, RateAxis axis,
                               int min_n = kDefaultRateMinN);

/// Ordinary least-squares line y = slope*x + intercept with coefficient of determination.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
[[nodiscard]] LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Formats a double with 17 significant digits.
[[nodiscard]] std::string format_real(double v);

/// Minimal CSV writer: header row then comma-separated rows at 17 significant digits.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    void row(std::initializer_list<double> values);
    void row(std::span<const double> values);

private:
    std::ostream& out_;
    std::size_t columns_;
};

}  // namespace ratclust
