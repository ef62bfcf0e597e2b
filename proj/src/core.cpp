#include "ratclust/core.hpp"

#include "ratclust/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ratclust {

GradedGrid build_graded_grid(double a_exp, double b_exp, int count) {
    if (count < 2) throw InvalidArgument("graded grid needs at least 2 points");
    if (!(a_exp < b_exp)) throw InvalidArgument("graded grid needs a_exp < b_exp");
    GradedGrid grid;
    grid.a_exp = a_exp;
    grid.b_exp = b_exp;
    grid.points.resize(static_cast<std::size_t>(count));
    const double step = (b_exp - a_exp) / (count - 1);
    for (int i = 0; i < count; ++i) {
        const double t = (i == count - 1) ? b_exp : a_exp + step * i;
        grid.points[static_cast<std::size_t>(i)] = std::pow(10.0, t);
    }
    return grid;
}

const GradedGrid& fitting_grid() {
    static const GradedGrid grid = build_graded_grid(-12.0, 0.0, 2000);
    return grid;
}

const GradedGrid& reporting_grid() {
    static const GradedGrid grid = build_graded_grid(-12.0, 0.0, 100000);
    return grid;
}

namespace {

int sign_of(double e) {
    if (e > kSignDeadBand) return 1;
    if (e < -kSignDeadBand) return -1;
    return 0;
}

}  // namespace

ErrorCurve make_error_curve(std::vector<ErrorSample> samples) {
    ErrorCurve curve;
    curve.samples = std::move(samples);
    int run_sign = 0;
    for (const auto& s : curve.samples) {
        curve.norm_inf = std::max(curve.norm_inf, std::abs(s.e));
        const int sg = sign_of(s.e);
        if (sg == 0) continue;
        if (sg != run_sign) {
            curve.extrema.push_back(s);
            run_sign = sg;
        } else if (std::abs(s.e) > std::abs(curve.extrema.back().e)) {
            curve.extrema.back() = s;
        }
    }
    return curve;
}

ErrorCurve sup_error(const RealFunction& f, const RealFunction& r,
                     std::span<const double> points) {
    std::vector<ErrorSample> samples;
    samples.reserve(points.size());
    for (double x : points) {
        const double fx = f(x);
        if (!std::isfinite(fx)) throw EvaluationError("non-finite target value", x);
        const double rx = r(x);
        if (!std::isfinite(rx)) throw EvaluationError("non-finite approximant value", x);
        samples.push_back({x, fx - rx});
    }
    return make_error_curve(std::move(samples));
}

ErrorCurve sup_error(const RealFunction& f, const RealFunction& r, const GradedGrid& grid) {
    return sup_error(f, r, std::span<const double>(grid.points));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgument("line fit needs matching samples, at least 2");
    const double m = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) throw InvalidArgument("line fit needs distinct abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double res = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += res * res;
    }
    fit.r2 = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

RateFit fit_rate(std::span<const RatePoint> errors, RateAxis axis, int min_n) {
    std::vector<double> xs, ys;
    for (const auto& p : errors) {
        if (!(p.error > 0) || !std::isfinite(p.error))
            throw InvalidArgument("rate fit requires positive finite errors");
        if (p.n < min_n) continue;
        xs.push_back(axis == RateAxis::sqrt_n ? std::sqrt(static_cast<double>(p.n))
                                              : static_cast<double>(p.n));
        ys.push_back(std::log(p.error));
    }
    if (xs.size() < 3) throw InvalidArgument("rate fit requires at least 3 points");
    const LineFit line = fit_line(xs, ys);
    return RateFit{line.slope, line.intercept, line.r2, axis};
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != columns_) throw InvalidArgument("CSV row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format_real(values[i]);
    out_ << '\n';
}

}  // namespace ratclust
