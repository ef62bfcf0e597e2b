#include "ratclust/experiments.hpp"

#include "ratclust/approximants.hpp"
#include "ratclust/clustering.hpp"
#include "ratclust/core.hpp"
#include "ratclust/errors.hpp"
#include "ratclust/fitting.hpp"
#include "ratclust/lightning.hpp"
#include "ratclust/potential.hpp"
#include "ratclust/quadrature.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace ratclust {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

class IoFailure : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// parameters

const std::map<std::string, std::set<std::string>>& schemas() {
    static const std::map<std::string, std::set<std::string>> s{
        {"approx sweep", {"family", "nmin", "nmax"}},
        {"approx fig1", {"nmax"}},
        {"approx fig12", {"nmax"}},
        {"cluster dump", {"kind", "n", "sigma", "h"}},
        {"potential phi-curves", {"n"}},
        {"potential strip", {"alpha", "n", "log_eps", "y", "count"}},
        {"quad sweep", {"nmin", "nmax"}},
        {"quad nodes", {"kind", "n", "h"}},
        {"quad gtm", {"nmax"}},
        {"lightning solve", {"polygon", "data", "data_file", "z0", "target", "nstart", "nmax"}},
    };
    return s;
}

class Params {
public:
    explicit Params(const std::map<std::string, std::string>& values) : values_(values) {}

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }

    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    [[nodiscard]] int integer(const std::string& key, int fallback, int lo, int hi) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(it->second, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("parameter " + key + " is not an integer");
        }
        if (used != it->second.size()) throw InvalidArgument("parameter " + key + " is not an integer");
        if (v < lo || v > hi)
            throw InvalidArgument("parameter " + key + " out of range [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
        return v;
    }

    [[nodiscard]] double real(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(it->second, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("parameter " + key + " is not a number");
        }
        if (used != it->second.size() || !std::isfinite(v))
            throw InvalidArgument("parameter " + key + " is not a number");
        return v;
    }

private:
    const std::map<std::string, std::string>& values_;
};

// ---------------------------------------------------------------------------
// output

using Table = std::vector<std::vector<double>>;

class Output {
public:
    Output(const ExperimentManifest& m, ExperimentResult& result) : dir_(m.out_dir), csv_only_(m.csv_only), result_(result) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoFailure("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    void csv(const std::string& file, const std::vector<std::string>& header, const Table& rows) {
        std::ostringstream text;
        CsvWriter writer(text, header);
        for (const auto& r : rows) writer.row(std::span<const double>(r));
        write(file, text.str());
    }

    void gnuplot(const std::string& file, const std::string& script) {
        if (!csv_only_) write(file, script);
    }

    void write(const std::string& file, const std::string& content) {
        const fs::path path = dir_ / file;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoFailure("cannot open " + path.string());
        out << content;
        out.close();
        if (!out) throw IoFailure("write failed for " + path.string());
        result_.artifacts.push_back(path.string());
    }

    void say(const std::string& line) { result_.report.push_back(line); }

    void check(bool ok, const std::string& what) {
        say(std::string(ok ? "check ok: " : "check FAILED: ") + what);
        if (!ok) failed_ = true;
    }

    [[nodiscard]] bool failed() const noexcept { return failed_; }

private:
    fs::path dir_;
    bool csv_only_;
    ExperimentResult& result_;
    bool failed_ = false;
};

std::string num(double v) { return format_real(v); }

std::string log_plot(const std::string& title, const std::string& csv, const std::string& xlabel,
                     const std::vector<std::pair<int, std::string>>& series, bool logx = false) {
    std::ostringstream s;
    s << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set title '" << title << "'\n"
      << "set xlabel '" << xlabel << "'\n"
      << "set logscale y\n";
    if (logx) s << "set logscale x\n";
    s << "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i) s << ", \\\n     ";
        s << "'" << csv << "' using 1:" << series[i].first << " with linespoints title '" << series[i].second << "'";
    }
    s << "\n";
    return s.str();
}

// ---------------------------------------------------------------------------
// approximation experiments

double sqrt_fn(double x) { return std::sqrt(x); }

double reported_error(const RationalApproximant& r) {
    return sup_error(sqrt_fn, as_function(r), reporting_grid()).norm_inf;
}

const std::vector<std::string>& families() {
    static const std::vector<std::string> f{"newman",     "newman-improved", "trapezoidal",   "stenger",
                                            "ls-uniform", "lawson-uniform",  "lawson-tapered"};
    return f;
}

double tapered_sigma() { return std::numbers::sqrt2 * kPi; }

double family_error(const std::string& family, int n) {
    if (family == "newman") return reported_error(newman(n, NewmanXi::classic));
    if (family == "newman-improved") return reported_error(newman(n, NewmanXi::improved));
    if (family == "trapezoidal") return reported_error(trapezoidal_sqrt(n));
    if (family == "stenger") return reported_error(stenger_interpolant(sqrt_fn, n, stenger_default_h(n)));
    FitProblem problem;
    problem.f = sqrt_fn;
    if (family == "ls-uniform") {
        problem.poles = uniform_poles(n, kPi / std::sqrt(n));
        return reported_error(least_squares_fit(problem).approximant);
    }
    if (family == "lawson-uniform") {
        problem.poles = uniform_poles(n, kPi / std::sqrt(n));
        return reported_error(lawson_minimax_fit(problem).approximant);
    }
    if (family == "lawson-tapered") {
        problem.poles = tapered_poles(n, tapered_sigma());
        return reported_error(lawson_minimax_fit(problem).approximant);
    }
    throw InvalidArgument("unknown family " + family);
}

std::vector<double> sweep(const std::string& family, const std::vector<int>& ns) {
    std::vector<double> errors(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) { errors[i] = family_error(family, ns[i]); });
    return errors;
}

std::vector<RatePoint> rate_points(const std::vector<int>& ns, const std::vector<double>& errors) {
    std::vector<RatePoint> pts;
    for (std::size_t i = 0; i < ns.size(); ++i) pts.push_back({ns[i], errors[i]});
    return pts;
}

void family_checks(Output& out, const std::string& family, const std::vector<int>& ns,
                   const std::vector<double>& errors) {
    const auto pts = rate_points(ns, errors);
    const auto usable = std::count_if(pts.begin(), pts.end(), [](const RatePoint& p) { return p.n >= kDefaultRateMinN; });
    if (usable < 3) return;
    const RateFit fit = fit_rate(pts, RateAxis::sqrt_n);
    out.say(family + " slope " + num(fit.slope) + " r2 " + num(fit.r2));
    if (family == "newman") {
        out.check(std::abs(fit.slope + std::sqrt(2.0)) <= 0.2 * std::sqrt(2.0), "newman slope within -sqrt(2) +- 20%");
    } else if (family == "trapezoidal") {
        const double target = -kPi / std::sqrt(2.0);
        out.check(std::abs(fit.slope - target) <= 0.2 * std::abs(target), "trapezoidal slope within -pi/sqrt(2) +- 20%");
    } else if (family == "stenger") {
        out.check(fit.r2 > 0.98, "stenger sqrt(n) fit r2 > 0.98");
    }
}

void approx_sweep(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    std::string family = p.text("family", "newman");
    if (family == "trap") family = "trapezoidal";
    if (family == "ls") family = "ls-uniform";
    if (family == "lawson") family = "lawson-uniform";
    if (std::find(families().begin(), families().end(), family) == families().end())
        throw InvalidArgument("unknown family " + family);
    const int nmin = p.integer("nmin", 1, 1, 400);
    const int nmax = p.integer("nmax", 20, nmin, 400);
    std::vector<int> ns;
    for (int n = nmin; n <= nmax; ++n) ns.push_back(n);
    const auto errors = sweep(family, ns);
    Table rows;
    for (std::size_t i = 0; i < ns.size(); ++i) rows.push_back({static_cast<double>(ns[i]), errors[i]});
    const std::string csv = "sweep_" + family + ".csv";
    out.csv(csv, {"n", "error"}, rows);
    out.gnuplot("sweep_" + family + ".gp", log_plot(family + " approximation of sqrt(x)", csv, "n", {{2, family}}));
    if (m.check) family_checks(out, family, ns, errors);
}

void approx_fig1(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    const int nmax = p.integer("nmax", 40, 4, 200);
    std::vector<int> ns;
    for (int n = 1; n <= nmax; ++n) ns.push_back(n);
    std::vector<std::string> header{"n"};
    std::vector<std::vector<double>> columns;
    for (const auto& f : families()) {
        header.push_back(f);
        columns.push_back(sweep(f, ns));
    }
    Table rows;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        std::vector<double> r{static_cast<double>(ns[i])};
        for (const auto& c : columns) r.push_back(c[i]);
        rows.push_back(std::move(r));
    }
    out.csv("fig1.csv", header, rows);
    std::vector<std::pair<int, std::string>> series;
    for (std::size_t j = 0; j < families().size(); ++j) series.emplace_back(static_cast<int>(j) + 2, families()[j]);
    out.gnuplot("fig1.gp", log_plot("approximation of sqrt(x) on [0,1]", "fig1.csv", "n", series));
    for (std::size_t j = 0; j < families().size(); ++j) {
        if (m.check) family_checks(out, families()[j], ns, columns[j]);
    }
}

void approx_fig12(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    const int nmax = p.integer("nmax", 50, 6, 200);
    std::vector<int> ns;
    for (int n = 2; n <= nmax; n += 2) ns.push_back(n);
    const auto uniform = sweep("lawson-uniform", ns);
    const auto tapered = sweep("lawson-tapered", ns);
    Table rows;
    for (std::size_t i = 0; i < ns.size(); ++i) rows.push_back({static_cast<double>(ns[i]), uniform[i], tapered[i]});
    out.csv("fig12.csv", {"n", "uniform", "tapered"}, rows);
    out.gnuplot("fig12.gp", "set datafile separator ','\nset logscale y\nset xlabel 'sqrt(n)'\n"
                            "plot 'fig12.csv' using (sqrt($1)):2 with linespoints title 'uniform', \\\n"
                            "     'fig12.csv' using (sqrt($1)):3 with linespoints title 'tapered'\n");
    const RateFit fu = fit_rate(rate_points(ns, uniform), RateAxis::sqrt_n, 2);
    const RateFit ft = fit_rate(rate_points(ns, tapered), RateAxis::sqrt_n, 2);
    const double su = fu.slope * fu.slope, st = ft.slope * ft.slope;
    out.say("uniform slope^2 " + num(su) + " (paper 2.3)");
    out.say("tapered slope^2 " + num(st) + " (paper 4.7)");
    out.say("ratio " + num(st / su));
    if (m.check) {
        out.check(st / su >= 1.6 && st / su <= 2.4, "tapered/uniform slope^2 ratio in [1.6, 2.4]");
        bool ordered = true;
        for (std::size_t i = 0; i < ns.size(); ++i)
            if (ns[i] >= 16 && !(tapered[i] < uniform[i])) ordered = false;
        out.check(ordered, "tapered error below uniform error for n >= 16");
    }
}

// ---------------------------------------------------------------------------
// clustering

std::vector<double> cluster_distances(const std::string& kind, int n, const Params& p) {
    if (kind == "uniform") return uniform_poles(n, p.real("h", kPi / std::sqrt(n))).distances();
    if (kind == "tapered") return tapered_poles(n, p.real("sigma", tapered_sigma())).distances();
    if (kind == "lightning") return lightning_distances(n, p.real("sigma", kLightningSigma));
    if (kind == "tanh" || kind == "tanh-sinh") {
        const auto tk = kind == "tanh" ? TransformKind::tanh : TransformKind::tanh_sinh;
        std::optional<double> h;
        if (p.has("h")) h = p.real("h", 0.0);
        return endpoint_distances(build_rule(tk, n, h));
    }
    throw InvalidArgument("unknown cluster kind " + kind);
}

void cluster_dump(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    const std::string kind = p.text("kind", "tapered");
    const int n = p.integer("n", 40, 3, 2000);
    std::vector<std::string> kinds{kind};
    if (kind == "all") kinds = {"uniform", "tapered", "lightning", "tanh", "tanh-sinh"};
    Table summary;
    for (std::size_t j = 0; j < kinds.size(); ++j) {
        const auto d = cluster_distances(kinds[j], n, p);
        Table rows;
        for (std::size_t k = 0; k < d.size(); ++k) {
            const double kk = static_cast<double>(k + 1);
            rows.push_back({kk, std::sqrt(kk), d[k], std::log(d[k])});
        }
        const std::string csv = "cluster_" + kinds[j] + ".csv";
        out.csv(csv, {"k", "sqrt_k", "distance", "log_distance"}, rows);
        out.gnuplot("cluster_" + kinds[j] + ".gp",
                    "set datafile separator ','\nset logscale y\nset xlabel 'sqrt(k)'\n"
                    "plot '" + csv + "' using 2:3 with points title '" + kinds[j] + "'\n");
        if (d.size() < 3) continue;
        const TaperDiagnostic t = analyze_taper(d);
        summary.push_back({static_cast<double>(j), t.slope_sqrtk, t.r2_sqrtk, t.slope_k, t.r2_k});
        out.say(kinds[j] + ": slope_sqrtk " + num(t.slope_sqrtk) + " r2_sqrtk " + num(t.r2_sqrtk) + " r2_k " +
                num(t.r2_k));
        if (!m.check) continue;
        if (kinds[j] == "tapered") {
            const double sigma = p.real("sigma", tapered_sigma());
            out.check(std::abs(t.slope_sqrtk - sigma) <= 1e-10 * sigma, "tapered sigma recovered to 1e-10");
        } else if (kinds[j] == "tanh-sinh") {
            out.check(t.r2_sqrtk > 0.999 && t.r2_sqrtk > t.r2_k, "tanh-sinh nodes straight against sqrt(k)");
        } else if (kinds[j] == "tanh") {
            out.check(t.r2_k > 0.999, "tanh nodes straight against k");
        }
    }
    std::string names;
    for (std::size_t j = 0; j < kinds.size(); ++j) names += (j ? "," : "") + kinds[j];
    out.say("kind index order: " + names);
    out.csv("cluster_summary.csv", {"kind_index", "slope_sqrtk", "r2_sqrtk", "slope_k", "r2_k"}, summary);
}

// ---------------------------------------------------------------------------
// potential

struct FittedConfiguration {
    PointConfiguration cfg;
    double error;
};

FittedConfiguration fitted_configuration(const ClusteredPoleSet& poles) {
    FitProblem problem;
    problem.f = sqrt_fn;
    problem.poles = poles;
    const FitResult fit = lawson_minimax_fit(problem);
    FittedConfiguration out;
    for (double x : error_zeros(fit.error_curve)) out.cfg.interp_points.emplace_back(x);
    for (double q : poles.poles) out.cfg.poles.emplace_back(q);
    out.error = fit.error_curve.norm_inf;
    return out;
}

void potential_phi_curves(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    const int n = p.integer("n", 20, 2, 80);
    const FittedConfiguration configs[2] = {fitted_configuration(uniform_poles(n, kPi / std::sqrt(n))),
                                            fitted_configuration(tapered_poles(n, tapered_sigma()))};
    const GradedGrid grid = build_graded_grid(-12.0, 0.0, 400);
    // geometric midpoints keep Gamma samples off the poles
    std::vector<double> mid;
    for (std::size_t i = 0; i + 1 < grid.points.size(); ++i) mid.push_back(std::sqrt(grid.points[i] * grid.points[i + 1]));
    Table rows;
    for (double x : mid) {
        std::vector<double> r{x};
        for (const auto& c : configs) {
            r.push_back(std::exp(log_abs_phi(c.cfg, Complex(x))));
            r.push_back(std::exp(log_abs_phi(c.cfg, Complex(-x))));
        }
        rows.push_back(std::move(r));
    }
    out.csv("phi_curves.csv", {"x", "uniform_E", "uniform_Gamma", "tapered_E", "tapered_Gamma"}, rows);
    out.gnuplot("phi_curves.gp", log_plot("|phi| on E = [0,1] and on Gamma = [-1,0] (plotted at |t|)",
                                          "phi_curves.csv", "|x|",
                                          {{2, "uniform E"}, {3, "uniform Gamma"}, {4, "tapered E"}, {5, "tapered Gamma"}},
                                          true));
    std::vector<Complex> e_samples, gamma_samples;
    for (double x : grid.points) e_samples.emplace_back(x);
    for (double x : mid) gamma_samples.emplace_back(-x);
    const WeightedSamples gamma = graded_segment(0.0, -1.0);
    const char* names[2] = {"uniform", "tapered"};
    for (int j = 0; j < 2; ++j) {
        const TauValue t = tau(configs[j].cfg, e_samples, gamma_samples);
        const double bound = hermite_error_bound_l1(configs[j].cfg, Complex(0.5), 1.0, 0.5, Complex(0.0), gamma);
        std::vector<double> e_abs;
        for (const auto& z : e_samples) e_abs.push_back(std::exp(log_abs_phi(configs[j].cfg, z)));
        std::nth_element(e_abs.begin(), e_abs.begin() + static_cast<std::ptrdiff_t>(e_abs.size() / 2), e_abs.end());
        out.say(std::string(names[j]) + ": error " + num(configs[j].error) + " tau " + num(t.value) +
                (t.vacuous ? " (sup-norm bound vacuous)" : "") + " l1 bound at x=1/2 " + num(bound) + " median |phi| on E " +
                num(e_abs[e_abs.size() / 2]));
        if (m.check) out.check(std::isfinite(bound), std::string(names[j]) + " 1-norm bound finite");
    }
}

void potential_strip(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    StripModel model;
    model.alpha = p.real("alpha", 0.5);
    model.n = p.integer("n", 50, 1, 100000);
    const double log_eps = p.real("log_eps", -20.0);
    model.epsilon = std::exp(log_eps);
    const double y = p.real("y", kPi / 2);
    const int count = p.integer("count", 41, 2, 100000);
    Table rows;
    bool window_ok = true;
    for (int i = 0; i < count; ++i) {
        const double x = log_eps + (0.0 - log_eps) * i / (count - 1);
        const Complex s(x, y);
        const double exact = strip_potential_exact(model, s), bilinear = strip_potential_bilinear(model, s);
        const double rel = std::abs(exact - bilinear) / std::abs(exact);
        rows.push_back({x, exact, bilinear, rel});
        if (x >= log_eps + 5.0 && x <= -5.0 && !(rel <= 0.05)) window_ok = false;
    }
    out.csv("strip.csv", {"x", "exact", "bilinear", "relative_difference"}, rows);
    out.gnuplot("strip.gp", "set datafile separator ','\nset xlabel 'Re s'\n"
                            "plot 'strip.csv' using 1:2 with lines title 'Poisson integral', \\\n"
                            "     'strip.csv' using 1:3 with lines title 'bilinear'\n");
    if (m.check) out.check(window_ok, "bilinear within 5% of the Poisson integral in the mid-strip window");
}

// ---------------------------------------------------------------------------
// quadrature

constexpr double kSqrtIntegral = 4.0 * std::numbers::sqrt2 / 3.0;

double sqrt_rule_error(TransformKind kind, int n) {
    const QuadratureRule rule = build_rule(kind, n);
    const double value = integrate(rule, GapIntegrand([](double, double one_plus_x, double) { return std::sqrt(one_plus_x); }));
    return std::abs(value - kSqrtIntegral);
}

void quad_sweep(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    const int nmin = p.integer("nmin", 1, 1, 2000);
    const int nmax = p.integer("nmax", 40, nmin, 2000);
    Table rows;
    std::vector<RatePoint> tanh_pts;
    double ts40 = -1.0;
    for (int n = nmin; n <= nmax; ++n) {
        const double et = sqrt_rule_error(TransformKind::tanh, n), es = sqrt_rule_error(TransformKind::tanh_sinh, n);
        rows.push_back({static_cast<double>(n), et, es});
        if (et > 0) tanh_pts.push_back({n, et});
        if (n == 40) ts40 = es;
    }
    out.csv("quad_sweep.csv", {"n", "tanh", "tanh_sinh"}, rows);
    out.gnuplot("quad_sweep.gp", log_plot("trapezoidal rules for sqrt(1+x)", "quad_sweep.csv", "n",
                                          {{2, "tanh"}, {3, "tanh-sinh"}}));
    if (!m.check) return;
    if (std::count_if(tanh_pts.begin(), tanh_pts.end(), [](const RatePoint& q) { return q.n >= 4; }) >= 3) {
        const RateFit fit = fit_rate(tanh_pts, RateAxis::sqrt_n);
        out.say("tanh slope " + num(fit.slope));
        out.check(std::abs(fit.slope + kPi) <= 0.2 * kPi, "tanh slope within -pi +- 20%");
    }
    if (ts40 >= 0) out.check(ts40 <= 1e-12, "tanh-sinh n = 40 error <= 1e-12");
}

void quad_nodes(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    const std::string kind = p.text("kind", "tanh");
    if (kind != "tanh" && kind != "tanh-sinh") throw InvalidArgument("kind must be tanh or tanh-sinh");
    const int n = p.integer("n", 20, 1, 100000);
    std::optional<double> h;
    if (p.has("h")) h = p.real("h", 0.0);
    const QuadratureRule rule = build_rule(kind == "tanh" ? TransformKind::tanh : TransformKind::tanh_sinh, n, h);
    Table rows;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        rows.push_back({rule.offset(i), rule.nodes[i], rule.weights[i], rule.left_gap[i], rule.right_gap[i]});
    out.csv("nodes_" + kind + ".csv", {"k", "x", "w", "one_plus_x", "one_minus_x"}, rows);
}

void quad_gtm(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    const int nmax = p.integer("nmax", 40, 10, 640);
    std::vector<int> ns;
    for (int n = 10; n <= nmax; n *= 2) ns.push_back(n);
    std::vector<QuadratureRule> tanh_rules, ts_rules;
    for (int n : ns) {
        tanh_rules.push_back(build_rule(TransformKind::tanh, n));
        ts_rules.push_back(build_rule(TransformKind::tanh_sinh, n));
    }
    Table norms;
    for (std::size_t i = 0; i < ns.size(); ++i)
        norms.push_back({static_cast<double>(ns[i]), gtm_l1_norm(tanh_rules[i], -2.0, -1.0),
                         gtm_l1_norm(ts_rules[i], -2.0, -1.0)});
    out.csv("gtm_l1.csv", {"n", "tanh", "tanh_sinh"}, norms);

    std::vector<std::string> header{"u"};
    for (int n : ns) header.push_back("tanh_" + std::to_string(n));
    for (int n : ns) header.push_back("tanh_sinh_" + std::to_string(n));
    Table curve;
    for (double u : build_graded_grid(-14.0, 0.0, 281).points) {
        std::vector<double> r{u};
        for (const auto& rule : tanh_rules) r.push_back(gtm_error_on_axis(rule, -1.0 - u));
        for (const auto& rule : ts_rules) r.push_back(gtm_error_on_axis(rule, -1.0 - u));
        curve.push_back(std::move(r));
    }
    out.csv("gtm_curve.csv", header, curve);
    std::vector<std::pair<int, std::string>> series;
    for (std::size_t j = 1; j < header.size(); ++j) series.emplace_back(static_cast<int>(j) + 1, header[j]);
    out.gnuplot("gtm_curve.gp", log_plot("|phi - r| at t = -1 - u", "gtm_curve.csv", "u", series, true));

    const RectangleContour box{-2.0, 2.0, -1.0, 1.0};
    const QuadratureRule rule20 = build_rule(TransformKind::tanh, 20);
    struct Case {
        AnalyticFunction f;
        double exact;
    };
    const Case cases[2] = {{[](Complex t) { return std::exp(t); }, std::exp(1.0) - std::exp(-1.0)},
                           {[](Complex t) { return 1.0 / (t - 3.0); }, -std::log(2.0)}};
    Table identity;
    bool identity_ok = true;
    for (int c = 0; c < 2; ++c) {
        const GtmCheck g = gtm_error_identity_check(rule20, cases[c].f, box, cases[c].exact);
        const double rel = std::abs(g.lhs - g.rhs) / std::abs(g.lhs);
        identity.push_back({static_cast<double>(c), g.lhs, g.rhs, rel});
        if (!(rel <= 1e-8)) identity_ok = false;
    }
    out.csv("gtm_identity.csv", {"case", "lhs", "rhs", "relative_difference"}, identity);
    out.say("identity cases: 0 = exp(t), 1 = 1/(t-3); tanh rule n = 20");
    if (!m.check) return;
    out.check(identity_ok, "contour integral matches I - I_n to 1e-8 relative");
    bool halving = true;
    for (std::size_t i = 1; i < norms.size(); ++i)
        if (!(norms[i][1] * 2.0 <= norms[i - 1][1])) halving = false;
    out.check(halving, "tanh 1-norm drops by at least 2x per doubling");
    for (const auto& r : norms) {
        if (r[0] != 40) continue;
        out.check(r[2] < r[1] && r[1] < 10.0 * r[2], "tanh-sinh 1-norm at n = 40 below tanh but within 10x");
    }
}

// ---------------------------------------------------------------------------
// lightning

std::vector<Complex> l_shape() { return {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}; }

std::vector<Complex> snowflake() {
    std::vector<Complex> v;
    for (int j = 0; j < 12; ++j) v.push_back(std::polar(j % 2 == 0 ? 1.0 : 1.0 / std::sqrt(3.0), kPi * j / 6.0));
    return v;
}

std::vector<Complex> read_polygon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot read polygon file " + path);
    std::vector<Complex> v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double x = 0, y = 0;
        if (!(fields >> x >> y)) throw InvalidArgument("malformed polygon line: " + line);
        v.emplace_back(x, y);
    }
    return v;
}

std::vector<double> read_edge_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot read data file " + path);
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        try {
            v.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw InvalidArgument("malformed data line: " + line);
        }
    }
    return v;
}

Complex parse_point(const std::string& text) {
    std::string t = text;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream fields(t);
    double x = 0, y = 0;
    if (!(fields >> x >> y)) throw InvalidArgument("point must be given as x,y");
    return {x, y};
}

void lightning_solve(const ExperimentManifest& m, Output& out) {
    const Params p(m.parameters);
    const std::string polygon = p.text("polygon", "lshape");
    const PolygonDomain domain(polygon == "lshape"      ? l_shape()
                               : polygon == "snowflake" ? snowflake()
                                                        : read_polygon(polygon));
    const std::string data = p.text("data", "logabs");
    const Complex z0 = parse_point(p.text("z0", polygon == "lshape" ? "1.5,1.5" : "0,0"));
    BoundaryData g;
    if (data == "logabs") {
        g = [z0](Complex z, std::size_t) { return std::log(std::abs(z - z0)); };
    } else if (data == "rez2") {
        g = [](Complex z, std::size_t) { return (z * z).real(); };
    } else if (data == "file") {
        if (!p.has("data_file")) throw InvalidArgument("data=file needs data_file");
        const auto values = read_edge_values(p.text("data_file", ""));
        if (values.size() != domain.size()) throw InvalidArgument("data file needs one value per edge");
        g = [values](Complex, std::size_t edge) { return values[edge]; };
    } else {
        throw InvalidArgument("data must be logabs, rez2 or file");
    }
    const double target = p.real("target", 1e-6);
    const int nstart = p.integer("nstart", 4, 1, 400);
    const int nmax = p.integer("nmax", 48, nstart, 400);

    Table convergence;
    LightningBasis basis = build_basis(domain, 0, 0);
    LightningSolution sol;
    for (int n = nstart;; n = std::min(2 * n, nmax)) {
        const int total = n * static_cast<int>(domain.size());
        basis = build_basis(domain, n, static_cast<int>(std::lround(std::sqrt(total))));
        sol = solve(basis, g);
        convergence.push_back({static_cast<double>(n), static_cast<double>(sol.dof), static_cast<double>(sol.rank),
                               sol.boundary_residual});
        out.say("n_per_corner " + std::to_string(n) + " dof " + std::to_string(sol.dof) + " rank " +
                std::to_string(sol.rank) + " residual " + num(sol.boundary_residual));
        if (sol.boundary_residual <= target || n >= nmax) break;
    }
    out.csv("lightning_convergence.csv", {"n_per_corner", "dof", "rank", "residual"}, convergence);
    out.gnuplot("lightning_convergence.gp",
                "set datafile separator ','\nset logscale y\nset xlabel 'sqrt(dof)'\n"
                "plot 'lightning_convergence.csv' using (sqrt($2)):4 with linespoints title 'boundary residual'\n");
    Table poles;
    for (const auto& q : basis.poles) poles.push_back({q.real(), q.imag()});
    out.csv("lightning_poles.csv", {"x", "y"}, poles);

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& v : domain.vertices()) {
        xmin = std::min(xmin, v.real());
        xmax = std::max(xmax, v.real());
        ymin = std::min(ymin, v.imag());
        ymax = std::max(ymax, v.imag());
    }
    constexpr int kGrid = 81;
    Table grid;
    for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j) {
            const Complex z(xmin + (xmax - xmin) * i / (kGrid - 1), ymin + (ymax - ymin) * j / (kGrid - 1));
            if (domain.contains(z)) grid.push_back({z.real(), z.imag(), evaluate_solution(sol, basis, z)});
        }
    out.csv("lightning_grid.csv", {"x", "y", "u"}, grid);

    if (data == "logabs" && !domain.contains(z0) && domain.distance_to_boundary(z0) > 0.0) {
        std::mt19937_64 rng(m.seed);
        std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
        double worst = 0.0;
        int taken = 0;
        while (taken < 500) {
            const Complex z(ux(rng), uy(rng));
            if (!domain.contains(z)) continue;
            worst = std::max(worst, std::abs(evaluate_solution(sol, basis, z) - std::log(std::abs(z - z0))));
            ++taken;
        }
        out.say("max interior error over 500 points " + num(worst));
        if (m.check) out.check(worst <= 10.0 * sol.boundary_residual, "interior error within 10x boundary residual");
    }
    if (m.check) out.check(sol.boundary_residual <= target, "boundary residual reaches target " + num(target));
}

using Runner = void (*)(const ExperimentManifest&, Output&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> r{
        {"approx sweep", approx_sweep},
        {"approx fig1", approx_fig1},
        {"approx fig12", approx_fig12},
        {"cluster dump", cluster_dump},
        {"potential phi-curves", potential_phi_curves},
        {"potential strip", potential_strip},
        {"quad sweep", quad_sweep},
        {"quad nodes", quad_nodes},
        {"quad gtm", quad_gtm},
        {"lightning solve", lightning_solve},
    };
    return r;
}

}  // namespace

std::string ExperimentManifest::to_json() const {
    json j;
    j["name"] = name;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["out_dir"] = out_dir;
    j["seed"] = seed;
    j["check"] = check;
    j["csv_only"] = csv_only;
    return j.dump(2) + "\n";
}

ExperimentManifest ExperimentManifest::from_json(const std::string& text) {
    ExperimentManifest m;
    try {
        const json j = json::parse(text);
        m.name = j.value("name", std::string{});
        m.subcommand = j.at("subcommand").get<std::string>();
        if (j.contains("parameters")) {
            for (const auto& [key, value] : j.at("parameters").items())
                m.parameters[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
        m.out_dir = j.value("out_dir", std::string("out"));
        m.seed = j.value("seed", std::uint64_t{1});
        m.check = j.value("check", false);
        m.csv_only = j.value("csv_only", false);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

const std::vector<std::string>& known_subcommands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, _] : runners()) v.push_back(name);
        return v;
    }();
    return names;
}

ExperimentResult run(const ExperimentManifest& manifest) {
    ExperimentResult result;
    const auto it = runners().find(manifest.subcommand);
    if (it == runners().end()) {
        result.status = ExitCode::unknown_subcommand;
        result.report.push_back("unknown subcommand: " + manifest.subcommand);
        return result;
    }
    try {
        const auto& allowed = schemas().at(manifest.subcommand);
        for (const auto& [key, _] : manifest.parameters)
            if (!allowed.count(key)) throw InvalidArgument("unknown parameter " + key + " for " + manifest.subcommand);
        Output out(manifest, result);
        it->second(manifest, out);
        out.write("manifest.json", manifest.to_json());
        if (manifest.check && out.failed()) result.status = ExitCode::check_failed;
    } catch (const IoFailure& e) {
        result.status = ExitCode::io_failure;
        result.report.push_back(std::string("error: ") + e.what());
    } catch (const std::exception& e) {
        result.status = ExitCode::invalid_parameters;
        result.report.push_back(std::string("error: ") + e.what());
    }
    return result;
}

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CR_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) n = std::min(n, static_cast<unsigned>(v));
    }
    return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    const std::lock_guard lock(failure_lock);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace ratclust
