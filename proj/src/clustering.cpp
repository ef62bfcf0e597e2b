#include "ratclust/clustering.hpp"

#include "ratclust/core.hpp"
#include "ratclust/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ratclust {

std::vector<double> ClusteredPoleSet::distances() const {
    std::vector<double> d(poles.size());
    std::transform(poles.begin(), poles.end(), d.begin(), [](double p) { return -p; });
    return d;
}

ClusteredPoleSet uniform_poles(int n, double h) {
    if (n < 1) throw InvalidArgument("uniform_poles: n must be >= 1");
    if (!(h > 0)) throw InvalidArgument("uniform_poles: h must be positive");
    ClusteredPoleSet set;
    set.kind = ClusterKind::uniform;
    set.n = n;
    set.h = h;
    set.poles.resize(static_cast<std::size_t>(n));
    // closest first: k = n-1 down to 0
    for (int i = 0; i < n; ++i) set.poles[static_cast<std::size_t>(i)] = -std::exp(-(n - 1 - i) * h);
    return set;
}

ClusteredPoleSet tapered_poles(int n, double sigma, double beta) {
    if (n < 1) throw InvalidArgument("tapered_poles: n must be >= 1");
    if (!(sigma > 0)) throw InvalidArgument("tapered_poles: sigma must be positive");
    if (!(beta > 0)) throw InvalidArgument("tapered_poles: beta must be positive");
    ClusteredPoleSet set;
    set.kind = ClusterKind::tapered;
    set.n = n;
    set.sigma = sigma;
    set.beta = beta;
    set.poles.resize(static_cast<std::size_t>(n));
    const double sn = std::sqrt(static_cast<double>(n));
    for (int k = 1; k <= n; ++k)
        set.poles[static_cast<std::size_t>(k - 1)] =
            -beta * std::exp(sigma * (std::sqrt(static_cast<double>(k)) - sn));
    return set;
}

ClusteredPoleSet custom_poles(std::vector<double> poles) {
    for (double p : poles)
        if (!(p < 0) || !std::isfinite(p)) throw InvalidArgument("custom poles must be negative");
    std::sort(poles.begin(), poles.end(), [](double a, double b) { return a > b; });
    if (std::adjacent_find(poles.begin(), poles.end()) != poles.end())
        throw InvalidArgument("custom poles must be distinct");
    ClusteredPoleSet set;
    set.kind = ClusterKind::custom;
    set.n = static_cast<int>(poles.size());
    set.poles = std::move(poles);
    return set;
}

std::vector<double> lightning_distances(int n, double sigma) {
    if (n < 0) throw InvalidArgument("lightning_distances: n must be >= 0");
    if (!(sigma > 0)) throw InvalidArgument("lightning_distances: sigma must be positive");
    std::vector<double> d(static_cast<std::size_t>(n));
    const double sn = std::sqrt(static_cast<double>(n));
    for (int k = 1; k <= n; ++k)
        d[static_cast<std::size_t>(k - 1)] = std::exp(-sigma * (sn - std::sqrt(static_cast<double>(k))));
    return d;
}

ClusteredPoleSet lightning_poles(int n, double sigma) {
    if (n < 1) throw InvalidArgument("lightning_poles: n must be >= 1");
    return tapered_poles(n, sigma, 1.0);
}

TaperDiagnostic analyze_taper(std::span<const double> distances) {
    if (distances.size() < 3) throw InvalidArgument("analyze_taper needs at least 3 distances");
    std::vector<double> k(distances.size()), sk(distances.size()), logd(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (!(distances[i] > 0)) throw InvalidArgument("analyze_taper: distances must be positive");
        if (i > 0 && !(distances[i] > distances[i - 1]))
            throw InvalidArgument("analyze_taper: distances must be strictly increasing");
        k[i] = static_cast<double>(i + 1);
        sk[i] = std::sqrt(k[i]);
        logd[i] = std::log(distances[i]);
    }
    const LineFit by_sqrt = fit_line(sk, logd);
    const LineFit by_k = fit_line(k, logd);
    return {by_sqrt.slope, by_sqrt.intercept, by_sqrt.r2, by_k.slope, by_k.r2};
}

int cumulative_count(std::span<const double> distances, double s) {
    const double threshold = std::exp(s);
    return static_cast<int>(std::count_if(distances.begin(), distances.end(),
                                          [&](double d) { return d <= threshold; }));
}

}  // namespace ratclust
