#pragma once

// Monte Carlo excess-risk estimation, log-log rate fitting, the paired
// wiNN-vs-kNN comparison, and the mislabeled-point island geometry probe.
// Replicates run on independent seeded streams (seed XOR replicate index) and
// reduce in index order, so results are invariant to the thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sci/core.hpp"
#include "sci/estimators.hpp"
#include "sci/parallel.hpp"
#include "sci/rng.hpp"
#include "sci/stats.hpp"
#include "sci/synthgen.hpp"

namespace sci {

/// Excess-risk measurements across sample sizes with a fitted log-log rate.
struct RatePoint {
    std::size_t n = 0;
    double mean_excess_risk = 0.0;
    double std_error = 0.0;
    int replicates = 0;
};

struct RiskReport {
    std::vector<RatePoint> points;
    double fitted_rate = 0.0;
    double rate_ci = 0.0;  // 95% half-width
};

/// Mean squared deviation from the true regression function, averaged over
/// replicates; test points are drawn from the training marginal.
inline MeanStdError excess_risk_regression(const PredictorBuilder& builder,
                                           const GeneratorSpec& spec, std::size_t n_test,
                                           int replicates, int threads = 0) {
    if (n_test < 1 || replicates < 1)
        throw std::invalid_argument("excess_risk_regression: n_test and replicates must be >= 1");
    std::vector<double> per_replicate(static_cast<std::size_t>(replicates));
    parallel_for_index(static_cast<std::size_t>(replicates), threads, [&](std::size_t r) {
        Rng rng = Rng::replicate_stream(spec.seed, r);
        Generated gen = detail::generate_with(rng, spec);
        auto ds = std::make_shared<const LabeledDataset>(std::move(gen.data));
        const Predictor estimator = builder(ds);
        double sum = 0.0;
        for (std::size_t t = 0; t < n_test; ++t) {
            const auto [x, unused] = detail::draw_test_point(rng, spec);
            const double diff = estimator(x) - gen.truth.eta(x);
            sum += diff * diff;
        }
        per_replicate[r] = sum / static_cast<double>(n_test);
    });
    return mean_std_error(per_replicate);
}

/// Mean zero-one test error minus the Bayes risk, averaged over replicates.
inline MeanStdError excess_risk_classification(const ClassifierBuilder& builder,
                                               const GeneratorSpec& spec,
                                               std::size_t n_test, int replicates,
                                               int threads = 0) {
    if (n_test < 1 || replicates < 1)
        throw std::invalid_argument(
            "excess_risk_classification: n_test and replicates must be >= 1");
    Generated probe = generate(spec);
    if (!probe.truth.bayes_label || !probe.truth.bayes_risk)
        throw std::invalid_argument(
            "excess_risk_classification: spec has no Bayes ground truth");
    const double bayes_risk = *probe.truth.bayes_risk;
    std::vector<double> per_replicate(static_cast<std::size_t>(replicates));
    parallel_for_index(static_cast<std::size_t>(replicates), threads, [&](std::size_t r) {
        Rng rng = Rng::replicate_stream(spec.seed, r);
        Generated gen = detail::generate_with(rng, spec);
        auto ds = std::make_shared<const LabeledDataset>(std::move(gen.data));
        const Classifier classifier = builder(ds);
        std::size_t errors = 0;
        for (std::size_t t = 0; t < n_test; ++t) {
            const auto [x, y] = detail::draw_test_point(rng, spec);
            if (classifier(x) != y) ++errors;
        }
        per_replicate[r] =
            static_cast<double>(errors) / static_cast<double>(n_test) - bayes_risk;
    });
    return mean_std_error(per_replicate);
}

/// OLS slope of log(mean excess risk) against log(n), with a 1.96-sigma CI
/// half-width. Requires >= 4 distinct n spanning at least two decades and
/// strictly positive risks.
inline std::pair<double, double> fit_rate(const std::vector<RatePoint>& points) {
    if (points.size() < 4)
        throw std::invalid_argument("fit_rate: need >= 4 sample sizes");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].n <= points[i - 1].n)
            throw std::invalid_argument("fit_rate: n values must be strictly increasing");
    const double decades = std::log10(static_cast<double>(points.back().n) /
                                      static_cast<double>(points.front().n));
    if (decades < 2.0 - 1e-9)
        throw std::invalid_argument("fit_rate: n values must span >= 2 decades");
    std::vector<double> lx, ly;
    for (const auto& p : points) {
        if (!(p.mean_excess_risk > 0.0))
            throw std::invalid_argument("fit_rate: rate undefined; increase replicates");
        lx.push_back(std::log(static_cast<double>(p.n)));
        ly.push_back(std::log(p.mean_excess_risk));
    }
    const OlsFit fit = ols_fit(lx, ly);
    return {fit.slope, 1.96 * fit.slope_std_error};
}

inline std::pair<double, double> fit_rate(const RiskReport& report) {
    return fit_rate(report.points);
}

/// Run the excess-risk sweep over n_grid and fit the rate.
inline RiskReport risk_sweep_regression(const PredictorBuilder& builder, GeneratorSpec spec,
                                        const std::vector<std::size_t>& n_grid,
                                        std::size_t n_test, int replicates,
                                        int threads = 0) {
    RiskReport report;
    for (std::size_t n : n_grid) {
        const GeneratorSpec sized = with_n(spec, n);
        const MeanStdError res =
            excess_risk_regression(builder, sized, n_test, replicates, threads);
        report.points.push_back({n, res.mean, res.std_error, replicates});
    }
    const auto [slope, ci] = fit_rate(report.points);
    report.fitted_rate = slope;
    report.rate_ci = ci;
    return report;
}

/// Paired comparison on shared train/test draws (common random numbers).
struct PairedComparison {
    MeanStdError winn;
    MeanStdError knn;
    MeanStdError difference;  // winn - knn, paired per replicate
};

inline PairedComparison winn_vs_knn(const GeneratorSpec& spec, std::size_t k,
                                    const WeightScheme& scheme, std::size_t n_test,
                                    int replicates, int threads = 0) {
    if (n_test < 1 || replicates < 1)
        throw std::invalid_argument("winn_vs_knn: n_test and replicates must be >= 1");
    std::vector<double> winn_risk(static_cast<std::size_t>(replicates));
    std::vector<double> knn_risk(static_cast<std::size_t>(replicates));
    parallel_for_index(static_cast<std::size_t>(replicates), threads, [&](std::size_t r) {
        Rng rng = Rng::replicate_stream(spec.seed, r);
        Generated gen = detail::generate_with(rng, spec);
        auto ds = std::make_shared<const LabeledDataset>(std::move(gen.data));
        const NeighborIndex index = build_index(ds);
        const WinnEstimator winn(index, k, scheme);
        const KnnEstimator knn(index, k);
        double sw = 0.0, sk = 0.0;
        for (std::size_t t = 0; t < n_test; ++t) {
            const auto [x, unused] = detail::draw_test_point(rng, spec);
            const double eta = gen.truth.eta(x);
            const double dw = winn.predict(x) - eta;
            const double dk = knn.predict(x) - eta;
            sw += dw * dw;
            sk += dk * dk;
        }
        winn_risk[r] = sw / static_cast<double>(n_test);
        knn_risk[r] = sk / static_cast<double>(n_test);
    });
    std::vector<double> diff(winn_risk.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = winn_risk[i] - knn_risk[i];
    return {mean_std_error(winn_risk), mean_std_error(knn_risk), mean_std_error(diff)};
}

namespace detail {

// 16 fixed unit directions: equally spaced angles in 2D, seeded unit vectors
// otherwise.
inline std::vector<std::vector<double>> island_directions(std::size_t dim) {
    constexpr std::size_t kRays = 16;
    std::vector<std::vector<double>> dirs;
    if (dim == 2) {
        for (std::size_t j = 0; j < kRays; ++j) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / kRays;
            dirs.push_back({std::cos(a), std::sin(a)});
        }
        return dirs;
    }
    Rng rng(0x5ca1ab1eULL);
    while (dirs.size() < kRays) {
        std::vector<double> v(dim);
        double norm2 = 0.0;
        for (auto& c : v) {
            c = rng.normal();
            norm2 += c * c;
        }
        if (norm2 == 0.0) continue;
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : v) c *= inv;
        dirs.push_back(std::move(v));
    }
    return dirs;
}

}  // namespace detail

/// Radius of the misclassification island around a mislabeled point: along 16
/// fixed rays, bisect for the distance at which the classifier first agrees
/// with the Bayes label; return the median over rays. Rays that still
/// disagree at max_radius fail; a failed majority means no island at this
/// scale.
inline double island_radius(const Classifier& classifier,
                            std::span<const double> mislabeled_point, int bayes_label,
                            double max_radius) {
    if (!(max_radius > 0.0))
        throw std::invalid_argument("island_radius: max_radius must be > 0");
    if (classifier(mislabeled_point) == bayes_label)
        throw std::invalid_argument(
            "island_radius: classifier agrees with Bayes at the island center");
    constexpr double kTol = 1e-6;
    const auto dirs = detail::island_directions(mislabeled_point.size());
    std::vector<double> hits;
    std::vector<double> probe(mislabeled_point.size());
    for (const auto& dir : dirs) {
        const auto at = [&](double t) {
            for (std::size_t c = 0; c < probe.size(); ++c)
                probe[c] = mislabeled_point[c] + t * dir[c];
            return classifier(probe);
        };
        if (at(max_radius) != bayes_label) continue;  // island extends past the scale
        double lo = 0.0, hi = max_radius;
        while (hi - lo > kTol) {
            const double mid = 0.5 * (lo + hi);
            (at(mid) == bayes_label ? hi : lo) = mid;
        }
        hits.push_back(0.5 * (lo + hi));
    }
    if (hits.size() * 2 < dirs.size())
        throw std::runtime_error("island_radius: not an island at this scale");
    return median(std::move(hits));
}

/// Island statistics for one two-Gaussian dataset replicate set: radii of all
/// flipped points whose observed label disagrees with Bayes at their location.
struct IslandStats {
    std::size_t n = 0;
    int replicates = 0;
    std::size_t mislabeled_points = 0;   // flipped points across replicates
    std::size_t measured_islands = 0;    // radii successfully measured
    std::size_t interpolation_misses = 0;  // flipped points NOT reproduced exactly
    std::size_t oversized_islands = 0;   // "not an island at this scale" cases
    std::vector<double> radii;
    double median_radius = std::numeric_limits<double>::quiet_NaN();
};

inline IslandStats island_experiment(const GeneratorSpec& spec, std::size_t k,
                                     const WeightScheme& scheme, double max_radius,
                                     int replicates, int threads = 0) {
    const auto* g = std::get_if<Fig2Gaussians>(&spec.variant);
    if (!g) throw std::invalid_argument("island_experiment: requires a Fig2Gaussians spec");
    IslandStats stats;
    stats.n = g->n;
    stats.replicates = replicates;
    struct PerReplicate {
        std::size_t mislabeled = 0, measured = 0, misses = 0, oversized = 0;
        std::vector<double> radii;
    };
    std::vector<PerReplicate> results(static_cast<std::size_t>(replicates));
    parallel_for_index(static_cast<std::size_t>(replicates), threads, [&](std::size_t r) {
        Rng rng = Rng::replicate_stream(spec.seed, r);
        Generated gen = detail::generate_with(rng, spec);
        auto ds = std::make_shared<const LabeledDataset>(std::move(gen.data));
        const WinnEstimator winn(build_index(ds), k, scheme);
        const Classifier classifier = [&winn](std::span<const double> x) {
            return winn.classify(x);
        };
        PerReplicate& out = results[r];
        for (std::size_t i = 0; i < ds->size(); ++i) {
            if (!gen.info.flipped[i]) continue;
            ++out.mislabeled;
            const auto x = ds->point(i);
            if (classifier(x) != static_cast<int>(ds->label(i))) ++out.misses;
            const int bayes = gen.truth.bayes_label(x);
            if (classifier(x) == bayes) continue;  // flip landed on the Bayes side
            try {
                out.radii.push_back(island_radius(classifier, x, bayes, max_radius));
                ++out.measured;
            } catch (const std::runtime_error&) {
                ++out.oversized;
            }
        }
    });
    for (const auto& pr : results) {
        stats.mislabeled_points += pr.mislabeled;
        stats.measured_islands += pr.measured;
        stats.interpolation_misses += pr.misses;
        stats.oversized_islands += pr.oversized;
        stats.radii.insert(stats.radii.end(), pr.radii.begin(), pr.radii.end());
    }
    if (!stats.radii.empty()) stats.median_radius = median(stats.radii);
    return stats;
}

}  // namespace sci
