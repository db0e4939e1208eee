#pragma once

// Experiment subcommands. Each resolves its config (defaults + validation),
// runs the computation, and writes plot-ready CSV plus a JSON document of the
// form {config, results, version}. Outputs are byte-deterministic for a fixed
// config and independent of the thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sci/cli/config.hpp"
#include "sci/core.hpp"
#include "sci/descent.hpp"
#include "sci/estimators.hpp"
#include "sci/io/csv.hpp"
#include "sci/io/json_out.hpp"
#include "sci/lagrange.hpp"
#include "sci/risk.hpp"
#include "sci/simplex.hpp"
#include "sci/synthgen.hpp"

namespace sci::cli {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {

inline ordered_json wrap_output(ordered_json config, ordered_json results) {
    ordered_json out;
    out["config"] = std::move(config);
    out["results"] = std::move(results);
    out["version"] = kVersion;
    return out;
}

inline ordered_json scheme_to_json(const WeightScheme& scheme) {
    if (scheme.kind == WeightScheme::Kind::logarithmic) return "log";
    return scheme.delta;
}

inline std::size_t resolve_k(std::optional<std::int64_t> k_cfg, std::size_t n, double alpha,
                             int dim, double k_const) {
    if (k_cfg) {
        if (*k_cfg < 1 || static_cast<std::size_t>(*k_cfg) >= n)
            throw user_error("k must lie in [1, n-1]");
        return static_cast<std::size_t>(*k_cfg);
    }
    return static_cast<std::size_t>(
        optimal_k(static_cast<long>(n), HolderParams(alpha, dim), k_const));
}

}  // namespace detail

/// Noisy-line regression figure: dense wiNN curve over [grid_min, grid_max]
/// (plus the sample abscissas so interpolation is visible in the file), the
/// samples, and the y = x reference.
inline ordered_json cmd_fig1(const ordered_json& raw_config,
                             const std::filesystem::path& out_dir, int threads = 0) {
    (void)threads;
    ConfigView cfg(raw_config, "fig1");
    const auto n = static_cast<std::size_t>(cfg.integer("n", 50));
    const auto k_cfg = cfg.k_or_auto("k", 20);
    const WeightScheme scheme = cfg.weights("weights", WeightScheme::logarithmic());
    const double alpha = cfg.number("alpha", 1.0);
    const double k_const = cfg.number("k_const", 1.0);
    const std::uint64_t seed = cfg.seed("seed", 1);
    const double grid_min = cfg.number("grid_min", -0.2);
    const double grid_max = cfg.number("grid_max", 1.2);
    const double grid_step = cfg.number("grid_step", 1e-3);
    cfg.finish();
    if (!(grid_step > 0.0) || !(grid_max > grid_min))
        throw user_error("fig1: bad grid bounds");

    const std::size_t k = detail::resolve_k(k_cfg, n, alpha, 1, k_const);
    const GeneratorSpec spec{Fig1Regression{n}, seed};
    Generated gen = generate(spec);
    auto ds = std::make_shared<const LabeledDataset>(std::move(gen.data));
    const WinnEstimator winn(build_index(ds), k, scheme);

    // Grid plus sample abscissas, sorted; is_sample marks the latter.
    std::vector<std::pair<double, int>> abscissas;
    const auto steps = static_cast<std::size_t>(
        std::floor((grid_max - grid_min) / grid_step + 0.5));
    for (std::size_t i = 0; i <= steps; ++i)
        abscissas.push_back({grid_min + static_cast<double>(i) * grid_step, 0});
    for (std::size_t i = 0; i < ds->size(); ++i) abscissas.push_back({ds->point(i)[0], 1});
    std::sort(abscissas.begin(), abscissas.end());

    std::vector<std::vector<double>> curve_rows;
    for (const auto& [x, is_sample] : abscissas) {
        const double query[1] = {x};
        curve_rows.push_back({x, winn.predict(query), x, static_cast<double>(is_sample)});
    }
    std::vector<std::vector<double>> sample_rows;
    for (std::size_t i = 0; i < ds->size(); ++i)
        sample_rows.push_back({ds->point(i)[0], ds->label(i)});

    std::filesystem::create_directories(out_dir);
    io::write_table(out_dir / "fig1_curve.csv", {"x", "yhat", "eta", "is_sample"}, curve_rows);
    io::write_table(out_dir / "fig1_samples.csv", {"x", "y"}, sample_rows);

    ordered_json config;
    config["command"] = "fig1";
    config["n"] = n;
    config["k"] = k;
    config["weights"] = detail::scheme_to_json(scheme);
    config["alpha"] = alpha;
    config["k_const"] = k_const;
    config["seed"] = seed;
    config["grid_min"] = grid_min;
    config["grid_max"] = grid_max;
    config["grid_step"] = grid_step;
    ordered_json results;
    results["files"] = {"fig1_curve.csv", "fig1_samples.csv"};
    results["curve_rows"] = curve_rows.size();
    results["samples"] = sample_rows.size();
    const ordered_json out = detail::wrap_output(std::move(config), std::move(results));
    io::write_json(out_dir / "fig1.json", out);
    return out;
}

/// Two-Gaussian classification figure: class labels on a grid of cell
/// centers, the samples with true/flipped flags, and the Bayes boundary.
inline ordered_json cmd_fig2(const ordered_json& raw_config,
                             const std::filesystem::path& out_dir, int threads = 0) {
    (void)threads;
    ConfigView cfg(raw_config, "fig2");
    const auto n = static_cast<std::size_t>(cfg.integer("n", 50));
    const auto k_cfg = cfg.k_or_auto("k", 20);
    const WeightScheme scheme = cfg.weights("weights", WeightScheme::logarithmic());
    const double alpha = cfg.number("alpha", 1.0);
    const double k_const = cfg.number("k_const", 1.0);
    const double flip_prob = cfg.number("flip_prob", 0.1);
    const double separation = cfg.number("separation", 2.0);
    const std::uint64_t seed = cfg.seed("seed", 1);
    const auto grid_nx = static_cast<std::size_t>(cfg.integer("grid_nx", 256));
    const auto grid_ny = static_cast<std::size_t>(cfg.integer("grid_ny", 256));
    const double x1_min = cfg.number("x1_min", -3.0);
    const double x1_max = cfg.number("x1_max", 5.0);
    const double x2_min = cfg.number("x2_min", -4.0);
    const double x2_max = cfg.number("x2_max", 4.0);
    cfg.finish();
    if (grid_nx < 2 || grid_ny < 2 || !(x1_max > x1_min) || !(x2_max > x2_min))
        throw user_error("fig2: bad grid");

    const std::size_t k = detail::resolve_k(k_cfg, n, alpha, 2, k_const);
    const GeneratorSpec spec{Fig2Gaussians{n, flip_prob, separation}, seed};
    Generated gen = generate(spec);
    auto ds = std::make_shared<const LabeledDataset>(std::move(gen.data));
    const WinnEstimator winn(build_index(ds), k, scheme);

    const double dx = (x1_max - x1_min) / static_cast<double>(grid_nx);
    const double dy = (x2_max - x2_min) / static_cast<double>(grid_ny);
    // A cell holding a training sample is evaluated at that sample (lowest
    // index when several share a cell), so interpolated labels are visible in
    // the rendered regions even when an island is smaller than the cell.
    std::vector<std::size_t> cell_sample(grid_nx * grid_ny,
                                         std::numeric_limits<std::size_t>::max());
    for (std::size_t i = ds->size(); i-- > 0;) {
        const double sx = ds->point(i)[0], sy = ds->point(i)[1];
        if (sx < x1_min || sy < x2_min) continue;
        const auto ix = static_cast<std::size_t>((sx - x1_min) / dx);
        const auto iy = static_cast<std::size_t>((sy - x2_min) / dy);
        if (ix < grid_nx && iy < grid_ny) cell_sample[iy * grid_nx + ix] = i;
    }
    std::vector<std::vector<double>> grid_rows;
    grid_rows.reserve(grid_nx * grid_ny);
    for (std::size_t iy = 0; iy < grid_ny; ++iy) {
        const double x2 = x2_min + (static_cast<double>(iy) + 0.5) * dy;
        for (std::size_t ix = 0; ix < grid_nx; ++ix) {
            const double x1 = x1_min + (static_cast<double>(ix) + 0.5) * dx;
            const std::size_t sample = cell_sample[iy * grid_nx + ix];
            int label;
            if (sample != std::numeric_limits<std::size_t>::max()) {
                label = winn.classify(ds->point(sample));
            } else {
                const double query[2] = {x1, x2};
                label = winn.classify(query);
            }
            grid_rows.push_back({x1, x2, static_cast<double>(label)});
        }
    }
    std::vector<std::vector<double>> sample_rows;
    for (std::size_t i = 0; i < ds->size(); ++i)
        sample_rows.push_back({ds->point(i)[0], ds->point(i)[1],
                               static_cast<double>(gen.info.true_label[i]), ds->label(i),
                               gen.info.flipped[i] ? 1.0 : 0.0});

    std::filesystem::create_directories(out_dir);
    io::write_table(out_dir / "fig2_grid.csv", {"x1", "x2", "label"}, grid_rows);
    io::write_table(out_dir / "fig2_samples.csv", {"x1", "x2", "y_true", "y", "flipped"},
                    sample_rows);

    ordered_json config;
    config["command"] = "fig2";
    config["n"] = n;
    config["k"] = k;
    config["weights"] = detail::scheme_to_json(scheme);
    config["alpha"] = alpha;
    config["k_const"] = k_const;
    config["flip_prob"] = flip_prob;
    config["separation"] = separation;
    config["seed"] = seed;
    config["grid_nx"] = grid_nx;
    config["grid_ny"] = grid_ny;
    config["x1_min"] = x1_min;
    config["x1_max"] = x1_max;
    config["x2_min"] = x2_min;
    config["x2_max"] = x2_max;
    ordered_json results;
    results["files"] = {"fig2_grid.csv", "fig2_samples.csv"};
    results["bayes_boundary_x1"] = 0.5 * separation;
    results["bayes_risk"] = *gen.truth.bayes_risk;
    std::size_t flipped_count = 0;
    for (bool f : gen.info.flipped) flipped_count += f ? 1 : 0;
    results["flipped_samples"] = flipped_count;
    const ordered_json out = detail::wrap_output(std::move(config), std::move(results));
    io::write_json(out_dir / "fig2.json", out);
    return out;
}

/// Excess-risk sweep over sample sizes with a fitted log-log rate.
inline ordered_json cmd_rates(const ordered_json& raw_config,
                              const std::filesystem::path& out_dir, int threads = 0) {
    ConfigView cfg(raw_config, "rates");
    const std::string estimator = cfg.text("estimator", "winn");
    const WeightScheme scheme = cfg.weights("weights", WeightScheme::logarithmic());
    const auto k_cfg = cfg.k_or_auto("k", std::nullopt);
    const double alpha = cfg.number("alpha", 1.0);
    const double k_const = cfg.number("k_const", 1.0);
    const std::string target = cfg.text("target", "linear");
    const int dim = static_cast<int>(cfg.integer("dim", 1));
    const double noise_sd = cfg.number("noise_sd", 1.0);
    const auto n_grid = cfg.size_list("n_grid", {100, 316, 1000, 3162, 10000});
    const auto n_test = static_cast<std::size_t>(cfg.integer("n_test", 2000));
    const int replicates = static_cast<int>(cfg.integer("replicates", 50));
    const std::uint64_t seed = cfg.seed("seed", 1);
    cfg.finish();
    if (estimator != "winn" && estimator != "knn")
        throw user_error("rates: estimator must be 'winn' or 'knn'");

    std::vector<std::size_t> resolved_k;
    for (std::size_t n : n_grid)
        resolved_k.push_back(detail::resolve_k(k_cfg, n, alpha, dim, k_const));

    const GeneratorSpec base{HolderRegression{2, dim, alpha, noise_sd, target}, seed};
    RiskReport report;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::size_t k = resolved_k[gi];
        PredictorBuilder builder;
        if (estimator == "winn") {
            builder = [k, scheme](std::shared_ptr<const LabeledDataset> ds) -> Predictor {
                auto est = std::make_shared<WinnEstimator>(build_index(std::move(ds)), k, scheme);
                return [est](std::span<const double> x) { return est->predict(x); };
            };
        } else {
            builder = [k](std::shared_ptr<const LabeledDataset> ds) -> Predictor {
                auto est = std::make_shared<KnnEstimator>(build_index(std::move(ds)), k);
                return [est](std::span<const double> x) { return est->predict(x); };
            };
        }
        const GeneratorSpec sized = with_n(base, n_grid[gi]);
        const MeanStdError res =
            excess_risk_regression(builder, sized, n_test, replicates, threads);
        report.points.push_back({n_grid[gi], res.mean, res.std_error, replicates});
    }
    const auto [slope, ci] = fit_rate(report.points);
    report.fitted_rate = slope;
    report.rate_ci = ci;

    std::filesystem::create_directories(out_dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t gi = 0; gi < report.points.size(); ++gi) {
        const auto& p = report.points[gi];
        rows.push_back({static_cast<double>(p.n), p.mean_excess_risk, p.std_error,
                        static_cast<double>(p.replicates), static_cast<double>(resolved_k[gi])});
    }
    io::write_table(out_dir / "rates.csv",
                    {"n", "mean_excess_risk", "std_error", "replicates", "k"}, rows);

    ordered_json config;
    config["command"] = "rates";
    config["estimator"] = estimator;
    config["weights"] = detail::scheme_to_json(scheme);
    config["k"] = k_cfg ? ordered_json(*k_cfg) : ordered_json("auto");
    config["alpha"] = alpha;
    config["k_const"] = k_const;
    config["target"] = target;
    config["dim"] = dim;
    config["noise_sd"] = noise_sd;
    config["n_grid"] = n_grid;
    config["n_test"] = n_test;
    config["replicates"] = replicates;
    config["seed"] = seed;
    ordered_json results;
    ordered_json points = ordered_json::array();
    for (std::size_t gi = 0; gi < report.points.size(); ++gi) {
        const auto& p = report.points[gi];
        ordered_json rec;
        rec["n"] = p.n;
        rec["k"] = resolved_k[gi];
        rec["mean_excess_risk"] = p.mean_excess_risk;
        rec["std_error"] = p.std_error;
        rec["replicates"] = p.replicates;
        points.push_back(std::move(rec));
    }
    results["points"] = std::move(points);
    results["fitted_rate"] = report.fitted_rate;
    results["rate_ci"] = report.rate_ci;
    const ordered_json out = detail::wrap_output(std::move(config), std::move(results));
    io::write_json(out_dir / "rates.json", out);
    return out;
}

/// Generalization error of nested-feature least squares around and beyond
/// the interpolation threshold.
inline ordered_json cmd_descent(const ordered_json& raw_config,
                                const std::filesystem::path& out_dir, int threads = 0) {
    ConfigView cfg(raw_config, "descent");
    DescentSpec spec;
    spec.m = static_cast<std::size_t>(cfg.integer("m", 20));
    spec.latent_dim = static_cast<std::size_t>(cfg.integer("latent_dim", 100));
    spec.p_grid = cfg.size_list("p_grid", spec.p_grid);
    spec.noise_sd = cfg.number("noise_sd", 0.5);
    spec.signal_norm = cfg.number("signal_norm", 1.0);
    spec.replicates = static_cast<int>(cfg.integer("replicates", 200));
    spec.seed = cfg.seed("seed", 1);
    cfg.finish();
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw user_error(std::string("descent: ") + e.what());
    }

    const DescentCurve curve = run_descent(spec, threads);

    std::filesystem::create_directories(out_dir);
    std::vector<std::vector<double>> rows;
    for (const auto& p : curve.points)
        rows.push_back({static_cast<double>(p.p), p.mean_ge, p.std_error,
                        p.min_singular_value});
    io::write_table(out_dir / "descent.csv",
                    {"p", "mean_ge", "std_error", "min_singular_value"}, rows);

    ordered_json config;
    config["command"] = "descent";
    config["m"] = spec.m;
    config["latent_dim"] = spec.latent_dim;
    config["p_grid"] = spec.p_grid;
    config["noise_sd"] = spec.noise_sd;
    config["signal_norm"] = spec.signal_norm;
    config["replicates"] = spec.replicates;
    config["seed"] = spec.seed;
    ordered_json results;
    ordered_json points = ordered_json::array();
    for (const auto& p : curve.points) {
        ordered_json rec;
        rec["p"] = p.p;
        rec["mean_ge"] = p.mean_ge;
        rec["std_error"] = p.std_error;
        rec["min_singular_value"] = p.min_singular_value;
        rec["max_rel_residual"] = p.max_rel_residual;
        points.push_back(std::move(rec));
    }
    results["points"] = std::move(points);
    const ordered_json out = detail::wrap_output(std::move(config), std::move(results));
    io::write_json(out_dir / "descent.json", out);
    return out;
}

/// Misclassification islands around mislabeled two-Gaussian samples.
inline ordered_json cmd_islands(const ordered_json& raw_config,
                                const std::filesystem::path& out_dir, int threads = 0) {
    ConfigView cfg(raw_config, "islands");
    const auto n_grid = cfg.size_list("n_grid", {100, 10000});
    const double flip_prob = cfg.number("flip_prob", 0.05);
    const double separation = cfg.number("separation", 2.0);
    const auto k_cfg = cfg.k_or_auto("k", std::nullopt);
    const WeightScheme scheme = cfg.weights("weights", WeightScheme::logarithmic());
    const double alpha = cfg.number("alpha", 1.0);
    const double k_const = cfg.number("k_const", 1.0);
    const double max_radius = cfg.number("max_radius", 2.0);
    const int replicates = static_cast<int>(cfg.integer("replicates", 20));
    const std::uint64_t seed = cfg.seed("seed", 1);
    cfg.finish();

    ordered_json per_n = ordered_json::array();
    for (std::size_t n : n_grid) {
        const std::size_t k = detail::resolve_k(k_cfg, n, alpha, 2, k_const);
        const GeneratorSpec spec{Fig2Gaussians{n, flip_prob, separation}, seed};
        const IslandStats stats =
            island_experiment(spec, k, scheme, max_radius, replicates, threads);
        ordered_json rec;
        rec["n"] = n;
        rec["k"] = k;
        rec["mislabeled_points"] = stats.mislabeled_points;
        rec["measured_islands"] = stats.measured_islands;
        rec["oversized_islands"] = stats.oversized_islands;
        rec["interpolation_misses"] = stats.interpolation_misses;
        if (!stats.radii.empty()) {
            rec["median_radius"] = stats.median_radius;
            rec["min_radius"] = *std::min_element(stats.radii.begin(), stats.radii.end());
            rec["max_radius"] = *std::max_element(stats.radii.begin(), stats.radii.end());
        }
        per_n.push_back(std::move(rec));
    }

    ordered_json config;
    config["command"] = "islands";
    config["n_grid"] = n_grid;
    config["flip_prob"] = flip_prob;
    config["separation"] = separation;
    config["k"] = k_cfg ? ordered_json(*k_cfg) : ordered_json("auto");
    config["weights"] = detail::scheme_to_json(scheme);
    config["alpha"] = alpha;
    config["k_const"] = k_const;
    config["max_radius"] = max_radius;
    config["replicates"] = replicates;
    config["seed"] = seed;
    ordered_json results;
    results["per_n"] = std::move(per_n);
    const ordered_json out = detail::wrap_output(std::move(config), std::move(results));
    std::filesystem::create_directories(out_dir);
    io::write_json(out_dir / "islands.json", out);
    return out;
}

/// Fit-and-predict over CSV files.
struct PredictOptions {
    std::filesystem::path train_csv;
    std::filesystem::path query_csv;
    std::string estimator = "winn";
    std::string k = "auto";  // or integer text
    std::string weights = "log";
    double alpha = 1.0;
    double k_const = 1.0;
    double shepard_power = 2.0;
    double hilbert_exponent = 0.0;  // 0 = default (d)
};

inline ordered_json cmd_predict(const PredictOptions& opt,
                                const std::filesystem::path& out_dir) {
    const LabeledDataset loaded = io::read_dataset(opt.train_csv);
    auto ds = std::make_shared<const LabeledDataset>(loaded);
    const auto [qdim, queries] = io::read_queries(opt.query_csv);
    if (qdim != ds->dim())
        throw user_error("query dimension " + std::to_string(qdim) +
                         " does not match training dimension " + std::to_string(ds->dim()));

    std::optional<std::int64_t> k_cfg;
    if (opt.k != "auto") {
        try {
            k_cfg = std::stoll(opt.k);
        } catch (const std::exception&) {
            throw user_error("predict: --k must be 'auto' or an integer");
        }
    }
    WeightScheme scheme = WeightScheme::logarithmic();
    if (opt.weights != "log" && opt.weights != "logarithmic") {
        try {
            scheme = WeightScheme::power(std::stod(opt.weights));
        } catch (const std::exception&) {
            throw user_error("predict: --weights must be 'log' or a positive delta");
        }
    }

    Predictor predict;
    try {
        if (opt.estimator == "winn") {
            const std::size_t k =
                detail::resolve_k(k_cfg, ds->size(), opt.alpha, ds->dim(), opt.k_const);
            auto est = std::make_shared<WinnEstimator>(build_index(ds), k, scheme);
            predict = [est](std::span<const double> x) { return est->predict(x); };
        } else if (opt.estimator == "knn") {
            const std::size_t k =
                detail::resolve_k(k_cfg, ds->size(), opt.alpha, ds->dim(), opt.k_const);
            auto est = std::make_shared<KnnEstimator>(build_index(ds), k);
            predict = [est](std::span<const double> x) { return est->predict(x); };
        } else if (opt.estimator == "1nn") {
            predict = [ds](std::span<const double> x) { return one_nn_predict(*ds, x); };
        } else if (opt.estimator == "hilbert") {
            auto est = std::make_shared<HilbertEstimator>(
                ds, opt.hilbert_exponent > 0.0 ? std::optional<double>(opt.hilbert_exponent)
                                               : std::nullopt);
            predict = [est](std::span<const double> x) { return est->predict(x); };
        } else if (opt.estimator == "shepard") {
            auto est = std::make_shared<ShepardEstimator>(ds, opt.shepard_power);
            predict = [est](std::span<const double> x) { return est->predict(x); };
        } else if (opt.estimator == "simplex") {
            auto est = std::make_shared<SimplexEstimator>(simplex_build(ds));
            predict = [est](std::span<const double> x) { return est->predict(x); };
        } else if (opt.estimator == "lagrange") {
            auto est = std::make_shared<LagrangeEstimator>(lagrange_from_dataset(*ds));
            predict = [est](std::span<const double> x) { return est->predict(x[0]); };
        } else {
            throw user_error("predict: unknown estimator '" + opt.estimator + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw user_error(std::string("predict: ") + e.what());
    }

    std::vector<std::string> header;
    for (int c = 1; c <= ds->dim(); ++c) header.push_back("x" + std::to_string(c));
    header.push_back("yhat");
    std::vector<std::vector<double>> rows;
    for (const auto& q : queries) {
        std::vector<double> row = q;
        row.push_back(predict(q));
        rows.push_back(std::move(row));
    }
    std::filesystem::create_directories(out_dir);
    io::write_table(out_dir / "predictions.csv", header, rows);

    ordered_json summary;
    summary["predictions"] = rows.size();
    summary["out"] = (out_dir / "predictions.csv").string();
    return summary;
}

}  // namespace sci::cli
