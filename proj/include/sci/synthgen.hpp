#pragma once

// Seeded synthetic data: the 1D noisy-line regression setup, the
// two-Gaussian classification setup with optional label flips, and a small
// catalog of Holder-smooth regression targets for rate experiments.
// Generation is a pure function of (spec, seed); replicate streams derive
// from seed XOR replicate index.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sci/core.hpp"
#include "sci/rng.hpp"

namespace sci {

/// y_i = x_i + nu_i with x ~ U[0,1] and nu ~ N(0,1); eta(x) = x.
struct Fig1Regression {
    std::size_t n = 50;
};

/// Two isotropic unit-variance Gaussians at (separation, 0) and (0, 0),
/// balanced classes, each label flipped independently with flip_prob.
struct Fig2Gaussians {
    std::size_t n = 50;
    double flip_prob = 0.0;
    double separation = 2.0;
};

/// x ~ U[0,1]^d, y = eta(x) + N(0, noise_sd^2) with eta from the target
/// catalog: "linear", "kink", "sqrt" (Holder-1/2), "sine".
struct HolderRegression {
    std::size_t n = 100;
    int dim = 1;
    double alpha = 1.0;
    double noise_sd = 1.0;
    std::string target_id = "linear";
};

struct GeneratorSpec {
    std::variant<Fig1Regression, Fig2Gaussians, HolderRegression> variant;
    std::uint64_t seed = 0;
};

/// What the estimators are measured against.
struct GroundTruth {
    std::function<double(std::span<const double>)> eta;
    std::function<int(std::span<const double>)> bayes_label;  // classification only
    std::optional<double> bayes_risk;
};

/// Per-sample classification metadata (empty for regression variants).
struct SampleInfo {
    std::vector<int> true_label;
    std::vector<bool> flipped;
};

struct Generated {
    LabeledDataset data;
    GroundTruth truth;
    SampleInfo info;
};

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Bayes risk of the two-Gaussian family with symmetric label flips: the
/// optimal rule still thresholds at the midline, errs with probability
/// Phi(-separation/2) on clean labels, and every flip swaps hit and miss:
/// risk = flip + (1 - 2*flip) * Phi(-separation/2).
inline double bayes_risk_two_gaussians(double separation, double flip_prob) {
    if (!(separation > 0.0))
        throw std::invalid_argument("bayes_risk_two_gaussians: separation must be > 0");
    if (flip_prob < 0.0 || flip_prob >= 0.5)
        throw std::invalid_argument("bayes_risk_two_gaussians: flip_prob must be in [0, 1/2)");
    const double clean_error = normal_cdf(-0.5 * separation);
    return flip_prob + (1.0 - 2.0 * flip_prob) * clean_error;
}

namespace detail {

inline double holder_target(const std::string& id, std::span<const double> x) {
    double u = 0.0;
    for (double v : x) u += v;
    u /= static_cast<double>(x.size());
    if (id == "linear") return u;
    if (id == "kink") return std::abs(u - 0.5);
    if (id == "sqrt") return std::sqrt(std::max(0.0, u));
    if (id == "sine") return 0.5 + 0.5 * std::sin(6.283185307179586 * u);
    throw std::invalid_argument("unknown Holder target: " + id);
}

// Core generators take the stream by reference so callers can keep drawing
// (e.g. test points) from the same replicate stream afterwards.

inline Generated generate_with(Rng& rng, const Fig1Regression& g) {
    if (g.n < 2) throw std::invalid_argument("Fig1Regression: n must be >= 2");
    std::vector<double> xs(g.n), ys(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        xs[i] = rng.uniform01();
        ys[i] = xs[i] + rng.normal();
    }
    GroundTruth truth;
    truth.eta = [](std::span<const double> x) { return x[0]; };
    return {LabeledDataset(1, std::move(xs), std::move(ys)), std::move(truth), {}};
}

inline Generated generate_with(Rng& rng, const Fig2Gaussians& g) {
    if (g.n < 2) throw std::invalid_argument("Fig2Gaussians: n must be >= 2");
    if (g.flip_prob < 0.0 || g.flip_prob >= 0.5)
        throw std::invalid_argument("Fig2Gaussians: flip_prob must be in [0, 1/2)");
    if (!(g.separation > 0.0))
        throw std::invalid_argument("Fig2Gaussians: separation must be > 0");
    std::vector<double> xs(2 * g.n), ys(g.n);
    SampleInfo info;
    info.true_label.resize(g.n);
    info.flipped.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const int cls = rng.uniform01() < 0.5 ? 1 : 0;
        const double cx = cls == 1 ? g.separation : 0.0;
        xs[2 * i] = cx + rng.normal();
        xs[2 * i + 1] = rng.normal();
        const bool flip = rng.uniform01() < g.flip_prob;
        info.true_label[i] = cls;
        info.flipped[i] = flip;
        ys[i] = flip ? 1 - cls : cls;
    }
    const double s = g.separation;
    const double f = g.flip_prob;
    GroundTruth truth;
    truth.eta = [s, f](std::span<const double> x) {
        const double posterior = 1.0 / (1.0 + std::exp(-s * (x[0] - 0.5 * s)));
        return f + (1.0 - 2.0 * f) * posterior;
    };
    truth.bayes_label = [s](std::span<const double> x) { return x[0] >= 0.5 * s ? 1 : 0; };
    truth.bayes_risk = bayes_risk_two_gaussians(s, f);
    return {LabeledDataset(2, std::move(xs), std::move(ys)), std::move(truth), std::move(info)};
}

inline Generated generate_with(Rng& rng, const HolderRegression& g) {
    if (g.n < 2) throw std::invalid_argument("HolderRegression: n must be >= 2");
    if (g.dim < 1) throw std::invalid_argument("HolderRegression: dim must be >= 1");
    if (g.noise_sd < 0.0)
        throw std::invalid_argument("HolderRegression: noise_sd must be >= 0");
    holder_target(g.target_id, std::vector<double>(static_cast<std::size_t>(g.dim), 0.5));
    const auto d = static_cast<std::size_t>(g.dim);
    std::vector<double> xs(g.n * d), ys(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t c = 0; c < d; ++c) xs[i * d + c] = rng.uniform01();
        const std::span<const double> x{xs.data() + i * d, d};
        ys[i] = holder_target(g.target_id, x) + (g.noise_sd > 0.0 ? rng.normal(0.0, g.noise_sd) : 0.0);
    }
    GroundTruth truth;
    truth.eta = [id = g.target_id](std::span<const double> x) { return holder_target(id, x); };
    return {LabeledDataset(g.dim, std::move(xs), std::move(ys)), std::move(truth), {}};
}

inline Generated generate_with(Rng& rng, const GeneratorSpec& spec) {
    return std::visit([&rng](const auto& g) { return generate_with(rng, g); }, spec.variant);
}

// Draw one test point from the training marginal of the spec, plus its
// observed label for classification variants (label < 0 means regression).
inline std::pair<std::vector<double>, int> draw_test_point(Rng& rng,
                                                           const GeneratorSpec& spec) {
    if (const auto* g = std::get_if<Fig1Regression>(&spec.variant)) {
        (void)g;
        return {{rng.uniform01()}, -1};
    }
    if (const auto* g = std::get_if<Fig2Gaussians>(&spec.variant)) {
        const int cls = rng.uniform01() < 0.5 ? 1 : 0;
        const double cx = cls == 1 ? g->separation : 0.0;
        std::vector<double> x = {cx + rng.normal(), rng.normal()};
        const bool flip = rng.uniform01() < g->flip_prob;
        return {std::move(x), flip ? 1 - cls : cls};
    }
    const auto& g = std::get<HolderRegression>(spec.variant);
    std::vector<double> x(static_cast<std::size_t>(g.dim));
    for (auto& v : x) v = rng.uniform01();
    return {std::move(x), -1};
}

}  // namespace detail

/// Generate a dataset with its ground truth; deterministic in (spec, seed).
inline Generated generate(const GeneratorSpec& spec) {
    Rng rng(spec.seed);
    return detail::generate_with(rng, spec);
}

/// Copy of the spec with n (and, for Holder targets, the dimension) rebound.
inline GeneratorSpec with_n(GeneratorSpec spec, std::size_t n) {
    std::visit([n](auto& g) { g.n = n; }, spec.variant);
    return spec;
}

inline std::size_t spec_n(const GeneratorSpec& spec) {
    return std::visit([](const auto& g) { return g.n; }, spec.variant);
}

inline int spec_dim(const GeneratorSpec& spec) {
    if (std::holds_alternative<Fig1Regression>(spec.variant)) return 1;
    if (std::holds_alternative<Fig2Gaussians>(spec.variant)) return 2;
    return std::get<HolderRegression>(spec.variant).dim;
}

}  // namespace sci
