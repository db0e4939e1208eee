#pragma once

// Core domain types shared by every estimator: datasets, weight schemes,
// smoothness parameters, and the handful of scalar formulas built on them.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sci {

/// Thrown when an internal invariant is violated (a bug, not a usage error).
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// Immutable set of (point in R^d, label) pairs with a declared dimension.
/// Points are stored flat, row-major; labels are arbitrary finite reals.
class LabeledDataset {
public:
    LabeledDataset(int dim, std::vector<double> points, std::vector<double> labels)
        : dim_(dim), points_(std::move(points)), labels_(std::move(labels)) {
        if (dim_ < 1) throw std::invalid_argument("LabeledDataset: dim must be >= 1");
        if (labels_.empty()) throw std::invalid_argument("LabeledDataset: need at least one sample");
        if (points_.size() != labels_.size() * static_cast<std::size_t>(dim_))
            throw std::invalid_argument("LabeledDataset: points/labels size mismatch");
        for (double v : points_)
            if (!std::isfinite(v)) throw std::invalid_argument("LabeledDataset: non-finite coordinate");
        binary_ = true;
        for (double y : labels_) {
            if (!std::isfinite(y)) throw std::invalid_argument("LabeledDataset: non-finite label");
            if (y != 0.0 && y != 1.0) binary_ = false;
        }
    }

    /// Convenience builder from one row per point.
    static LabeledDataset from_rows(const std::vector<std::vector<double>>& rows,
                                    std::vector<double> labels) {
        if (rows.empty()) throw std::invalid_argument("LabeledDataset: need at least one sample");
        const int d = static_cast<int>(rows.front().size());
        std::vector<double> flat;
        flat.reserve(rows.size() * static_cast<std::size_t>(d));
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != d)
                throw std::invalid_argument("LabeledDataset: ragged rows");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return LabeledDataset(d, std::move(flat), std::move(labels));
    }

    int dim() const { return dim_; }
    std::size_t size() const { return labels_.size(); }

    std::span<const double> point(std::size_t i) const {
        return {points_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    double label(std::size_t i) const { return labels_[i]; }
    const std::vector<double>& labels() const { return labels_; }
    const std::vector<double>& flat_points() const { return points_; }

    /// True when every label is exactly 0 or 1 (classification view allowed).
    bool binary_labels() const { return binary_; }

private:
    int dim_;
    std::vector<double> points_;
    std::vector<double> labels_;
    bool binary_;
};

/// Singular weight family: power-law with exponent delta, or the logarithmic
/// delta -> 0 limit.
struct WeightScheme {
    enum class Kind { power, logarithmic };

    Kind kind;
    double delta;  // used by Kind::power only

    static WeightScheme power(double delta) {
        if (!(delta > 0.0) || !std::isfinite(delta))
            throw std::invalid_argument("WeightScheme::power: delta must be > 0");
        return {Kind::power, delta};
    }
    static WeightScheme logarithmic() { return {Kind::logarithmic, 0.0}; }
};

/// The statistical guarantee needs delta < d/2; larger delta still constructs
/// (the Hilbert precursor uses delta = d) but deserves a warning.
inline std::optional<std::string> scheme_warning(const WeightScheme& scheme, int dim) {
    if (scheme.kind == WeightScheme::Kind::power && scheme.delta >= 0.5 * dim)
        return "weight exponent delta=" + std::to_string(scheme.delta) +
               " is >= d/2 for d=" + std::to_string(dim) +
               "; the consistency guarantee requires delta < d/2";
    return std::nullopt;
}

/// Smoothness class parameters: Holder exponent alpha in (0,1] and dimension.
struct HolderParams {
    double alpha;
    int dim;

    HolderParams(double alpha_, int dim_) : alpha(alpha_), dim(dim_) {
        if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha))
            throw std::invalid_argument("HolderParams: alpha must be in (0, 1]");
        if (dim < 1) throw std::invalid_argument("HolderParams: dim must be >= 1");
    }
};

/// Euclidean distance. Both points must share a dimension.
inline double distance_sq(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(distance_sq(a, b));
}

/// Weight of the i-th neighbor at distance r_i, normalized by the (k+1)-th
/// neighbor distance r_kplus1. Power: (r_kplus1/r_i)^delta - 1.
/// Logarithmic: ln(r_kplus1/r_i). Zero-distance hits are the caller's job.
inline double weight(const WeightScheme& scheme, double r_i, double r_kplus1) {
    if (!(r_i > 0.0)) throw std::invalid_argument("weight: r_i must be > 0");
    if (r_kplus1 < r_i) throw std::invalid_argument("weight: requires r_i <= r_kplus1");
    const double log_ratio = std::log(r_kplus1) - std::log(r_i);
    if (scheme.kind == WeightScheme::Kind::logarithmic) return log_ratio;
    return std::expm1(scheme.delta * log_ratio);
}

/// Bias/variance-optimal neighbor count, round(c * n^(2a/(2a+d))) clamped to
/// [1, n-1]. The constant c is not pinned by theory; default 1.
inline long optimal_k(long n, const HolderParams& hp, double c = 1.0,
                      std::string* warning = nullptr) {
    if (n < 1) throw std::invalid_argument("optimal_k: n must be >= 1");
    if (n == 1) {
        if (warning) *warning = "optimal_k: n == 1 is degenerate; returning k = 1";
        return 1;
    }
    const double expo = 2.0 * hp.alpha / (2.0 * hp.alpha + hp.dim);
    const double raw = c * std::pow(static_cast<double>(n), expo);
    long k = std::lround(raw);
    if (k < 1) k = 1;
    if (k > n - 1) k = n - 1;
    return k;
}

/// Sample size needed to reach excess risk ~ epsilon: (1/eps)^(1 + d/(2a)).
inline double samples_needed(double epsilon, double alpha, int dim) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("samples_needed: epsilon must be in (0, 1)");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("samples_needed: alpha must be in (0, 1]");
    if (dim < 0) throw std::invalid_argument("samples_needed: dim must be >= 0");
    return std::pow(1.0 / epsilon, 1.0 + dim / (2.0 * alpha));
}

inline double samples_needed(double epsilon, const HolderParams& hp) {
    return samples_needed(epsilon, hp.alpha, hp.dim);
}

}  // namespace sci
