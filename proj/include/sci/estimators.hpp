#pragma once

// Interpolating estimators: the singularly weighted nearest-neighbor
// regressor (wiNN) with its plug-in classifier, the plain kNN average it
// generalizes, and the inverse-distance precursors (Hilbert kernel,
// Shepard's method). Simplex and Lagrange interpolation live in their own
// headers.
//
// All estimators are immutable after construction and prediction is pure.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sci/core.hpp"
#include "sci/neighbors.hpp"

namespace sci {

/// Two training points closer than this are treated as coincident; a query
/// within it of a training point takes the mean label of the coincident set.
inline constexpr double kCoincidenceTol = 1e-12;

namespace detail {

// Mean label over all training points within kCoincidenceTol of the query.
// `hint` is the neighbor list that triggered the coincidence path; a full
// radius search is only needed when the whole list is coincident.
inline double coincident_mean(const NeighborIndex& idx, std::span<const double> query,
                              const NeighborList& hint) {
    const LabeledDataset& ds = idx.dataset();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < hint.distances.size(); ++i) {
        if (hint.distances[i] <= kCoincidenceTol) {
            sum += ds.label(hint.indices[i]);
            ++count;
        } else {
            return sum / static_cast<double>(count);
        }
    }
    // Every listed neighbor coincides; there may be more beyond the list.
    const auto all = idx.within(query, kCoincidenceTol);
    sum = 0.0;
    for (std::size_t j : all) sum += ds.label(j);
    return sum / static_cast<double>(all.size());
}

inline double coincident_mean(const LabeledDataset& ds, std::span<const double> query) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (distance_sq(query, ds.point(i)) <= kCoincidenceTol * kCoincidenceTol) {
            sum += ds.label(i);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

inline double clamp_to_range(double value, std::span<const double> labels,
                             const std::vector<std::size_t>& indices, std::size_t count) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < count; ++i) {
        lo = std::min(lo, labels[indices[i]]);
        hi = std::max(hi, labels[indices[i]]);
    }
    return std::clamp(value, lo, hi);
}

}  // namespace detail

/// Weighted interpolating nearest neighbors: a Nadaraya-Watson average over
/// the k nearest points whose weights diverge at zero distance, so training
/// points are reproduced exactly.
class WinnEstimator {
public:
    WinnEstimator(NeighborIndex index, std::size_t k, WeightScheme scheme)
        : index_(std::move(index)), k_(k), scheme_(scheme) {
        if (k_ < 1 || k_ + 1 > index_.size())
            throw std::invalid_argument("WinnEstimator: requires 1 <= k <= n-1");
    }

    std::size_t k() const { return k_; }
    const WeightScheme& scheme() const { return scheme_; }
    const NeighborIndex& index() const { return index_; }

    double predict(std::span<const double> query) const {
        const LabeledDataset& ds = index_.dataset();
        const NeighborList nl = index_.nearest(query, k_ + 1);
        if (nl.distances.front() <= kCoincidenceTol)
            return detail::coincident_mean(index_, query, nl);

        const double r_norm = nl.distances[k_];
        const double log_norm = std::log(r_norm);
        double denom = 0.0, numer = 0.0;
        if (scheme_.kind == WeightScheme::Kind::logarithmic) {
            for (std::size_t i = 0; i < k_; ++i) {
                const double w = log_norm - std::log(nl.distances[i]);
                numer += ds.label(nl.indices[i]) * w;
                denom += w;
            }
        } else {
            // Power weights (r_norm/r_i)^delta - 1 can overflow near the
            // singularity; switch to a max-normalized log-space form there.
            double max_exponent = -std::numeric_limits<double>::infinity();
            std::vector<double> exponents(k_);
            for (std::size_t i = 0; i < k_; ++i) {
                exponents[i] = scheme_.delta * (log_norm - std::log(nl.distances[i]));
                max_exponent = std::max(max_exponent, exponents[i]);
            }
            const bool near_singular = nl.distances.front() < 1e-9 * r_norm;
            if (near_singular || max_exponent > 700.0) {
                const double floor_term = std::exp(-max_exponent);
                for (std::size_t i = 0; i < k_; ++i) {
                    const double w = std::exp(exponents[i] - max_exponent) - floor_term;
                    numer += ds.label(nl.indices[i]) * w;
                    denom += w;
                }
            } else {
                for (std::size_t i = 0; i < k_; ++i) {
                    const double w = std::expm1(exponents[i]);
                    numer += ds.label(nl.indices[i]) * w;
                    denom += w;
                }
            }
        }
        if (!(denom > 0.0)) {
            // All k neighbors sit exactly at the normalization radius; every
            // weight vanishes and the weighted average degenerates to a mean.
            double sum = 0.0;
            for (std::size_t i = 0; i < k_; ++i) sum += ds.label(nl.indices[i]);
            return sum / static_cast<double>(k_);
        }
        return detail::clamp_to_range(numer / denom, ds.labels(), nl.indices, k_);
    }

    /// Plug-in classification: threshold the regression estimate at 1/2,
    /// ties to class 1. Training labels must all be 0/1.
    int classify(std::span<const double> query) const {
        if (!index_.dataset().binary_labels())
            throw std::invalid_argument("winn_classify: training labels must be in {0,1}");
        return predict(query) >= 0.5 ? 1 : 0;
    }

private:
    NeighborIndex index_;
    std::size_t k_;
    WeightScheme scheme_;
};

/// Plain k-nearest-neighbor average. Smooths; does not interpolate.
class KnnEstimator {
public:
    KnnEstimator(NeighborIndex index, std::size_t k) : index_(std::move(index)), k_(k) {
        if (k_ < 1 || k_ > index_.size())
            throw std::invalid_argument("KnnEstimator: requires 1 <= k <= n");
    }

    std::size_t k() const { return k_; }

    double predict(std::span<const double> query) const {
        const NeighborList nl = index_.nearest(query, k_);
        const LabeledDataset& ds = index_.dataset();
        double sum = 0.0;
        for (std::size_t i : nl.indices) sum += ds.label(i);
        return sum / static_cast<double>(k_);
    }

private:
    NeighborIndex index_;
    std::size_t k_;
};

/// Label of the single nearest point, lower index winning ties.
inline double one_nn_predict(const LabeledDataset& ds, std::span<const double> query) {
    if (query.size() != static_cast<std::size_t>(ds.dim()))
        throw std::invalid_argument("one_nn_predict: query dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double d2 = distance_sq(query, ds.point(i));
        if (d2 < best) {
            best = d2;
            best_i = i;
        }
    }
    return ds.label(best_i);
}

namespace detail {

// Shared inverse-distance core: sum_i y_i r_i^(-p) / sum_i r_i^(-p) over all
// points, evaluated max-normalized in log space so small radii cannot
// overflow. Queries coincident with a training point take the mean label of
// the coincident set.
inline double inverse_distance_predict(const LabeledDataset& ds,
                                       std::span<const double> query, double power) {
    if (query.size() != static_cast<std::size_t>(ds.dim()))
        throw std::invalid_argument("predict: query dimension mismatch");
    const std::size_t n = ds.size();
    std::vector<double> exponents(n);
    double max_exponent = -std::numeric_limits<double>::infinity();
    bool coincident = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double d2 = distance_sq(query, ds.point(i));
        if (d2 <= kCoincidenceTol * kCoincidenceTol) {
            coincident = true;
            break;
        }
        exponents[i] = -0.5 * power * std::log(d2);
        max_exponent = std::max(max_exponent, exponents[i]);
    }
    if (coincident) return coincident_mean(ds, query);
    double numer = 0.0, denom = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::exp(exponents[i] - max_exponent);
        numer += ds.label(i) * w;
        denom += w;
        lo = std::min(lo, ds.label(i));
        hi = std::max(hi, ds.label(i));
    }
    return std::clamp(numer / denom, lo, hi);
}

}  // namespace detail

/// Non-adaptive singular-kernel estimator: inverse-distance weights r^(-d)
/// over the whole dataset (k = n). Interpolates for any exponent > 0.
class HilbertEstimator {
public:
    explicit HilbertEstimator(std::shared_ptr<const LabeledDataset> ds,
                              std::optional<double> exponent = std::nullopt)
        : ds_(std::move(ds)) {
        if (!ds_) throw std::invalid_argument("HilbertEstimator: null dataset");
        exponent_ = exponent.value_or(static_cast<double>(ds_->dim()));
        if (!(exponent_ > 0.0))
            throw std::invalid_argument("HilbertEstimator: exponent must be > 0");
    }

    double exponent() const { return exponent_; }

    double predict(std::span<const double> query) const {
        return detail::inverse_distance_predict(*ds_, query, exponent_);
    }

private:
    std::shared_ptr<const LabeledDataset> ds_;
    double exponent_;
};

/// Shepard's inverse-distance-weighting interpolation (classical IDW with a
/// configurable power, default 2).
class ShepardEstimator {
public:
    explicit ShepardEstimator(std::shared_ptr<const LabeledDataset> ds, double power = 2.0)
        : ds_(std::move(ds)), power_(power) {
        if (!ds_) throw std::invalid_argument("ShepardEstimator: null dataset");
        if (!(power_ > 0.0)) throw std::invalid_argument("ShepardEstimator: power must be > 0");
    }

    double power() const { return power_; }

    double predict(std::span<const double> query) const {
        return detail::inverse_distance_predict(*ds_, query, power_);
    }

private:
    std::shared_ptr<const LabeledDataset> ds_;
    double power_;
};

/// Point predictor and binary classifier signatures used by the experiment
/// drivers. Builders produce a fitted function from a training set.
using Predictor = std::function<double(std::span<const double>)>;
using Classifier = std::function<int(std::span<const double>)>;
using PredictorBuilder = std::function<Predictor(std::shared_ptr<const LabeledDataset>)>;
using ClassifierBuilder = std::function<Classifier(std::shared_ptr<const LabeledDataset>)>;

/// Threshold a conditional-mean estimate at 1/2, ties to class 1.
inline Classifier plugin_classifier(Predictor eta_hat) {
    return [f = std::move(eta_hat)](std::span<const double> x) {
        return f(x) >= 0.5 ? 1 : 0;
    };
}

}  // namespace sci
