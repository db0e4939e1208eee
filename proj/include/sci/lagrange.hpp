#pragma once

// Polynomial interpolation through distinct 1D nodes, evaluated in the
// barycentric form. Weights are kept as (sign, log magnitude) so that node
// counts in the hundreds neither overflow nor underflow the products.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "sci/core.hpp"

namespace sci {

class LagrangeEstimator {
public:
    LagrangeEstimator(std::vector<double> nodes, std::vector<double> values)
        : nodes_(std::move(nodes)), values_(std::move(values)) {
        if (nodes_.empty() || nodes_.size() != values_.size())
            throw std::invalid_argument("LagrangeEstimator: nodes/values size mismatch");
        std::vector<double> sorted(nodes_);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("LagrangeEstimator: nodes must be pairwise distinct");

        const std::size_t n = nodes_.size();
        log_weights_.assign(n, 0.0);
        signs_.assign(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            double lw = 0.0, sign = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double diff = nodes_[i] - nodes_[j];
                lw -= std::log(std::abs(diff));
                if (diff < 0.0) sign = -sign;
            }
            log_weights_[i] = lw;
            signs_[i] = sign;
        }
        max_log_weight_ = *std::max_element(log_weights_.begin(), log_weights_.end());
    }

    std::size_t degree() const { return nodes_.size() - 1; }

    double predict(double x) const {
        const std::size_t n = nodes_.size();
        for (std::size_t i = 0; i < n; ++i)
            if (x == nodes_[i]) return values_[i];
        double numer = 0.0, denom = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t =
                signs_[i] * std::exp(log_weights_[i] - max_log_weight_) / (x - nodes_[i]);
            numer += t * values_[i];
            denom += t;
        }
        if (denom == 0.0 || !std::isfinite(numer / denom)) {
            // Far outside the nodes the barycentric sums can cancel to zero;
            // fall back to the nearest node value.
            std::size_t best = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (std::abs(x - nodes_[i]) < std::abs(x - nodes_[best])) best = i;
            return values_[best];
        }
        return numer / denom;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> log_weights_;
    std::vector<double> signs_;
    double max_log_weight_ = 0.0;
};

/// Build from a 1D dataset (nodes must be distinct).
inline LagrangeEstimator lagrange_from_dataset(const LabeledDataset& ds) {
    if (ds.dim() != 1)
        throw std::invalid_argument("lagrange_from_dataset: requires d == 1");
    std::vector<double> nodes(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) nodes[i] = ds.point(i)[0];
    return LagrangeEstimator(std::move(nodes), ds.labels());
}

inline double lagrange_predict(const LagrangeEstimator& est, double x) {
    return est.predict(x);
}

}  // namespace sci
