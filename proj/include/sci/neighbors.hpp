#pragma once

// Exact k-nearest-neighbor search. knn_brute is the reference; NeighborIndex
// is a KD-tree that must return bit-identical results (same distances, same
// lower-index tie rule). Both rank candidates by (squared distance, index) and
// compute distances through the same code path so that ties resolve equally.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "sci/core.hpp"

namespace sci {

/// The k+1 nearest training points, ascending by distance. The extra
/// (k+1)-th entry carries the normalization radius used by singular weights.
struct NeighborList {
    std::vector<std::size_t> indices;
    std::vector<double> distances;

    std::size_t k() const { return indices.size() - 1; }
};

namespace detail {

// (squared distance, index) candidate; pair ordering gives the tie rule.
using Cand = std::pair<double, std::size_t>;

// Bounded worst-on-top heap of the m best candidates seen so far.
class CandidateHeap {
public:
    explicit CandidateHeap(std::size_t m) : m_(m) { heap_.reserve(m); }

    bool full() const { return heap_.size() == m_; }
    const Cand& worst() const { return heap_.front(); }

    void offer(const Cand& c) {
        if (!full()) {
            heap_.push_back(c);
            std::push_heap(heap_.begin(), heap_.end());
        } else if (c < heap_.front()) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.back() = c;
            std::push_heap(heap_.begin(), heap_.end());
        }
    }

    std::vector<Cand> sorted() && {
        std::sort(heap_.begin(), heap_.end());
        return std::move(heap_);
    }

private:
    std::size_t m_;
    std::vector<Cand> heap_;
};

inline NeighborList to_list(std::vector<Cand> sorted) {
    NeighborList out;
    out.indices.reserve(sorted.size());
    out.distances.reserve(sorted.size());
    for (const auto& [d2, i] : sorted) {
        out.indices.push_back(i);
        out.distances.push_back(std::sqrt(d2));
    }
    return out;
}

}  // namespace detail

namespace detail {

struct KdNode {
    int split_dim = -1;          // -1 marks a leaf
    double split_val = 0.0;
    std::size_t left = 0;        // child node ids (internal nodes)
    std::size_t right = 0;
    std::size_t begin = 0;       // range into the permutation array (leaves)
    std::size_t end = 0;
};

class KdTreeImpl {
public:
    static constexpr std::size_t kLeafSize = 16;

    explicit KdTreeImpl(std::shared_ptr<const LabeledDataset> ds) : ds_(std::move(ds)) {
        const std::size_t n = ds_->size();
        perm_.resize(n);
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        nodes_.reserve(2 * (n / kLeafSize + 1));
        root_ = build(0, n);
    }

    const LabeledDataset& dataset() const { return *ds_; }
    std::shared_ptr<const LabeledDataset> dataset_ptr() const { return ds_; }

    // m best candidates by (squared distance, index), m in [1, n].
    std::vector<Cand> nearest(std::span<const double> query, std::size_t m) const {
        CandidateHeap heap(m);
        search(root_, query, heap);
        return std::move(heap).sorted();
    }

    // All points within squared distance radius_sq of the query.
    void within(std::span<const double> query, double radius_sq,
                std::vector<std::size_t>& out) const {
        collect(root_, query, radius_sq, out);
    }

private:
    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t id = nodes_.size();
        nodes_.push_back({});
        if (end - begin <= kLeafSize) {
            nodes_[id].begin = begin;
            nodes_[id].end = end;
            return id;
        }
        // Split on the widest-spread coordinate at the median point.
        const int d = ds_->dim();
        int axis = 0;
        double best_spread = -1.0;
        for (int c = 0; c < d; ++c) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i = begin; i < end; ++i) {
                const double v = ds_->point(perm_[i])[static_cast<std::size_t>(c)];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                axis = c;
            }
        }
        if (best_spread <= 0.0) {
            // All points coincide; no split can separate them.
            nodes_[id].begin = begin;
            nodes_[id].end = end;
            return id;
        }
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin),
                         perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                         perm_.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](std::size_t a, std::size_t b) {
                             const auto ax = static_cast<std::size_t>(axis);
                             return ds_->point(a)[ax] < ds_->point(b)[ax];
                         });
        const double split = ds_->point(perm_[mid])[static_cast<std::size_t>(axis)];
        const std::size_t left = build(begin, mid);
        const std::size_t right = build(mid, end);
        nodes_[id].split_dim = axis;
        nodes_[id].split_val = split;
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void search(std::size_t node_id, std::span<const double> query,
                CandidateHeap& heap) const {
        const KdNode& node = nodes_[node_id];
        if (node.split_dim < 0) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t p = perm_[i];
                heap.offer({distance_sq(query, ds_->point(p)), p});
            }
            return;
        }
        const double diff = query[static_cast<std::size_t>(node.split_dim)] - node.split_val;
        const std::size_t near = diff < 0.0 ? node.left : node.right;
        const std::size_t far = diff < 0.0 ? node.right : node.left;
        search(near, query, heap);
        // A far-side point at exactly the plane distance can still win a tie
        // on index, so only a strictly larger plane distance prunes.
        if (!heap.full() || diff * diff <= heap.worst().first) search(far, query, heap);
    }

    void collect(std::size_t node_id, std::span<const double> query, double radius_sq,
                 std::vector<std::size_t>& out) const {
        const KdNode& node = nodes_[node_id];
        if (node.split_dim < 0) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t p = perm_[i];
                if (distance_sq(query, ds_->point(p)) <= radius_sq) out.push_back(p);
            }
            return;
        }
        const double diff = query[static_cast<std::size_t>(node.split_dim)] - node.split_val;
        const std::size_t near = diff < 0.0 ? node.left : node.right;
        const std::size_t far = diff < 0.0 ? node.right : node.left;
        collect(near, query, radius_sq, out);
        if (diff * diff <= radius_sq) collect(far, query, radius_sq, out);
    }

    std::shared_ptr<const LabeledDataset> ds_;
    std::vector<std::size_t> perm_;
    std::vector<KdNode> nodes_;
    std::size_t root_ = 0;
};

}  // namespace detail

/// Reference k-NN: scans every point. Returns the k+1 nearest.
inline NeighborList knn_brute(const LabeledDataset& ds, std::span<const double> query,
                              std::size_t k) {
    if (query.size() != static_cast<std::size_t>(ds.dim()))
        throw std::invalid_argument("knn_brute: query dimension mismatch");
    if (k < 1 || k + 1 > ds.size())
        throw std::invalid_argument("knn_brute: insufficient samples for k+1 neighbors");
    detail::CandidateHeap heap(k + 1);
    for (std::size_t i = 0; i < ds.size(); ++i)
        heap.offer({distance_sq(query, ds.point(i)), i});
    return detail::to_list(std::move(heap).sorted());
}

/// Immutable KD-tree over a dataset. Queries agree exactly with knn_brute.
class NeighborIndex {
public:
    explicit NeighborIndex(std::shared_ptr<const LabeledDataset> ds)
        : impl_(std::make_shared<detail::KdTreeImpl>(std::move(ds))) {}

    const LabeledDataset& dataset() const { return impl_->dataset(); }
    std::shared_ptr<const LabeledDataset> dataset_ptr() const { return impl_->dataset_ptr(); }
    std::size_t size() const { return impl_->dataset().size(); }

    /// The m nearest points, m in [1, n]; ascending (distance, index).
    NeighborList nearest(std::span<const double> query, std::size_t m) const {
        if (query.size() != static_cast<std::size_t>(dataset().dim()))
            throw std::invalid_argument("knn_query: query dimension mismatch");
        if (m < 1 || m > size())
            throw std::invalid_argument("knn_query: insufficient samples for k+1 neighbors");
        return detail::to_list(impl_->nearest(query, m));
    }

    /// Indices of all points within `radius` of the query, ascending.
    std::vector<std::size_t> within(std::span<const double> query, double radius) const {
        std::vector<std::size_t> out;
        impl_->within(query, radius * radius, out);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::shared_ptr<const detail::KdTreeImpl> impl_;
};

inline NeighborIndex build_index(std::shared_ptr<const LabeledDataset> ds) {
    if (!ds) throw std::invalid_argument("build_index: null dataset");
    return NeighborIndex(std::move(ds));
}

inline NeighborIndex build_index(LabeledDataset ds) {
    return NeighborIndex(std::make_shared<const LabeledDataset>(std::move(ds)));
}

/// Indexed k-NN with the knn_brute contract: returns the k+1 nearest.
inline NeighborList knn_query(const NeighborIndex& idx, std::span<const double> query,
                              std::size_t k) {
    if (k < 1 || k + 1 > idx.size())
        throw std::invalid_argument("knn_query: insufficient samples for k+1 neighbors");
    return idx.nearest(query, k + 1);
}

}  // namespace sci
