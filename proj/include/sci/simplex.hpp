#pragma once

// Piecewise-linear interpolation over a simplicial complex of the training
// points: a sorted segment partition in 1D, a Delaunay triangulation built by
// incremental Bowyer-Watson insertion in 2D. Inside the complex, predictions
// are barycentric; outside the convex hull they take the nearest vertex value.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "sci/core.hpp"

namespace sci {

namespace detail {

struct Vec2 {
    double x, y;
};

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Sign of the in-circumcircle determinant for triangle (a,b,c) (oriented
// counterclockwise) against point p: positive means strictly inside.
inline double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
    const double ax = a.x - p.x, ay = a.y - p.y;
    const double bx = b.x - p.x, by = b.y - p.y;
    const double cx = c.x - p.x, cy = c.y - p.y;
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

}  // namespace detail

/// Piecewise-linear interpolator for d in {1, 2}. Build with simplex_build.
class SimplexEstimator {
public:
    int dim() const { return dim_; }

    /// Triangles as index triples into the deduplicated vertex set (d=2).
    const std::vector<std::array<std::size_t, 3>>& triangles() const { return triangles_; }
    std::size_t vertex_count() const { return labels_.size(); }
    std::span<const double> vertex(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    double vertex_label(std::size_t i) const { return labels_[i]; }

    double predict(std::span<const double> query) const {
        if (query.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("simplex_predict: query dimension mismatch");
        return dim_ == 1 ? predict_1d(query[0]) : predict_2d({query[0], query[1]});
    }

private:
    friend SimplexEstimator simplex_build(std::shared_ptr<const LabeledDataset>);

    double predict_1d(double x) const {
        // coords_ sorted ascending; clamp outside the covered interval.
        const auto& xs = coords_;
        if (x <= xs.front()) return labels_.front();
        if (x >= xs.back()) return labels_.back();
        const auto it = std::lower_bound(xs.begin(), xs.end(), x);
        const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
        if (xs[hi] == x) return labels_[hi];
        const std::size_t lo = hi - 1;
        const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
        return labels_[lo] + t * (labels_[hi] - labels_[lo]);
    }

    double predict_2d(detail::Vec2 q) const {
        constexpr double kBaryTol = 1e-12;
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            const detail::Vec2 v = vec(i);
            if (v.x == q.x && v.y == q.y) return labels_[i];
        }
        for (const auto& tri : triangles_) {
            const detail::Vec2 a = vec(tri[0]), b = vec(tri[1]), c = vec(tri[2]);
            const double area = detail::cross(a, b, c);
            const double la = detail::cross(q, b, c) / area;
            const double lb = detail::cross(a, q, c) / area;
            const double lc = detail::cross(a, b, q) / area;
            if (la >= -kBaryTol && lb >= -kBaryTol && lc >= -kBaryTol)
                return la * labels_[tri[0]] + lb * labels_[tri[1]] + lc * labels_[tri[2]];
        }
        // Outside the convex hull: nearest vertex, lower index on ties.
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            const detail::Vec2 v = vec(i);
            const double d2 = (v.x - q.x) * (v.x - q.x) + (v.y - q.y) * (v.y - q.y);
            if (d2 < best) {
                best = d2;
                best_i = i;
            }
        }
        return labels_[best_i];
    }

    detail::Vec2 vec(std::size_t i) const { return {coords_[2 * i], coords_[2 * i + 1]}; }

    int dim_ = 1;
    std::vector<double> coords_;  // d=1: sorted xs; d=2: interleaved xy
    std::vector<double> labels_;
    std::vector<std::array<std::size_t, 3>> triangles_;  // d=2 only
};

namespace detail {

// Bowyer-Watson over normalized coordinates (Delaunay is invariant under the
// similarity transform, so triangle indices transfer back unchanged).
inline std::vector<std::array<std::size_t, 3>> bowyer_watson(const std::vector<Vec2>& pts) {
    const std::size_t n = pts.size();
    std::vector<Vec2> v(pts);
    constexpr double kSuper = 1e4;
    v.push_back({-kSuper, -kSuper});
    v.push_back({kSuper, -kSuper});
    v.push_back({0.0, kSuper});

    struct Tri {
        std::array<std::size_t, 3> ids;
        bool alive = true;
    };
    std::vector<Tri> tris;
    tris.push_back({{n, n + 1, n + 2}, true});

    using Edge = std::pair<std::size_t, std::size_t>;
    std::map<Edge, int> edge_count;
    std::vector<std::size_t> bad;

    for (std::size_t p = 0; p < n; ++p) {
        bad.clear();
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (!tris[t].alive) continue;
            const auto& id = tris[t].ids;
            if (incircle(v[id[0]], v[id[1]], v[id[2]], v[p]) > 0.0) bad.push_back(t);
        }
        edge_count.clear();
        for (std::size_t t : bad) {
            const auto& id = tris[t].ids;
            for (int e = 0; e < 3; ++e) {
                std::size_t u = id[static_cast<std::size_t>(e)];
                std::size_t w = id[static_cast<std::size_t>((e + 1) % 3)];
                if (u > w) std::swap(u, w);
                ++edge_count[{u, w}];
            }
            tris[t].alive = false;
        }
        // Edges seen once bound the star-shaped cavity; fan from p.
        for (const auto& [edge, count] : edge_count) {
            if (count != 1) continue;
            std::array<std::size_t, 3> ids = {edge.first, edge.second, p};
            if (cross(v[ids[0]], v[ids[1]], v[ids[2]]) < 0.0) std::swap(ids[0], ids[1]);
            tris.push_back({ids, true});
        }
    }

    std::vector<std::array<std::size_t, 3>> out;
    for (const auto& t : tris) {
        if (!t.alive) continue;
        if (t.ids[0] >= n || t.ids[1] >= n || t.ids[2] >= n) continue;
        out.push_back(t.ids);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// True when no input point lies strictly inside any triangle's circumcircle
/// (determinant tolerance relative to the coordinate scale).
inline bool delaunay_valid(const std::vector<detail::Vec2>& pts,
                           const std::vector<std::array<std::size_t, 3>>& tris,
                           double tol = 1e-9) {
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    const double det_tol = tol * std::max(1.0, scale * scale * scale * scale);
    for (const auto& t : tris) {
        detail::Vec2 a = pts[t[0]], b = pts[t[1]], c = pts[t[2]];
        if (detail::cross(a, b, c) < 0.0) std::swap(b, c);
        for (std::size_t p = 0; p < pts.size(); ++p) {
            if (p == t[0] || p == t[1] || p == t[2]) continue;
            if (detail::incircle(a, b, c, pts[p]) > det_tol) return false;
        }
    }
    return true;
}

/// Build the piecewise-linear interpolator. d=1 sorts the nodes; d=2 runs
/// Bowyer-Watson and verifies the empty-circumcircle property afterwards.
/// Exactly coincident points are merged with their labels averaged.
inline SimplexEstimator simplex_build(std::shared_ptr<const LabeledDataset> ds) {
    if (!ds) throw std::invalid_argument("simplex_build: null dataset");
    const int d = ds->dim();
    if (d != 1 && d != 2)
        throw std::invalid_argument("simplex_build: only d in {1,2} supported");

    SimplexEstimator est;
    est.dim_ = d;

    if (d == 1) {
        std::vector<std::size_t> order(ds->size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return ds->point(a)[0] < ds->point(b)[0];
        });
        for (std::size_t i = 0; i < order.size();) {
            const double x = ds->point(order[i])[0];
            double sum = 0.0;
            std::size_t j = i;
            for (; j < order.size() && ds->point(order[j])[0] == x; ++j)
                sum += ds->label(order[j]);
            est.coords_.push_back(x);
            est.labels_.push_back(sum / static_cast<double>(j - i));
            i = j;
        }
        return est;
    }

    // Deduplicate exactly coincident points, averaging labels.
    std::map<std::pair<double, double>, std::vector<std::size_t>> groups;
    std::vector<detail::Vec2> pts;
    for (std::size_t i = 0; i < ds->size(); ++i) {
        const auto p = ds->point(i);
        groups[{p[0], p[1]}].push_back(i);
    }
    for (const auto& [key, members] : groups) {
        double sum = 0.0;
        for (std::size_t m : members) sum += ds->label(m);
        pts.push_back({key.first, key.second});
        est.coords_.push_back(key.first);
        est.coords_.push_back(key.second);
        est.labels_.push_back(sum / static_cast<double>(members.size()));
    }

    if (pts.size() < 3)
        throw std::invalid_argument("simplex_build: d=2 needs >= 3 distinct points");
    const double base = std::hypot(pts[1].x - pts[0].x, pts[1].y - pts[0].y);
    bool collinear = true;
    for (std::size_t i = 2; i < pts.size() && collinear; ++i) {
        const double arm = std::hypot(pts[i].x - pts[0].x, pts[i].y - pts[0].y);
        if (std::abs(detail::cross(pts[0], pts[1], pts[i])) > 1e-12 * base * arm)
            collinear = false;
    }
    if (collinear)
        throw std::invalid_argument("simplex_build: d=2 input points are collinear");

    // Normalize to a unit box for predictable predicate scales.
    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const auto& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double extent = std::max(xmax - xmin, ymax - ymin);
    std::vector<detail::Vec2> norm(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        norm[i] = {(pts[i].x - xmin) / extent, (pts[i].y - ymin) / extent};

    est.triangles_ = detail::bowyer_watson(norm);
    if (est.triangles_.empty())
        throw internal_error("simplex_build: triangulation produced no triangles");
    if (!delaunay_valid(norm, est.triangles_))
        throw internal_error("simplex_build: empty-circumcircle verification failed");
    return est;
}

inline SimplexEstimator simplex_build(LabeledDataset ds) {
    return simplex_build(std::make_shared<const LabeledDataset>(std::move(ds)));
}

inline double simplex_predict(const SimplexEstimator& est, std::span<const double> query) {
    return est.predict(query);
}

}  // namespace sci
