#include <catch2/catch_amalgamated.hpp>

#include <memory>

#include "sci/rng.hpp"
#include "sci/simplex.hpp"

using namespace sci;

namespace {

std::shared_ptr<const LabeledDataset> make2d(std::vector<std::pair<double, double>> pts,
                                             std::vector<double> ys) {
    std::vector<double> xs;
    for (const auto& [x, y] : pts) {
        xs.push_back(x);
        xs.push_back(y);
    }
    return std::make_shared<const LabeledDataset>(2, std::move(xs), std::move(ys));
}

// Brute-force empty-circumcircle oracle over every (triangle, point) pair.
bool empty_circumcircles(const SimplexEstimator& est) {
    std::vector<detail::Vec2> pts;
    for (std::size_t i = 0; i < est.vertex_count(); ++i)
        pts.push_back({est.vertex(i)[0], est.vertex(i)[1]});
    return delaunay_valid(pts, est.triangles());
}

}  // namespace

TEST_CASE("three non-collinear points give one triangle") {
    const auto est = simplex_build(make2d({{0, 0}, {1, 0}, {0, 1}}, {1, 2, 3}));
    CHECK(est.triangles().size() == 1);
    CHECK(empty_circumcircles(est));
}

TEST_CASE("four points in convex position give two Delaunay triangles") {
    const auto est = simplex_build(make2d({{0, 0}, {2, 0}, {2.2, 1.3}, {0.1, 1.1}},
                                          {0, 1, 2, 3}));
    CHECK(est.triangles().size() == 2);
    CHECK(empty_circumcircles(est));
}

TEST_CASE("unit square corners plus center give four triangles") {
    const auto est = simplex_build(
        make2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}}, {0, 1, 2, 3, 4}));
    CHECK(est.triangles().size() == 4);
    CHECK(empty_circumcircles(est));
}

TEST_CASE("collinear 2D input is rejected") {
    CHECK_THROWS_WITH(simplex_build(make2d({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {0, 1, 2, 3})),
                      Catch::Matchers::ContainsSubstring("collinear"));
    CHECK_THROWS_AS(simplex_build(make2d({{0, 0}, {1, 1}}, {0, 1})), std::invalid_argument);
}

TEST_CASE("d >= 3 is rejected") {
    const LabeledDataset ds(3, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 1, 2, 3});
    CHECK_THROWS_AS(simplex_build(std::make_shared<const LabeledDataset>(ds)),
                    std::invalid_argument);
}

TEST_CASE("barycentric predictions: vertex, centroid, edge midpoint") {
    const auto est = simplex_build(make2d({{0, 0}, {1, 0}, {0, 1}}, {3.0, 5.0, 10.0}));
    const std::vector<double> vertex = {1.0, 0.0};
    CHECK(est.predict(vertex) == 5.0);
    const std::vector<double> centroid = {1.0 / 3.0, 1.0 / 3.0};
    CHECK(est.predict(centroid) == Catch::Approx((3.0 + 5.0 + 10.0) / 3.0).epsilon(1e-12));
    const std::vector<double> edge_mid = {0.5, 0.5};
    CHECK(est.predict(edge_mid) == Catch::Approx((5.0 + 10.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("outside the hull the nearest vertex value is used") {
    const auto est = simplex_build(make2d({{0, 0}, {1, 0}, {0, 1}}, {3.0, 5.0, 10.0}));
    const std::vector<double> beyond = {3.0, 0.0};
    CHECK(est.predict(beyond) == 5.0);
    const std::vector<double> below = {-2.0, -2.0};
    CHECK(est.predict(below) == 3.0);
}

TEST_CASE("1D build sorts, merges duplicates and interpolates linearly") {
    auto ds = std::make_shared<const LabeledDataset>(
        1, std::vector<double>{2.0, 0.0, 1.0, 1.0}, std::vector<double>{4.0, 0.0, 2.0, 2.0});
    const SimplexEstimator est = simplex_build(ds);
    CHECK(est.dim() == 1);
    const std::vector<double> q1 = {0.5};
    CHECK(est.predict(q1) == Catch::Approx(1.0));
    const std::vector<double> q2 = {1.0};
    CHECK(est.predict(q2) == 2.0);
    const std::vector<double> left = {-5.0};
    CHECK(est.predict(left) == 0.0);  // constant beyond the data
    const std::vector<double> right = {9.0};
    CHECK(est.predict(right) == 4.0);
}

TEST_CASE("random 2D triangulations satisfy the empty-circumcircle property") {
    Rng rng(404);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng.uniform01() * 60);
        std::vector<double> xs(2 * n), ys(n);
        for (auto& v : xs) v = rng.uniform(-3.0, 3.0);
        for (auto& y : ys) y = rng.normal();
        const auto est = simplex_build(std::make_shared<const LabeledDataset>(
            2, std::move(xs), std::move(ys)));
        CHECK(empty_circumcircles(est));
        // Interior predictions stay within the global label range.
        for (int t = 0; t < 20; ++t) {
            const std::vector<double> q = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
            const double p = est.predict(q);
            double lo = 1e300, hi = -1e300;
            for (std::size_t i = 0; i < est.vertex_count(); ++i) {
                lo = std::min(lo, est.vertex_label(i));
                hi = std::max(hi, est.vertex_label(i));
            }
            CHECK(p >= lo - 1e-9);
            CHECK(p <= hi + 1e-9);
        }
    }
}

TEST_CASE("triangulation is deterministic in dataset order") {
    Rng rng(17);
    std::vector<double> xs(2 * 30), ys(30);
    for (auto& v : xs) v = rng.uniform(0.0, 1.0);
    for (auto& y : ys) y = rng.normal();
    const LabeledDataset ds(2, xs, ys);
    const auto a = simplex_build(std::make_shared<const LabeledDataset>(ds));
    const auto b = simplex_build(std::make_shared<const LabeledDataset>(ds));
    CHECK(a.triangles() == b.triangles());
}
