#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <memory>

#include "sci/neighbors.hpp"
#include "sci/rng.hpp"

using namespace sci;

namespace {

LabeledDataset random_dataset(Rng& rng, std::size_t n, int d) {
    std::vector<double> xs(n * static_cast<std::size_t>(d)), ys(n);
    for (auto& v : xs) v = rng.uniform(-5.0, 5.0);
    for (auto& y : ys) y = rng.normal();
    return LabeledDataset(d, std::move(xs), std::move(ys));
}

bool lists_equal(const NeighborList& a, const NeighborList& b) {
    return a.indices == b.indices && a.distances == b.distances;
}

}  // namespace

TEST_CASE("brute-force k-NN on a hand-enumerated instance") {
    const LabeledDataset ds(1, {0.0, 1.0, 2.0}, {0.0, 1.0, 4.0});
    const std::vector<double> q = {0.4};
    const NeighborList nl = knn_brute(ds, q, 2);
    CHECK(nl.indices == std::vector<std::size_t>{0, 1, 2});
    CHECK(nl.distances[0] == Catch::Approx(0.4));
    CHECK(nl.distances[1] == Catch::Approx(0.6));
    CHECK(nl.distances[2] == Catch::Approx(1.6));
}

TEST_CASE("duplicate points tie-break by lower index") {
    std::vector<double> xs = {0.0, 1.0, 2.0, 7.5, 4.0, 5.0, 6.0, 7.5, 8.0};
    std::vector<double> ys(9, 0.0);
    const LabeledDataset ds(1, std::move(xs), std::move(ys));
    const std::vector<double> q = {7.5};
    const NeighborList nl = knn_brute(ds, q, 1);
    CHECK(nl.indices == std::vector<std::size_t>{3, 7});
    CHECK(nl.distances[0] == 0.0);
    CHECK(nl.distances[1] == 0.0);
}

TEST_CASE("k+1 beyond the dataset errors") {
    const LabeledDataset ds(1, {0.0, 1.0}, {0.0, 1.0});
    const std::vector<double> q = {0.5};
    CHECK_THROWS_WITH(knn_brute(ds, q, 2),
                      Catch::Matchers::ContainsSubstring("insufficient samples"));
    const NeighborIndex idx = build_index(ds);
    CHECK_THROWS_AS(knn_query(idx, q, 2), std::invalid_argument);
    CHECK_THROWS_AS(knn_brute(ds, q, 0), std::invalid_argument);
}

TEST_CASE("index construction preserves count and handles one point") {
    Rng rng(5);
    const auto ds = random_dataset(rng, 37, 2);
    CHECK(build_index(ds).size() == 37);

    const LabeledDataset single(1, {3.0}, {1.0});
    const NeighborIndex idx = build_index(single);
    CHECK(idx.size() == 1);
    const std::vector<double> q = {0.0};
    CHECK_THROWS_AS(knn_query(idx, q, 1), std::invalid_argument);
    // nearest() with m = n still works on the degenerate index.
    CHECK(idx.nearest(q, 1).indices == std::vector<std::size_t>{0});
}

TEST_CASE("index equals brute force on the hand instances") {
    const LabeledDataset ds(1, {0.0, 1.0, 2.0}, {0.0, 1.0, 4.0});
    const NeighborIndex idx = build_index(ds);
    const std::vector<double> q = {0.4};
    CHECK(lists_equal(knn_query(idx, q, 2), knn_brute(ds, q, 2)));

    const std::vector<double> at_point = {2.0};
    CHECK(knn_query(idx, at_point, 1).distances[0] == 0.0);

    const std::vector<double> far = {1e6};
    CHECK(lists_equal(knn_query(idx, far, 2), knn_brute(ds, far, 2)));
}

TEST_CASE("index equals brute force on random triples") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const int d = std::vector<int>{1, 2, 3, 5}[static_cast<std::size_t>(trial) % 4];
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 120);
        auto base = random_dataset(rng, n, d);
        // Inject exact duplicates in a third of the trials to exercise ties.
        if (trial % 3 == 0 && n >= 4) {
            std::vector<double> xs(base.flat_points());
            std::vector<double> ys(base.labels());
            for (int dup = 0; dup < 2; ++dup) {
                const auto src = static_cast<std::size_t>(rng.uniform01() * n);
                for (int c = 0; c < d; ++c)
                    xs.push_back(base.point(src)[static_cast<std::size_t>(c)]);
                ys.push_back(rng.normal());
            }
            base = LabeledDataset(d, std::move(xs), std::move(ys));
        }
        const NeighborIndex idx = build_index(base);
        const std::size_t k = 1 + static_cast<std::size_t>(
                                      rng.uniform01() * static_cast<double>(base.size() - 2));
        std::vector<double> q(static_cast<std::size_t>(d));
        for (auto& v : q) v = rng.uniform(-6.0, 6.0);
        CHECK(lists_equal(knn_query(idx, q, k), knn_brute(base, q, k)));
    }
}

TEST_CASE("large uniform dataset matches brute force") {
    Rng rng(1234);
    const auto ds = random_dataset(rng, 10000, 3);
    const NeighborIndex idx = build_index(ds);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> q = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        CHECK(lists_equal(knn_query(idx, q, 20), knn_brute(ds, q, 20)));
    }
}

TEST_CASE("results are a pure function of dataset order, query and k") {
    Rng rng(7);
    const auto ds = random_dataset(rng, 64, 2);
    const NeighborIndex idx1 = build_index(ds);
    const NeighborIndex idx2 = build_index(ds);
    const std::vector<double> q = {0.3, -0.7};
    CHECK(lists_equal(knn_query(idx1, q, 5), knn_query(idx2, q, 5)));
    CHECK(lists_equal(knn_query(idx1, q, 5), knn_query(idx1, q, 5)));
}

TEST_CASE("within returns every point inside the radius") {
    const LabeledDataset ds(1, {0.0, 0.5, 1.0, 1.5}, {0, 0, 0, 0});
    const NeighborIndex idx = build_index(ds);
    const std::vector<double> q = {0.6};
    CHECK(idx.within(q, 0.45) == std::vector<std::size_t>{1, 2});
    CHECK(idx.within(q, 5.0) == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(idx.within(q, 0.01).empty());
}

// Informational only: indexed queries should beat brute force on uniform data.
TEST_CASE("index query is faster than brute force at n = 20000", "[.perf]") {
    Rng rng(3);
    const auto ds = random_dataset(rng, 20000, 3);
    const NeighborIndex idx = build_index(ds);
    std::vector<std::vector<double>> queries;
    for (int i = 0; i < 200; ++i)
        queries.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)});
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& q : queries) (void)knn_query(idx, q, 10);
    const auto t1 = std::chrono::steady_clock::now();
    for (const auto& q : queries) (void)knn_brute(ds, q, 10);
    const auto t2 = std::chrono::steady_clock::now();
    WARN("index: " << std::chrono::duration<double>(t1 - t0).count()
                   << "s brute: " << std::chrono::duration<double>(t2 - t1).count() << "s");
    CHECK(t1 - t0 < t2 - t1);
}
