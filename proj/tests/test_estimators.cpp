#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "sci/estimators.hpp"
#include "sci/lagrange.hpp"
#include "sci/rng.hpp"
#include "sci/simplex.hpp"
#include "sci/synthgen.hpp"

using namespace sci;

namespace {

std::shared_ptr<const LabeledDataset> three_point_line() {
    return std::make_shared<const LabeledDataset>(1, std::vector<double>{0.0, 1.0, 2.0},
                                                  std::vector<double>{0.0, 1.0, 4.0});
}

LabeledDataset random_dataset(Rng& rng, std::size_t n, int d, bool with_duplicates) {
    std::vector<double> xs(n * static_cast<std::size_t>(d)), ys(n);
    for (auto& v : xs) v = rng.uniform(-2.0, 2.0);
    for (auto& y : ys) y = rng.uniform(-1.0, 3.0);
    if (with_duplicates && n >= 4) {
        // Duplicate whole (x, y) pairs so interpolating the shared location
        // still reproduces each copy's label.
        for (std::size_t dup = 0; dup < 2; ++dup) {
            const std::size_t src = dup;
            for (int c = 0; c < d; ++c)
                xs.push_back(xs[src * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)]);
            ys.push_back(ys[src]);
        }
    }
    return LabeledDataset(d, std::move(xs), std::move(ys));
}

}  // namespace

TEST_CASE("winn reproduces the hand-evaluated weighted average") {
    // Neighbors of 0.5 are {0, 1} at r = 0.5 each with r_(3) = 1.5: equal
    // log-weights ln 3, so the prediction is the plain mean 0.5.
    const WinnEstimator winn(build_index(three_point_line()), 2, WeightScheme::logarithmic());
    const std::vector<double> q = {0.5};
    CHECK(winn.predict(q) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("winn interpolates every training point exactly") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        auto ds = std::make_shared<const LabeledDataset>(
            random_dataset(rng, 30, 2, trial % 2 == 0));
        const WinnEstimator winn(build_index(ds), 5,
                                 trial % 2 == 0 ? WeightScheme::logarithmic()
                                                : WeightScheme::power(0.8));
        for (std::size_t i = 0; i < ds->size(); ++i)
            CHECK(winn.predict(ds->point(i)) == ds->label(i));
    }
}

TEST_CASE("winn with k = 1 equals the one-nearest-neighbor rule") {
    Rng rng(22);
    for (const auto& scheme : {WeightScheme::logarithmic(), WeightScheme::power(1.5)}) {
        auto ds = std::make_shared<const LabeledDataset>(random_dataset(rng, 40, 3, false));
        const WinnEstimator winn(build_index(ds), 1, scheme);
        for (int t = 0; t < 50; ++t) {
            std::vector<double> q = {rng.uniform(-3, 3), rng.uniform(-3, 3),
                                     rng.uniform(-3, 3)};
            CHECK(winn.predict(q) == one_nn_predict(*ds, q));
        }
    }
}

TEST_CASE("winn cannot extrapolate: far queries level off") {
    const GeneratorSpec spec{Fig1Regression{50}, 7};
    auto ds = std::make_shared<const LabeledDataset>(generate(spec).data);
    const WinnEstimator winn(build_index(ds), 20, WeightScheme::logarithmic());
    const std::vector<double> far = {-50.0};
    const std::vector<double> farther = {-100.0};
    const double a = winn.predict(far);
    const double b = winn.predict(farther);
    CHECK(std::abs(a - b) < 0.01);
    // and the landing value is a weighted mean of edge labels, not a trend.
    double lo = 1e300, hi = -1e300;
    for (double y : ds->labels()) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    CHECK(a >= lo);
    CHECK(a <= hi);
}

TEST_CASE("winn prediction stays within the neighbor label range") {
    Rng rng(23);
    auto ds = std::make_shared<const LabeledDataset>(random_dataset(rng, 60, 2, false));
    const NeighborIndex index = build_index(ds);
    const WinnEstimator winn(index, 7, WeightScheme::power(2.0));
    for (int t = 0; t < 100; ++t) {
        std::vector<double> q = {rng.uniform(-4, 4), rng.uniform(-4, 4)};
        const NeighborList nl = index.nearest(q, 8);
        double lo = 1e300, hi = -1e300;
        for (std::size_t i = 0; i < 7; ++i) {
            lo = std::min(lo, ds->label(nl.indices[i]));
            hi = std::max(hi, ds->label(nl.indices[i]));
        }
        const double p = winn.predict(q);
        CHECK(p >= lo);
        CHECK(p <= hi);
    }
}

TEST_CASE("winn depends only on the k+1 nearest neighbors") {
    Rng rng(24);
    auto ds = std::make_shared<const LabeledDataset>(random_dataset(rng, 50, 2, false));
    const NeighborIndex index = build_index(ds);
    const std::vector<double> q = {0.1, -0.4};
    const std::size_t k = 6;
    const WinnEstimator winn(index, k, WeightScheme::logarithmic());
    const double before = winn.predict(q);

    const NeighborList nl = index.nearest(q, k + 1);
    std::vector<double> ys(ds->labels());
    for (std::size_t i = 0; i < ds->size(); ++i) {
        if (std::find(nl.indices.begin(), nl.indices.end(), i) == nl.indices.end()) {
            ys[i] += 100.0;  // perturb a point outside the neighbor set
            break;
        }
    }
    auto perturbed =
        std::make_shared<const LabeledDataset>(2, ds->flat_points(), std::move(ys));
    const WinnEstimator winn2(build_index(perturbed), k, WeightScheme::logarithmic());
    CHECK(winn2.predict(q) == before);
}

TEST_CASE("near-singular power weights stay finite") {
    // One neighbor at 1e-10 with delta = 40 would overflow the direct ratio
    // form; the normalized path must return the closest label regardless.
    auto ds = std::make_shared<const LabeledDataset>(
        1, std::vector<double>{0.0, 1.0, 2.0, 3.0}, std::vector<double>{5.0, 1.0, 2.0, 3.0});
    const WinnEstimator winn(build_index(ds), 2, WeightScheme::power(40.0));
    const std::vector<double> q = {1e-10};
    const double p = winn.predict(q);
    CHECK(std::isfinite(p));
    CHECK(p == Catch::Approx(5.0).margin(1e-6));
}

TEST_CASE("winn classify thresholds the regression estimate at one half") {
    const GeneratorSpec spec{Fig2Gaussians{80, 0.1, 2.0}, 3};
    Generated gen = generate(spec);
    auto ds = std::make_shared<const LabeledDataset>(std::move(gen.data));
    const WinnEstimator winn(build_index(ds), 10, WeightScheme::logarithmic());
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> q = {rng.uniform(-3, 5), rng.uniform(-4, 4)};
        CHECK(winn.classify(q) == (winn.predict(q) >= 0.5 ? 1 : 0));
    }
}

TEST_CASE("winn classify returns the training label at mislabeled points") {
    const GeneratorSpec spec{Fig2Gaussians{200, 0.05, 2.0}, 17};
    Generated gen = generate(spec);
    auto ds = std::make_shared<const LabeledDataset>(std::move(gen.data));
    const WinnEstimator winn(build_index(ds), 14, WeightScheme::logarithmic());
    bool saw_flip = false;
    for (std::size_t i = 0; i < ds->size(); ++i) {
        if (!gen.info.flipped[i]) continue;
        saw_flip = true;
        CHECK(winn.classify(ds->point(i)) == static_cast<int>(ds->label(i)));
    }
    CHECK(saw_flip);
}

TEST_CASE("winn classify rejects non-binary labels") {
    const WinnEstimator winn(build_index(three_point_line()), 1,
                             WeightScheme::logarithmic());
    const std::vector<double> q = {0.5};
    CHECK_THROWS_AS(winn.classify(q), std::invalid_argument);
}

TEST_CASE("classify on constant-zero labels is zero everywhere") {
    auto ds = std::make_shared<const LabeledDataset>(
        1, std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, 0.0, 0.0});
    const WinnEstimator winn(build_index(ds), 1, WeightScheme::logarithmic());
    for (double x : {-1.0, 0.2, 0.9, 5.0}) {
        const std::vector<double> q = {x};
        CHECK(winn.classify(q) == 0);
    }
}

TEST_CASE("knn averages the k nearest labels") {
    const KnnEstimator knn(build_index(three_point_line()), 2);
    const std::vector<double> q = {0.5};
    CHECK(knn.predict(q) == Catch::Approx(0.5));

    const KnnEstimator all(build_index(three_point_line()), 3);
    CHECK(all.predict(q) == Catch::Approx((0.0 + 1.0 + 4.0) / 3.0));
}

TEST_CASE("knn with k >= 2 does not interpolate distinct labels") {
    auto ds = std::make_shared<const LabeledDataset>(
        1, std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0});
    const KnnEstimator knn(build_index(ds), 2);
    CHECK(knn.predict(ds->point(0)) == Catch::Approx(0.5));
    CHECK(knn.predict(ds->point(1)) == Catch::Approx(0.5));
    CHECK_THROWS_AS(KnnEstimator(build_index(ds), 3), std::invalid_argument);
}

TEST_CASE("one-nearest-neighbor basics") {
    auto ds = three_point_line();
    CHECK(one_nn_predict(*ds, ds->point(2)) == 4.0);
    const std::vector<double> midpoint = {0.5};  // ties go to the lower index
    CHECK(one_nn_predict(*ds, midpoint) == 0.0);
    CHECK_THROWS_AS(one_nn_predict(*ds, std::vector<double>{0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("hilbert estimator matches the direct formula") {
    auto ds = three_point_line();
    const HilbertEstimator hilbert(ds);
    CHECK(hilbert.exponent() == 1.0);
    const std::vector<double> q = {0.25};
    // Direct evaluation with weights 1/r.
    const double w0 = 1.0 / 0.25, w1 = 1.0 / 0.75, w2 = 1.0 / 1.75;
    const double expected = (0.0 * w0 + 1.0 * w1 + 4.0 * w2) / (w0 + w1 + w2);
    CHECK(hilbert.predict(q) == Catch::Approx(expected).epsilon(1e-12));
    CHECK(hilbert.predict(ds->point(1)) == 1.0);
}

TEST_CASE("hilbert at two equidistant points averages") {
    auto ds = std::make_shared<const LabeledDataset>(
        1, std::vector<double>{-1.0, 1.0}, std::vector<double>{0.0, 4.0});
    const HilbertEstimator hilbert(ds);
    const std::vector<double> q = {0.0};
    CHECK(hilbert.predict(q) == Catch::Approx(2.0));
}

TEST_CASE("shepard equals hilbert when the powers coincide") {
    Rng rng(41);
    auto ds = std::make_shared<const LabeledDataset>(random_dataset(rng, 25, 2, false));
    const HilbertEstimator hilbert(ds);  // exponent d = 2
    const ShepardEstimator shepard(ds, 2.0);
    for (int t = 0; t < 40; ++t) {
        std::vector<double> q = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK(shepard.predict(q) == hilbert.predict(q));
    }
    CHECK(shepard.predict(ds->point(3)) == ds->label(3));
}

TEST_CASE("shepard matches a direct 3-point evaluation") {
    auto ds = three_point_line();
    const ShepardEstimator shepard(ds, 2.0);
    const std::vector<double> q = {0.25};
    const double w0 = std::pow(0.25, -2.0), w1 = std::pow(0.75, -2.0),
                 w2 = std::pow(1.75, -2.0);
    const double expected = (0.0 * w0 + 1.0 * w1 + 4.0 * w2) / (w0 + w1 + w2);
    CHECK(shepard.predict(q) == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("every interpolating estimator reproduces training labels exactly") {
    Rng rng(55);
    int lagrange_checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + trial % 3;
        const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform01() * 40);
        const bool dup = trial % 2 == 0;
        auto ds = std::make_shared<const LabeledDataset>(
            random_dataset(rng, n, d, dup));
        const std::size_t k = std::min<std::size_t>(5, ds->size() - 1);
        const NeighborIndex index = build_index(ds);
        const WinnEstimator winn(index, k, WeightScheme::logarithmic());
        const HilbertEstimator hilbert(ds);
        const ShepardEstimator shepard(ds);
        for (std::size_t i = 0; i < ds->size(); ++i) {
            const auto x = ds->point(i);
            CHECK(winn.predict(x) == ds->label(i));
            CHECK(one_nn_predict(*ds, x) == ds->label(i));
            CHECK(hilbert.predict(x) == ds->label(i));
            CHECK(shepard.predict(x) == ds->label(i));
        }
        if (d <= 2) {
            const SimplexEstimator simplex = simplex_build(ds);
            for (std::size_t i = 0; i < ds->size(); ++i)
                CHECK(simplex.predict(ds->point(i)) == ds->label(i));
        }
        if (d == 1 && !dup && n <= 40) {
            const LagrangeEstimator lagrange = lagrange_from_dataset(*ds);
            for (std::size_t i = 0; i < ds->size(); ++i)
                CHECK(lagrange.predict(ds->point(i)[0]) == ds->label(i));
            ++lagrange_checked;
        }
    }
    CHECK(lagrange_checked > 10);
}
