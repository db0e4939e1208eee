#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sci/lagrange.hpp"
#include "sci/rng.hpp"

using namespace sci;

namespace {

// Independent oracle: Newton divided differences with Horner evaluation.
double newton_eval(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const std::size_t n = xs.size();
    std::vector<double> coef(ys);
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = n - 1; i >= level; --i)
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level]);
    double acc = coef[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) acc = acc * (x - xs[i]) + coef[i];
    return acc;
}

double runge(double x) { return 1.0 / (1.0 + 25.0 * x * x); }

}  // namespace

TEST_CASE("two nodes give the straight line") {
    const LagrangeEstimator est({0.0, 1.0}, {0.0, 1.0});
    CHECK(est.predict(0.5) == Catch::Approx(0.5));
    CHECK(est.predict(0.25) == Catch::Approx(0.25));
}

TEST_CASE("exact node hits return node values") {
    const LagrangeEstimator est({-1.0, 0.3, 2.0}, {4.0, -1.0, 7.0});
    CHECK(est.predict(-1.0) == 4.0);
    CHECK(est.predict(0.3) == -1.0);
    CHECK(est.predict(2.0) == 7.0);
}

TEST_CASE("duplicate nodes are rejected") {
    CHECK_THROWS_WITH(LagrangeEstimator({0.0, 1.0, 0.0}, {1.0, 2.0, 3.0}),
                      Catch::Matchers::ContainsSubstring("distinct"));
    CHECK_THROWS_AS(LagrangeEstimator({0.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("barycentric evaluation matches Newton divided differences") {
    Rng rng(61);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform01() * 9);
        std::vector<double> xs, ys;
        double x = rng.uniform(-2.0, -1.0);
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(x);
            ys.push_back(rng.uniform(-2.0, 2.0));
            x += rng.uniform(0.1, 0.7);
        }
        const LagrangeEstimator est(xs, ys);
        for (int t = 0; t < 10; ++t) {
            const double q = rng.uniform(xs.front(), xs.back());
            CHECK(est.predict(q) == Catch::Approx(newton_eval(xs, ys, q)).epsilon(1e-8));
        }
    }
}

TEST_CASE("equispaced interpolation of the Runge function diverges at the edge") {
    std::vector<double> xs, ys;
    for (int i = 0; i < 11; ++i) {
        const double x = -1.0 + 0.2 * i;
        xs.push_back(x);
        ys.push_back(runge(x));
    }
    const LagrangeEstimator est(xs, ys);
    const double pred = est.predict(0.99);
    CHECK(std::abs(pred - runge(0.99)) > 0.5);
    CHECK(est.predict(0.99) == Catch::Approx(newton_eval(xs, ys, 0.99)).epsilon(1e-9));
    // The interpolant is still exact at its own nodes.
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(est.predict(xs[i]) == ys[i]);
}

TEST_CASE("large node counts stay finite through the log-space weights") {
    Rng rng(62);
    std::vector<double> xs, ys;
    double x = 0.0;
    for (int i = 0; i < 400; ++i) {
        xs.push_back(x);
        ys.push_back(rng.normal());
        x += rng.uniform(1e-4, 3e-3);
    }
    const LagrangeEstimator est(xs, ys);
    for (std::size_t i = 0; i < xs.size(); i += 37) CHECK(est.predict(xs[i]) == ys[i]);
    CHECK(std::isfinite(est.predict(0.5 * (xs[10] + xs[11]))));
}
