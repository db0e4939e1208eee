#pragma once

// Random-design linear regression swept over nested feature counts: ordinary
// least squares below the interpolation threshold, the minimum-norm
// interpolator above it, with the generalization error computed in closed
// form as the parameter-error norm (identity design covariance).

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sci/parallel.hpp"
#include "sci/rng.hpp"
#include "sci/stats.hpp"

namespace sci {

struct DescentSpec {
    std::size_t m = 20;            // observations
    std::size_t latent_dim = 100;  // true parameter dimension D (> m)
    std::vector<std::size_t> p_grid = {2, 5, 10, 15, 18, 20, 22, 25, 40, 70, 100};
    double noise_sd = 0.5;
    double signal_norm = 1.0;
    int replicates = 200;
    std::uint64_t seed = 0;
};

struct DescentPoint {
    std::size_t p = 0;
    double mean_ge = 0.0;
    double std_error = 0.0;
    double min_singular_value = 0.0;  // mean over replicates
    double max_rel_residual = 0.0;    // max over replicates of |Y - X b| / |Y|
};

struct DescentCurve {
    std::vector<DescentPoint> points;
};

/// Minimum-Euclidean-norm least-squares solution via SVD, singular values
/// below 1e-10 * sigma_max treated as zero. Coincides with OLS for full
/// column rank p < m; interpolates for full row rank p >= m.
inline Eigen::VectorXd min_norm_lsq(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y) {
    if (X.rows() != Y.size())
        throw std::invalid_argument("min_norm_lsq: X rows must match Y length");
    if (!X.allFinite() || !Y.allFinite())
        throw std::invalid_argument("min_norm_lsq: inputs must be finite");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double cutoff = sigma.size() > 0 ? 1e-10 * sigma(0) : 0.0;
    Eigen::VectorXd inv = sigma;
    for (Eigen::Index i = 0; i < inv.size(); ++i)
        inv(i) = sigma(i) > cutoff ? 1.0 / sigma(i) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * Y;
}

inline void validate(const DescentSpec& spec) {
    if (spec.m < 2) throw std::invalid_argument("DescentSpec: m must be >= 2");
    if (spec.latent_dim <= spec.m)
        throw std::invalid_argument("DescentSpec: latent_dim must exceed m");
    if (spec.p_grid.empty()) throw std::invalid_argument("DescentSpec: empty p_grid");
    for (std::size_t i = 0; i < spec.p_grid.size(); ++i) {
        if (spec.p_grid[i] < 1 || spec.p_grid[i] > spec.latent_dim)
            throw std::invalid_argument("DescentSpec: p_grid must lie in [1, latent_dim]");
        if (i > 0 && spec.p_grid[i] <= spec.p_grid[i - 1])
            throw std::invalid_argument("DescentSpec: p_grid must be strictly increasing");
    }
    if (spec.noise_sd < 0.0) throw std::invalid_argument("DescentSpec: noise_sd must be >= 0");
    if (!(spec.signal_norm > 0.0))
        throw std::invalid_argument("DescentSpec: signal_norm must be > 0");
    if (spec.replicates < 1)
        throw std::invalid_argument("DescentSpec: replicates must be >= 1");
}

/// Per replicate: beta* uniform on the signal_norm sphere in R^D, X with
/// N(0,1) entries, Y = X beta* + noise; for each p fit the first p columns
/// and score GE(p) = |beta_hat(padded) - beta*|^2.
inline DescentCurve run_descent(const DescentSpec& spec, int threads = 0) {
    validate(spec);
    const std::size_t np = spec.p_grid.size();
    const auto R = static_cast<std::size_t>(spec.replicates);
    std::vector<std::vector<double>> ge(np, std::vector<double>(R));
    std::vector<std::vector<double>> sigma_min(np, std::vector<double>(R));
    std::vector<std::vector<double>> rel_residual(np, std::vector<double>(R));

    parallel_for_index(R, threads, [&](std::size_t r) {
        Rng rng = Rng::replicate_stream(spec.seed, r);
        const auto D = static_cast<Eigen::Index>(spec.latent_dim);
        const auto m = static_cast<Eigen::Index>(spec.m);

        Eigen::VectorXd beta_true(D);
        for (Eigen::Index j = 0; j < D; ++j) beta_true(j) = rng.normal();
        beta_true *= spec.signal_norm / beta_true.norm();

        Eigen::MatrixXd X(m, D);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < D; ++j) X(i, j) = rng.normal();

        Eigen::VectorXd Y = X * beta_true;
        for (Eigen::Index i = 0; i < m; ++i) Y(i) += rng.normal(0.0, spec.noise_sd);
        const double y_norm = Y.norm();

        for (std::size_t pi = 0; pi < np; ++pi) {
            const auto p = static_cast<Eigen::Index>(spec.p_grid[pi]);
            const Eigen::MatrixXd Xp = X.leftCols(p);
            const Eigen::VectorXd beta_hat = min_norm_lsq(Xp, Y);
            const double head_err = (beta_hat - beta_true.head(p)).squaredNorm();
            const double tail_err = beta_true.tail(D - p).squaredNorm();
            ge[pi][r] = head_err + tail_err;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xp);
            sigma_min[pi][r] = svd.singularValues().minCoeff();
            rel_residual[pi][r] =
                y_norm > 0.0 ? (Y - Xp * beta_hat).norm() / y_norm : 0.0;
        }
    });

    DescentCurve curve;
    for (std::size_t pi = 0; pi < np; ++pi) {
        const MeanStdError ge_stats = mean_std_error(ge[pi]);
        double sv_sum = 0.0, res_max = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            sv_sum += sigma_min[pi][r];
            res_max = std::max(res_max, rel_residual[pi][r]);
        }
        curve.points.push_back({spec.p_grid[pi], ge_stats.mean, ge_stats.std_error,
                                sv_sum / static_cast<double>(R), res_max});
    }
    return curve;
}

}  // namespace sci
