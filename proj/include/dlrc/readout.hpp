#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dlrc/reservoir.hpp"

namespace dlrc {

/// Linear readout coefficients w_0..w_N with the Euclidean norm cached.
class ReadoutWeights {
public:
    explicit ReadoutWeights(Eigen::VectorXd w) : w_(std::move(w)), norm_(w_.norm()) {}

    static ReadoutWeights zeros(int n) { return ReadoutWeights(Eigen::VectorXd::Zero(n)); }

    /// Random direction on the unit sphere: iid uniform entries normalized
    /// to |w| = 1.
    static ReadoutWeights random_unit(int n, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Eigen::VectorXd w(n);
        do {
            for (int i = 0; i < n; ++i) w(i) = dist(rng);
        } while (w.norm() == 0.0);
        w /= w.norm();
        return ReadoutWeights(std::move(w));
    }

    const Eigen::VectorXd& vector() const { return w_; }
    double norm() const { return norm_; }
    int size() const { return static_cast<int>(w_.size()); }

private:
    Eigen::VectorXd w_;
    double norm_;
};

/// y(t) = sum_k w_k x_k(t) for t = 1..M; entry i of the result is y(i+1).
inline Eigen::VectorXd output(const StateTrajectory& traj, const ReadoutWeights& w) {
    if (w.size() != traj.node_count())
        throw std::invalid_argument("output: weight/state dimension mismatch");
    const int m = traj.duration();
    return traj.matrix().rightCols(m).transpose() * w.vector();
}

/// Reservoir states stored column-per-retained-time-step, the regression
/// features for readout training. Rows are nodes 0..N.
class DesignMatrix {
public:
    DesignMatrix(Eigen::MatrixXd states, int washout)
        : states_(std::move(states)), washout_(washout) {}

    const Eigen::MatrixXd& matrix() const { return states_; }
    int washout() const { return washout_; }
    int node_count() const { return static_cast<int>(states_.rows()); }
    int column_count() const { return static_cast<int>(states_.cols()); }

private:
    Eigen::MatrixXd states_;
    int washout_;
};

using TargetSeries = Eigen::VectorXd;

/// Concatenates the states at times t = washout+1..M of each trajectory,
/// in order.
inline DesignMatrix build_design(const std::vector<StateTrajectory>& trajectories, int washout) {
    if (trajectories.empty()) throw std::invalid_argument("build_design: no trajectories");
    if (washout < 0) throw std::invalid_argument("build_design: negative washout");

    int columns = 0;
    const int nodes = trajectories.front().node_count();
    for (const auto& traj : trajectories) {
        if (traj.node_count() != nodes)
            throw std::invalid_argument("build_design: trajectories disagree on node count");
        if (washout >= traj.duration())
            throw std::invalid_argument("build_design: washout must be smaller than the duration");
        columns += traj.duration() - washout;
    }

    Eigen::MatrixXd X(nodes, columns);
    int at = 0;
    for (const auto& traj : trajectories) {
        const int kept = traj.duration() - washout;
        X.middleCols(at, kept) = traj.matrix().rightCols(kept);
        at += kept;
    }
    return DesignMatrix(std::move(X), washout);
}

/// Minimizes sum_t (w . X(:,t) - target(t))^2 via a complete orthogonal
/// decomposition; when the minimizer is not unique this returns the one of
/// minimum Euclidean norm.
inline ReadoutWeights train_least_squares(const DesignMatrix& design, const TargetSeries& target) {
    if (design.column_count() == 0) throw std::invalid_argument("train_least_squares: empty design matrix");
    if (target.size() != design.column_count())
        throw std::invalid_argument("train_least_squares: target length does not match design columns");
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design.matrix().transpose());
    return ReadoutWeights(cod.solve(target));
}

/// Ridge regression: solves (X X^T + lambda I) w = X target.
inline ReadoutWeights train_ridge(const DesignMatrix& design, const TargetSeries& target,
                                  double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("train_ridge: lambda must be nonnegative");
    if (design.column_count() == 0) throw std::invalid_argument("train_ridge: empty design matrix");
    if (target.size() != design.column_count())
        throw std::invalid_argument("train_ridge: target length does not match design columns");
    const Eigen::MatrixXd& X = design.matrix();
    const int n = design.node_count();
    Eigen::MatrixXd gram = X * X.transpose() + lambda * Eigen::MatrixXd::Identity(n, n);
    return ReadoutWeights(gram.ldlt().solve(X * target));
}

/// Root mean square error normalized by the population variance of the
/// target; predicting the target mean scores exactly 1.
inline double nrmse(const Eigen::VectorXd& y, const Eigen::VectorXd& target) {
    if (y.size() != target.size()) throw std::invalid_argument("nrmse: length mismatch");
    const auto n = target.size();
    if (n < 2) throw std::invalid_argument("nrmse: need at least two samples");
    const double mean = target.mean();
    const double variance = (target.array() - mean).square().sum() / static_cast<double>(n);
    if (variance == 0.0) throw std::invalid_argument("nrmse: zero-variance target");
    const double mse = (y - target).squaredNorm() / static_cast<double>(n);
    return std::sqrt(mse / variance);
}

}  // namespace dlrc
