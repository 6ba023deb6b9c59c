#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "dlrc/lp.hpp"
#include "dlrc/readout.hpp"

namespace dlrc {

/// Solves  argmin { ||b||_1 : || D^-1 A^T (A b - y) ||_inf <= delta }  where
/// D is diagonal with D(k,k) the l2 norm of column k of A. Rows of A are
/// observations, columns are predictors.
///
/// Reformulated as a linear program by splitting b = bp - bm with bp, bm >= 0
/// and writing the infinity-norm constraint as 2p one-sided rows; solved with
/// the dense simplex in lp.hpp. Readout training keeps p = N+1 at a few
/// dozen predictors.
inline Eigen::VectorXd dantzig_selector(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                        double delta) {
    const int p = static_cast<int>(A.cols());
    if (p == 0) throw std::invalid_argument("dantzig_selector: empty matrix");
    if (A.rows() != y.size())
        throw std::invalid_argument("dantzig_selector: row/target length mismatch");
    if (delta < 0.0) throw std::invalid_argument("dantzig_selector: delta must be nonnegative");

    Eigen::VectorXd inv_col_norms(p);
    for (int k = 0; k < p; ++k) {
        const double norm = A.col(k).norm();
        if (norm == 0.0) throw std::invalid_argument("degenerate column norm");
        inv_col_norms(k) = 1.0 / norm;
    }

    // B = D^-1 A^T A, d = D^-1 A^T y; the constraint is |B b - d| <= delta
    // componentwise.
    const Eigen::MatrixXd B = inv_col_norms.asDiagonal() * (A.transpose() * A);
    const Eigen::VectorXd d = inv_col_norms.asDiagonal() * (A.transpose() * y);

    Eigen::MatrixXd G(2 * p, 2 * p);
    G.topLeftCorner(p, p) = B;
    G.topRightCorner(p, p) = -B;
    G.bottomLeftCorner(p, p) = -B;
    G.bottomRightCorner(p, p) = B;

    Eigen::VectorXd h(2 * p);
    h.head(p) = Eigen::VectorXd::Constant(p, delta) + d;
    h.tail(p) = Eigen::VectorXd::Constant(p, delta) - d;

    const lp::Solution sol = lp::solve(Eigen::VectorXd::Ones(2 * p), G, h);
    if (sol.status == lp::Status::Infeasible)
        throw std::runtime_error("dantzig_selector: constraint set is infeasible");
    if (sol.status == lp::Status::Unbounded)
        throw std::runtime_error("dantzig_selector: unbounded program");  // cannot happen: costs >= 0

    return sol.x.head(p) - sol.x.tail(p);
}

/// Readout training with the Dantzig selector. The regression matrix has one
/// row per retained time step and one predictor per node, i.e. the transpose
/// of the stored design.
inline ReadoutWeights train_dantzig(const DesignMatrix& design, const TargetSeries& target,
                                    double delta) {
    if (target.size() != design.column_count())
        throw std::invalid_argument("train_dantzig: target length does not match design columns");
    return ReadoutWeights(dantzig_selector(design.matrix().transpose(), target, delta));
}

}  // namespace dlrc
