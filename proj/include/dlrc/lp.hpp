#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace dlrc::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Optimal;
    Eigen::VectorXd x;
    double objective = 0.0;
};

namespace detail {

using Index = Eigen::Index;

constexpr double kPivotTol = 1e-9;

/// Pivots the tableau on (row, col) and records the new basic column.
inline void pivot(Eigen::MatrixXd& T, std::vector<Index>& basis, Index row, Index col) {
    T.row(row) /= T(row, col);
    for (Index i = 0; i < T.rows(); ++i) {
        if (i == row) continue;
        const double factor = T(i, col);
        if (factor != 0.0) T.row(i) -= factor * T.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
}

/// Runs simplex iterations until the objective row has no improving column.
/// Columns with index >= limit are never allowed to enter (used to freeze
/// artificials in phase two). Entering and leaving choices follow Bland's
/// rule, which rules out cycling.
inline bool iterate(Eigen::MatrixXd& T, std::vector<Index>& basis, Index limit) {
    const Index rows = T.rows() - 1;
    const Index rhs = T.cols() - 1;
    const long max_iterations = 10000L + 200L * static_cast<long>(T.rows() + T.cols());

    for (long iteration = 0; iteration < max_iterations; ++iteration) {
        Index entering = -1;
        for (Index j = 0; j < limit; ++j) {
            if (T(rows, j) < -kPivotTol) {
                entering = j;
                break;
            }
        }
        if (entering < 0) return true;  // optimal

        Index leaving = -1;
        double best_ratio = 0.0;
        for (Index i = 0; i < rows; ++i) {
            if (T(i, entering) <= kPivotTol) continue;
            const double ratio = T(i, rhs) / T(i, entering);
            if (leaving < 0 || ratio < best_ratio - kPivotTol ||
                (ratio < best_ratio + kPivotTol &&
                 basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leaving)])) {
                leaving = i;
                best_ratio = ratio;
            }
        }
        if (leaving < 0) return false;  // unbounded direction

        pivot(T, basis, leaving, entering);
    }
    throw std::runtime_error("lp: simplex iteration limit exceeded");
}

}  // namespace detail

/// Minimizes c.x subject to G x <= h and x >= 0 with a dense two-phase
/// tableau simplex. Intended for small problems (tens of variables and
/// constraints).
inline Solution solve(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                      const Eigen::VectorXd& h) {
    using namespace detail;

    const Index m = G.rows();
    const Index n = G.cols();
    if (c.size() != n) throw std::invalid_argument("lp::solve: objective length mismatch");
    if (h.size() != m) throw std::invalid_argument("lp::solve: rhs length mismatch");

    // Equality form: G x + s = h. Rows with negative rhs are negated and get
    // an artificial variable so the starting basis is feasible.
    std::vector<Index> artificial_rows;
    for (Index i = 0; i < m; ++i)
        if (h(i) < 0.0) artificial_rows.push_back(i);
    const Index num_art = static_cast<Index>(artificial_rows.size());

    const Index cols = n + m + num_art + 1;  // structural, slack, artificial, rhs
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, cols);
    std::vector<Index> basis(static_cast<std::size_t>(m));

    for (Index i = 0; i < m; ++i) {
        const double sign = h(i) < 0.0 ? -1.0 : 1.0;
        T.block(i, 0, 1, n) = sign * G.row(i);
        T(i, n + i) = sign;
        T(i, cols - 1) = sign * h(i);
        basis[static_cast<std::size_t>(i)] = n + i;
    }
    for (Index a = 0; a < num_art; ++a) {
        const Index row = artificial_rows[static_cast<std::size_t>(a)];
        T(row, n + m + a) = 1.0;
        basis[static_cast<std::size_t>(row)] = n + m + a;
    }

    // Phase one: drive the artificials to zero.
    if (num_art > 0) {
        for (Index a = 0; a < num_art; ++a) T(m, n + m + a) = 1.0;
        for (const Index row : artificial_rows) T.row(m) -= T.row(row);

        iterate(T, basis, cols - 1);
        if (-T(m, cols - 1) > 1e-7) return {Status::Infeasible, Eigen::VectorXd::Zero(n), 0.0};

        // Any artificial still basic sits at zero; pivot it out, or drop the
        // row when the constraint turned out to be redundant.
        std::vector<Index> drop;
        for (Index i = 0; i < m; ++i) {
            if (basis[static_cast<std::size_t>(i)] < n + m) continue;
            Index col = -1;
            for (Index j = 0; j < n + m; ++j) {
                if (std::abs(T(i, j)) > kPivotTol) {
                    col = j;
                    break;
                }
            }
            if (col >= 0)
                pivot(T, basis, i, col);
            else
                drop.push_back(i);
        }
        if (!drop.empty()) {
            Eigen::MatrixXd kept(T.rows() - static_cast<Index>(drop.size()), T.cols());
            std::vector<Index> kept_basis;
            Index at = 0;
            std::size_t next_drop = 0;
            for (Index i = 0; i < m; ++i) {
                if (next_drop < drop.size() && drop[next_drop] == i) {
                    ++next_drop;
                    continue;
                }
                kept.row(at++) = T.row(i);
                kept_basis.push_back(basis[static_cast<std::size_t>(i)]);
            }
            kept.row(at) = T.row(m);
            T = std::move(kept);
            basis = std::move(kept_basis);
        }
    }

    const Index rows = T.rows() - 1;
    const Index rhs = T.cols() - 1;

    // Phase two: restore the real objective, priced out over the basis.
    T.row(rows).setZero();
    T.block(rows, 0, 1, n) = c.transpose();
    for (Index i = 0; i < rows; ++i) {
        const Index basic = basis[static_cast<std::size_t>(i)];
        if (basic < n && c(basic) != 0.0) T.row(rows) -= c(basic) * T.row(i);
    }

    if (!iterate(T, basis, n + m)) return {Status::Unbounded, Eigen::VectorXd::Zero(n), 0.0};

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < rows; ++i) {
        const Index basic = basis[static_cast<std::size_t>(i)];
        if (basic < n) x(basic) = T(i, rhs);
    }
    return {Status::Optimal, x, c.dot(x)};
}

}  // namespace dlrc::lp
