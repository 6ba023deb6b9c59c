// Reference implementations used only to cross-check the library. They are
// deliberately written along different routes than the code under test: the
// trajectory oracle tracks only the nonlinear node through the scalar
// recursion, the metric oracles are plain double loops over std::vector, and
// the l1 oracle enumerates active-constraint intersections instead of
// running a simplex.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace oracles {

/// x_0(t) computed from the scalar spine recursion; every other node is a
/// pure delay of it, x_k(t) = x_0(t-k).
struct ReferenceTrajectory {
    std::vector<double> x0;  // index t = 0..M

    double at(int node, int t) const { return t - node >= 0 ? x0[static_cast<std::size_t>(t - node)] : 0.0; }
};

/// u holds u(0)=0, u(1), ..., u(M). The feedback lag is N+1 for the delayed
/// variant and N for the instantaneous one.
inline ReferenceTrajectory reference_run(int delay_length, double alpha, double beta,
                                         const std::function<double(double)>& f,
                                         const std::vector<double>& u,
                                         bool instantaneous = false) {
    ReferenceTrajectory ref;
    ref.x0.assign(1, 0.0);
    const int lag = instantaneous ? delay_length : delay_length + 1;
    for (int t = 1; t < static_cast<int>(u.size()); ++t) {
        const double fed_back = t - lag >= 0 ? ref.x0[static_cast<std::size_t>(t - lag)] : 0.0;
        ref.x0.push_back(f(alpha * fed_back + beta * u[static_cast<std::size_t>(t)]));
    }
    return ref;
}

inline double naive_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum);
}

inline std::vector<double> naive_mean(const std::vector<std::vector<double>>& members) {
    std::vector<double> mean(members.front().size(), 0.0);
    for (const auto& x : members)
        for (std::size_t i = 0; i < x.size(); ++i) mean[i] += x[i];
    for (auto& v : mean) v /= static_cast<double>(members.size());
    return mean;
}

inline double naive_inter_class(const std::vector<std::vector<std::vector<double>>>& classes) {
    std::vector<std::vector<double>> centers;
    for (const auto& members : classes) centers.push_back(naive_mean(members));
    double sum = 0.0;
    for (const auto& a : centers)
        for (const auto& b : centers) sum += naive_distance(a, b);
    const double n = static_cast<double>(classes.size());
    return sum / (n * n);
}

inline double naive_intra_class(const std::vector<std::vector<std::vector<double>>>& classes) {
    double total = 0.0;
    for (const auto& members : classes) {
        const auto center = naive_mean(members);
        double spread = 0.0;
        for (const auto& x : members) spread += naive_distance(center, x);
        total += spread / static_cast<double>(members.size());
    }
    return total / static_cast<double>(classes.size());
}

/// Minimizes ||b||_1 over { b : ||B b - d||_inf <= delta } by enumerating all
/// intersections of p hyperplanes drawn from the 2p constraint faces and the
/// p coordinate planes. Valid whenever the feasible set is bounded (B
/// invertible), which holds for every oracle instance we build.
inline std::optional<double> l1_min_by_vertex_enumeration(const Eigen::MatrixXd& B,
                                                          const Eigen::VectorXd& d, double delta) {
    const int p = static_cast<int>(B.cols());
    std::vector<Eigen::VectorXd> normals;
    std::vector<double> offsets;
    for (int k = 0; k < p; ++k) {
        normals.push_back(B.row(k).transpose());
        offsets.push_back(d(k) + delta);
        normals.push_back(B.row(k).transpose());
        offsets.push_back(d(k) - delta);
    }
    for (int i = 0; i < p; ++i) {
        normals.push_back(Eigen::VectorXd::Unit(p, i));
        offsets.push_back(0.0);
    }

    const int total = static_cast<int>(normals.size());
    double best = std::numeric_limits<double>::infinity();

    std::vector<int> pick(static_cast<std::size_t>(p));
    std::function<void(int, int)> enumerate = [&](int from, int chosen) {
        if (chosen == p) {
            Eigen::MatrixXd M(p, p);
            Eigen::VectorXd rhs(p);
            for (int i = 0; i < p; ++i) {
                M.row(i) = normals[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])].transpose();
                rhs(i) = offsets[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
            if (!lu.isInvertible()) return;
            const Eigen::VectorXd candidate = lu.solve(rhs);
            if (((B * candidate - d).array().abs() <= delta + 1e-9).all())
                best = std::min(best, candidate.lpNorm<1>());
            return;
        }
        for (int i = from; i <= total - (p - chosen); ++i) {
            pick[static_cast<std::size_t>(chosen)] = i;
            enumerate(i + 1, chosen + 1);
        }
    };
    enumerate(0, 0);

    if (!std::isfinite(best)) return std::nullopt;
    return best;
}

/// Partial sums of the geometric-style series 1 + sum_{k>=1} 2^k q^(2(k-1))
/// with q = alpha * L. Compensated summation keeps the rounding error well
/// below the 1e-10 comparison tolerance even for thousands of terms.
inline double series_partial_sum(double alpha_l, int terms) {
    double sum = 1.0;
    double carry = 0.0;
    double term = 2.0;  // k = 1
    const double ratio = 2.0 * alpha_l * alpha_l;
    for (int k = 1; k <= terms; ++k) {
        const double adjusted = term - carry;
        const double next = sum + adjusted;
        carry = (next - sum) - adjusted;
        sum = next;
        term *= ratio;
    }
    return sum;
}

}  // namespace oracles
