#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

#include "dlrc/nonlinearity.hpp"
#include "dlrc/series.hpp"

namespace dlrc {

/// Whether the nonlinear node sees the last delay node's value from the
/// previous step (delayed) or from the current step, after the shift
/// (instantaneous). Both are causal: node N only ever holds past values.
enum class Feedback { Delayed, Instantaneous };

/// Parameters of a delay-line reservoir: one nonlinear node followed by a
/// chain of N pure delay nodes, indexed 0..N.
class ReservoirConfig {
public:
    ReservoirConfig(int delay_length, double alpha, double beta, Nonlinearity nonlinearity,
                    Feedback feedback = Feedback::Delayed)
        : delay_length_(delay_length),
          alpha_(alpha),
          beta_(beta),
          nonlinearity_(nonlinearity),
          feedback_(feedback) {
        if (delay_length < 1) throw std::invalid_argument("ReservoirConfig: delay length N must be >= 1");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("ReservoirConfig: alpha must lie in (0,1)");
        if (!(beta > 0.0 && beta < 1.0))
            throw std::invalid_argument("ReservoirConfig: beta must lie in (0,1)");
    }

    int delay_length() const { return delay_length_; }  // N
    int node_count() const { return delay_length_ + 1; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const Nonlinearity& nonlinearity() const { return nonlinearity_; }
    Feedback feedback() const { return feedback_; }

private:
    int delay_length_;
    double alpha_;
    double beta_;
    Nonlinearity nonlinearity_;
    Feedback feedback_;
};

/// Node states over time: entry (k, t) is x_k(t) for k = 0..N, t = 0..M.
class StateTrajectory {
public:
    explicit StateTrajectory(Eigen::MatrixXd states) : states_(std::move(states)) {}

    double at(int node, int t) const { return states_(node, t); }
    Eigen::VectorXd state(int t) const { return states_.col(t); }

    int node_count() const { return static_cast<int>(states_.rows()); }
    /// Number of simulated steps M; columns run t = 0..M.
    int duration() const { return static_cast<int>(states_.cols()) - 1; }

    const Eigen::MatrixXd& matrix() const { return states_; }

private:
    Eigen::MatrixXd states_;
};

/// Advances the reservoir one step from the states at t-1 to those at t.
///
/// Delayed:        x_0(t) = f(alpha * x_N(t-1) + beta * u(t))
/// Instantaneous:  x_0(t) = f(alpha * x_N(t)   + beta * u(t)), where x_N(t)
///                 is the freshly shifted value x_{N-1}(t-1).
/// Either way x_{k+1}(t) = x_k(t-1).
inline Eigen::VectorXd step(const Eigen::VectorXd& prev, double u_t, const ReservoirConfig& config) {
    const int n = config.node_count();
    if (prev.size() != n) throw std::invalid_argument("step: state vector has wrong length");

    Eigen::VectorXd next(n);
    next.tail(n - 1) = prev.head(n - 1);
    const double fed_back =
        config.feedback() == Feedback::Delayed ? prev(n - 1) : next(n - 1);
    next(0) = config.nonlinearity()(config.alpha() * fed_back + config.beta() * u_t);
    return next;
}

/// Runs the reservoir from the all-zero state over t = 1..length(u).
inline StateTrajectory run(const ReservoirConfig& config, const InputSeries& u) {
    const int m = u.length();
    Eigen::MatrixXd states = Eigen::MatrixXd::Zero(config.node_count(), m + 1);
    for (int t = 1; t <= m; ++t) states.col(t) = step(states.col(t - 1), u(t), config);
    return StateTrajectory(std::move(states));
}

}  // namespace dlrc
