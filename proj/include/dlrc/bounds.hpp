#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dlrc/readout.hpp"
#include "dlrc/reservoir.hpp"
#include "dlrc/series.hpp"

namespace dlrc {

/// Ingredients of the input->output growth constant.
struct BoundParams {
    double lipschitz = 1.0;   // L
    double alpha = 0.5;
    double beta = 0.5;
    int delay_length = 1;     // N
    int input_length = 1;     // M after padding
    double weight_norm = 1.0; // |w|
};

/// The growth constant only exists under the contraction condition
/// alpha * L < 1/sqrt(2), strictly: at equality its geometric series
/// diverges.
inline bool contraction_valid(double alpha, double lipschitz) {
    return alpha * lipschitz < 1.0 / std::numbers::sqrt2;
}

/// The constant C with ||y_u - y_v||^2 <= C ||u - v||^2 over t = 1..M:
///   C = |w|^2 M (L beta)^2 (N+1) (1 + 2 / (1 - 2 alpha^2 L^2)).
inline double theoretical_constant(const BoundParams& p) {
    if (p.lipschitz <= 0.0 || p.alpha <= 0.0 || p.beta <= 0.0)
        throw std::invalid_argument("theoretical_constant: gains and L must be positive");
    if (p.delay_length < 0 || p.input_length < 1)
        throw std::invalid_argument("theoretical_constant: bad dimensions");
    if (p.weight_norm < 0.0)
        throw std::invalid_argument("theoretical_constant: negative weight norm");
    if (!contraction_valid(p.alpha, p.lipschitz))
        throw std::domain_error("alpha*L >= 1/sqrt(2): bound undefined");

    const double al2 = p.alpha * p.alpha * p.lipschitz * p.lipschitz;
    const double geometric = 1.0 + 2.0 / (1.0 - 2.0 * al2);
    const double lb = p.lipschitz * p.beta;
    return p.weight_norm * p.weight_norm * p.input_length * lb * lb * (p.delay_length + 1) *
           geometric;
}

/// ||y_u - y_v||^2 / ||u - v||^2 with outputs taken over t = 1..M. The two
/// series are zero-padded to a common length first.
inline double empirical_ratio(const ReservoirConfig& config, const ReadoutWeights& w,
                              const InputSeries& u, const InputSeries& v) {
    InputBatch padded = pad_inputs(InputBatch{{u, v}, 0});
    const InputSeries& pu = padded.inputs[0];
    const InputSeries& pv = padded.inputs[1];
    const double input_gap = (pu.values() - pv.values()).squaredNorm();
    if (input_gap == 0.0) throw std::invalid_argument("zero denominator");

    const Eigen::VectorXd yu = output(run(config, pu), w);
    const Eigen::VectorXd yv = output(run(config, pv), w);
    return (yu - yv).squaredNorm() / input_gap;
}

struct BoundReport {
    double theoretical_c = 0.0;
    double max_empirical_ratio = 0.0;
    double mean_empirical_ratio = 0.0;
    int num_pairs = 0;
    int violations = 0;
    double slack = 0.0;  // theoretical_c - max_empirical_ratio
};

using InputPair = std::pair<InputSeries, InputSeries>;

/// Evaluates the ratio on every pair and counts violations of the bound,
/// with a 1e-9 relative tolerance on the comparison. All series are padded
/// to the longest length found, which is also the M used in the constant.
inline BoundReport bound_check(const ReservoirConfig& config, const ReadoutWeights& w,
                               const std::vector<InputPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("bound_check: no pairs");

    int max_len = 1;
    for (const auto& [u, v] : pairs) max_len = std::max({max_len, u.length(), v.length()});

    BoundReport report;
    report.theoretical_c = theoretical_constant({config.nonlinearity().lipschitz_constant(),
                                                 config.alpha(), config.beta(),
                                                 config.delay_length(), max_len, w.norm()});

    double sum = 0.0;
    for (const auto& [u, v] : pairs) {
        const double ratio = empirical_ratio(config, w, pad_to(u, max_len), pad_to(v, max_len));
        report.max_empirical_ratio = std::max(report.max_empirical_ratio, ratio);
        sum += ratio;
        if (ratio > report.theoretical_c * (1.0 + 1e-9)) ++report.violations;
    }
    report.num_pairs = static_cast<int>(pairs.size());
    report.mean_empirical_ratio = sum / report.num_pairs;
    report.slack = report.theoretical_c - report.max_empirical_ratio;
    return report;
}

/// Distribution of the instantaneous quotients |y_u(t)-y_v(t)| / |u(t)-v(t)|
/// over all pairs and all time steps where the denominator is at least
/// epsilon. Purely descriptive: no uniform constant is claimed.
struct PointwiseRatioStats {
    double max = 0.0;
    double mean = 0.0;
    double p99 = 0.0;  // 99th percentile, nearest-rank
    long admissible_steps = 0;
};

inline PointwiseRatioStats pointwise_ratio_probe(const ReservoirConfig& config,
                                                 const ReadoutWeights& w,
                                                 const std::vector<InputPair>& pairs,
                                                 double epsilon = 1e-6) {
    if (epsilon <= 0.0) throw std::invalid_argument("pointwise_ratio_probe: epsilon must be positive");

    std::vector<double> ratios;
    for (const auto& [u, v] : pairs) {
        InputBatch padded = pad_inputs(InputBatch{{u, v}, 0});
        const InputSeries& pu = padded.inputs[0];
        const InputSeries& pv = padded.inputs[1];
        const Eigen::VectorXd yu = output(run(config, pu), w);
        const Eigen::VectorXd yv = output(run(config, pv), w);
        for (int t = 1; t <= padded.padded_length; ++t) {
            const double gap = std::abs(pu(t) - pv(t));
            if (gap >= epsilon) ratios.push_back(std::abs(yu(t - 1) - yv(t - 1)) / gap);
        }
    }
    if (ratios.empty()) throw std::runtime_error("no admissible time steps");

    PointwiseRatioStats stats;
    stats.admissible_steps = static_cast<long>(ratios.size());
    double sum = 0.0;
    for (const double r : ratios) {
        stats.max = std::max(stats.max, r);
        sum += r;
    }
    stats.mean = sum / static_cast<double>(ratios.size());
    std::sort(ratios.begin(), ratios.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(0.99 * static_cast<double>(ratios.size())));
    stats.p99 = ratios[std::max<std::size_t>(rank, 1) - 1];
    return stats;
}

}  // namespace dlrc
