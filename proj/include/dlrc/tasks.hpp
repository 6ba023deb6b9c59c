#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dlrc/dantzig.hpp"
#include "dlrc/random.hpp"
#include "dlrc/readout.hpp"
#include "dlrc/reservoir.hpp"
#include "dlrc/separation.hpp"
#include "dlrc/series.hpp"

namespace dlrc {

/// NARMA generator parameters. The order-10 recurrence is
///   y(t+1) = 0.3 y(t) + 0.05 y(t) sum_{i=0..9} y(t-i) + 1.5 u(t-9) u(t) + 0.1
/// with u(t) iid uniform on [input_min, input_max] and zero initial history;
/// other orders only change the window length.
struct NarmaSpec {
    int order = 10;
    int length = 0;  // T
    std::uint64_t seed = 0;
    double input_min = 0.0;
    double input_max = 0.5;
};

struct NarmaData {
    InputSeries input;      // u(1..T)
    TargetSeries target;    // y(1..T); the first `order` values are zero
};

inline NarmaData narma_generate(const NarmaSpec& spec) {
    if (spec.order < 1) throw std::invalid_argument("narma_generate: order must be >= 1");
    if (spec.length <= spec.order)
        throw std::invalid_argument("narma_generate: length must exceed the order");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> dist(spec.input_min, spec.input_max);
    const int T = spec.length;
    const int n = spec.order;

    Eigen::VectorXd u(T);
    for (int i = 0; i < T; ++i) u(i) = dist(rng);

    // y indexed 1..T with y(t) = 0 for t <= n; u(t) = 0 for t < 1.
    Eigen::VectorXd y = Eigen::VectorXd::Zero(T);
    auto u_at = [&](int t) { return t >= 1 ? u(t - 1) : 0.0; };
    auto y_at = [&](int t) { return t >= 1 ? y(t - 1) : 0.0; };
    for (int t = n - 1; t + 1 <= T; ++t) {
        double window = 0.0;
        for (int i = 0; i < n; ++i) window += y_at(t - i);
        const double next =
            0.3 * y_at(t) + 0.05 * y_at(t) * window + 1.5 * u_at(t - n + 1) * u_at(t) + 0.1;
        if (!std::isfinite(next) || std::abs(next) > 1e6)
            throw std::runtime_error("NARMA diverged; reseed");
        y(t + 1 - 1) = next;
    }

    return {InputSeries(std::move(u)), std::move(y)};
}

/// Labeled synthetic classification data: per class, samples_per_class
/// copies of the class template with iid uniform noise in
/// [-noise_amplitude, noise_amplitude] added entrywise.
struct SyntheticClassSpec {
    std::vector<InputSeries> templates;  // one per class, equal lengths
    std::vector<std::string> labels;     // optional; defaults to class0, class1, ...
    double noise_amplitude = 0.0;
    int samples_per_class = 1;
    std::uint64_t seed = 0;
};

struct LabeledBatch {
    std::vector<InputSeries> inputs;
    std::vector<std::string> labels;  // one per input
    int padded_length = 0;
};

inline LabeledBatch synth_classes(const SyntheticClassSpec& spec) {
    if (spec.templates.empty()) throw std::invalid_argument("synth_classes: no templates");
    if (spec.samples_per_class < 1)
        throw std::invalid_argument("synth_classes: samples_per_class must be >= 1");
    const int len = spec.templates.front().length();
    for (const auto& t : spec.templates)
        if (t.length() != len) throw std::invalid_argument("synth_classes: templates must have equal lengths");
    if (!spec.labels.empty() && spec.labels.size() != spec.templates.size())
        throw std::invalid_argument("synth_classes: one label per template required");
    if (spec.noise_amplitude < 0.0)
        throw std::invalid_argument("synth_classes: negative noise amplitude");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> noise(-spec.noise_amplitude, spec.noise_amplitude);

    LabeledBatch batch;
    batch.padded_length = len;
    for (std::size_t c = 0; c < spec.templates.size(); ++c) {
        const std::string label =
            spec.labels.empty() ? "class" + std::to_string(c) : spec.labels[c];
        for (int s = 0; s < spec.samples_per_class; ++s) {
            Eigen::VectorXd v = spec.templates[c].values();
            if (spec.noise_amplitude > 0.0)
                for (int i = 0; i < v.size(); ++i) v(i) += noise(rng);
            batch.inputs.emplace_back(std::move(v));
            batch.labels.push_back(label);
        }
    }
    return batch;
}

/// Readout training choices shared by the benchmark harness and the CLI.
struct TrainSpec {
    enum class Method { LeastSquares, Ridge, Dantzig };
    Method method = Method::Ridge;
    double hyper = 1e-6;  // lambda for ridge, delta for the Dantzig selector
    int washout = 0;
    double train_fraction = 0.8;
};

inline ReadoutWeights train_readout(const DesignMatrix& design, const TargetSeries& target,
                                    const TrainSpec& spec) {
    switch (spec.method) {
        case TrainSpec::Method::LeastSquares: return train_least_squares(design, target);
        case TrainSpec::Method::Ridge: return train_ridge(design, target, spec.hyper);
        case TrainSpec::Method::Dantzig: return train_dantzig(design, target, spec.hyper);
    }
    throw std::invalid_argument("train_readout: unknown method");
}

struct RegressionReport {
    double nrmse_train = 0.0;
    double nrmse_test = 0.0;
    double weight_norm = 0.0;
    int train_steps = 0;
    int test_steps = 0;
};

/// Regression harness: simulate, drop the washout, split the retained steps
/// into a leading train block and trailing test block, train, score.
inline RegressionReport run_regression(const ReservoirConfig& config, const InputSeries& input,
                                       const TargetSeries& target, const TrainSpec& train) {
    if (target.size() != input.length())
        throw std::invalid_argument("run_regression: input and target lengths differ");
    const StateTrajectory traj = run(config, input);
    if (train.washout >= traj.duration())
        throw std::invalid_argument("run_regression: washout must be smaller than the duration");

    const DesignMatrix design = build_design({traj}, train.washout);
    const TargetSeries retained = target.tail(design.column_count());

    const int total = design.column_count();
    const int train_count = std::max(1, static_cast<int>(total * train.train_fraction));
    const int test_count = total - train_count;
    if (test_count < 2)
        throw std::invalid_argument("run_regression: too few steps left for a test split");

    const DesignMatrix train_design(design.matrix().leftCols(train_count), train.washout);
    const DesignMatrix test_design(design.matrix().rightCols(test_count), train.washout);
    const TargetSeries train_target = retained.head(train_count);
    const TargetSeries test_target = retained.tail(test_count);

    const ReadoutWeights w = train_readout(train_design, train_target, train);

    RegressionReport report;
    report.nrmse_train =
        nrmse(train_design.matrix().transpose() * w.vector(), train_target);
    report.nrmse_test = nrmse(test_design.matrix().transpose() * w.vector(), test_target);
    report.weight_norm = w.norm();
    report.train_steps = train_count;
    report.test_steps = test_count;
    return report;
}

/// End-to-end NARMA benchmark.
inline RegressionReport run_benchmark(const ReservoirConfig& config, const NarmaSpec& task,
                                      const TrainSpec& train) {
    const NarmaData data = narma_generate(task);
    return run_regression(config, data.input, data.target, train);
}

struct ClassificationReport {
    double accuracy_train = 0.0;
    double accuracy_test = 0.0;
    int train_samples = 0;
    int test_samples = 0;
    double weight_norm = 0.0;
    SeparationReport separation;
};

/// Classification harness: the readout is trained to emit each sample's
/// class index, samples are scored by their time-averaged readout output,
/// and prediction picks the nearest class mean of the training scores.
inline ClassificationReport run_benchmark(const ReservoirConfig& config,
                                          const SyntheticClassSpec& task,
                                          const TrainSpec& train) {
    const LabeledBatch batch = synth_classes(task);

    std::vector<std::string> class_labels;
    for (const auto& label : batch.labels)
        if (std::find(class_labels.begin(), class_labels.end(), label) == class_labels.end())
            class_labels.push_back(label);

    std::vector<StateTrajectory> trajectories;
    trajectories.reserve(batch.inputs.size());
    for (const auto& u : batch.inputs) trajectories.push_back(run(config, u));
    if (train.washout >= trajectories.front().duration())
        throw std::invalid_argument("run_benchmark: washout must be smaller than the duration");

    // Per-class split: leading samples train, the rest test.
    std::vector<int> train_idx, test_idx;
    for (const auto& label : class_labels) {
        std::vector<int> members;
        for (std::size_t i = 0; i < batch.labels.size(); ++i)
            if (batch.labels[i] == label) members.push_back(static_cast<int>(i));
        const int count = std::max(1, static_cast<int>(members.size() * train.train_fraction));
        for (std::size_t k = 0; k < members.size(); ++k)
            (static_cast<int>(k) < count ? train_idx : test_idx).push_back(members[k]);
    }

    std::vector<StateTrajectory> train_trajs;
    Eigen::VectorXd train_target;
    {
        std::vector<double> targets;
        for (const int i : train_idx) {
            train_trajs.push_back(trajectories[i]);
            const auto cls = std::find(class_labels.begin(), class_labels.end(), batch.labels[i]) -
                             class_labels.begin();
            const int kept = trajectories[i].duration() - train.washout;
            for (int k = 0; k < kept; ++k) targets.push_back(static_cast<double>(cls));
        }
        train_target = Eigen::Map<const Eigen::VectorXd>(targets.data(),
                                                         static_cast<Eigen::Index>(targets.size()));
    }
    const DesignMatrix design = build_design(train_trajs, train.washout);
    const ReadoutWeights w = train_readout(design, train_target, train);

    auto score = [&](const StateTrajectory& traj) {
        const Eigen::VectorXd y = output(traj, w);
        return y.tail(traj.duration() - train.washout).mean();
    };

    // Class means of the training scores define the decision rule.
    Eigen::VectorXd class_means = Eigen::VectorXd::Zero(static_cast<int>(class_labels.size()));
    Eigen::VectorXd class_counts = Eigen::VectorXd::Zero(static_cast<int>(class_labels.size()));
    for (const int i : train_idx) {
        const auto cls = std::find(class_labels.begin(), class_labels.end(), batch.labels[i]) -
                         class_labels.begin();
        class_means(static_cast<int>(cls)) += score(trajectories[i]);
        class_counts(static_cast<int>(cls)) += 1.0;
    }
    class_means.array() /= class_counts.array();

    auto accuracy = [&](const std::vector<int>& idx) {
        if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
        int correct = 0;
        for (const int i : idx) {
            const double s = score(trajectories[i]);
            int best = 0;
            for (int c = 1; c < class_means.size(); ++c)
                if (std::abs(s - class_means(c)) < std::abs(s - class_means(best))) best = c;
            if (class_labels[static_cast<std::size_t>(best)] == batch.labels[i]) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(idx.size());
    };

    ClassificationReport report;
    report.accuracy_train = accuracy(train_idx);
    report.accuracy_test = accuracy(test_idx);
    report.train_samples = static_cast<int>(train_idx.size());
    report.test_samples = static_cast<int>(test_idx.size());
    report.weight_norm = w.norm();
    report.separation = separation_over_time(config, batch.inputs, batch.labels);
    return report;
}

}  // namespace dlrc
