#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlrc/reservoir.hpp"
#include "dlrc/series.hpp"

namespace dlrc {

/// Instantaneous reservoir states at a fixed time, partitioned into labeled
/// classes. Every member vector holds the N+1 node states of one input.
struct ClassifiedStateSet {
    int time = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<Eigen::VectorXd>> classes;
};

namespace detail {

inline void check_classes(const ClassifiedStateSet& set) {
    if (set.classes.empty()) throw std::invalid_argument("no classes");
    for (const auto& members : set.classes)
        if (members.empty()) throw std::invalid_argument("empty class");
}

}  // namespace detail

/// Center of mass of one class.
inline Eigen::VectorXd class_average(const std::vector<Eigen::VectorXd>& members) {
    if (members.empty()) throw std::invalid_argument("empty class");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(members.front().size());
    for (const auto& x : members) sum += x;
    return sum / static_cast<double>(members.size());
}

/// Average Euclidean distance between centers of mass, written as the full
/// double sum over ordered class pairs divided by N_u^2. The n = m terms are
/// zero but still counted, so two classes at distance d give d/2, not d.
inline double inter_class_distance(const ClassifiedStateSet& set) {
    detail::check_classes(set);
    const auto count = set.classes.size();
    std::vector<Eigen::VectorXd> centers;
    centers.reserve(count);
    for (const auto& members : set.classes) centers.push_back(class_average(members));

    double sum = 0.0;
    for (const auto& a : centers)
        for (const auto& b : centers) sum += (a - b).norm();
    return sum / (static_cast<double>(count) * static_cast<double>(count));
}

/// Mean distance of members to their own class center, averaged over classes.
inline double intra_class_variance(const ClassifiedStateSet& set) {
    detail::check_classes(set);
    double total = 0.0;
    for (const auto& members : set.classes) {
        const Eigen::VectorXd center = class_average(members);
        double spread = 0.0;
        for (const auto& x : members) spread += (center - x).norm();
        total += spread / static_cast<double>(members.size());
    }
    return total / static_cast<double>(set.classes.size());
}

/// Sep = C_d / (C_v + 1).
inline double separation(const ClassifiedStateSet& set) {
    return inter_class_distance(set) / (intra_class_variance(set) + 1.0);
}

/// Per-time separation metrics for a labeled batch of inputs, t = 1..M.
struct SeparationReport {
    std::vector<double> inter_class;    // C_d(t)
    std::vector<double> intra_class;    // C_v(t)
    std::vector<double> separation;     // Sep(t)
    int best_time = 0;                  // argmax of Sep, earliest on ties
};

/// Runs every input through the reservoir and evaluates the class metrics at
/// each time step. Class identity follows the label strings, in order of
/// first appearance.
inline SeparationReport separation_over_time(const ReservoirConfig& config,
                                             const std::vector<InputSeries>& inputs,
                                             const std::vector<std::string>& labels) {
    if (inputs.empty()) throw std::invalid_argument("no inputs");
    if (inputs.size() != labels.size())
        throw std::invalid_argument("separation_over_time: one label per input required");

    InputBatch padded = pad_inputs(InputBatch{inputs, 0});
    const int m = padded.padded_length;
    if (m < 1) throw std::invalid_argument("separation_over_time: empty series");

    std::vector<std::string> class_labels;
    std::vector<std::vector<int>> class_members;  // indices into inputs
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto at = std::find(class_labels.begin(), class_labels.end(), labels[i]);
        if (at == class_labels.end()) {
            class_labels.push_back(labels[i]);
            class_members.push_back({static_cast<int>(i)});
        } else {
            class_members[static_cast<std::size_t>(at - class_labels.begin())].push_back(
                static_cast<int>(i));
        }
    }

    std::vector<StateTrajectory> trajectories;
    trajectories.reserve(padded.inputs.size());
    for (const auto& u : padded.inputs) trajectories.push_back(run(config, u));

    SeparationReport report;
    report.inter_class.reserve(m);
    report.intra_class.reserve(m);
    report.separation.reserve(m);
    double best = -std::numeric_limits<double>::infinity();
    for (int t = 1; t <= m; ++t) {
        ClassifiedStateSet set;
        set.time = t;
        set.labels = class_labels;
        for (const auto& members : class_members) {
            std::vector<Eigen::VectorXd> states;
            states.reserve(members.size());
            for (const int idx : members) states.push_back(trajectories[idx].state(t));
            set.classes.push_back(std::move(states));
        }
        const double cd = inter_class_distance(set);
        const double cv = intra_class_variance(set);
        const double sep = cd / (cv + 1.0);
        report.inter_class.push_back(cd);
        report.intra_class.push_back(cv);
        report.separation.push_back(sep);
        if (sep > best) {
            best = sep;
            report.best_time = t;
        }
    }
    return report;
}

/// Empirical version of the inverse condition: the largest constant C the
/// data supports in |x_u(t) - x_v(t)| >= C |u(t) - v(t)|, i.e. the infimum of
/// the state-to-input distance quotient over all pairs and admissible times.
/// State distances at or below 1e-12, the library-wide equality tolerance,
/// count as coincidence and contribute an exact zero.
struct InverseSeparationStats {
    double infimum = 0.0;
    double mean = 0.0;
    long admissible_steps = 0;
};

inline InverseSeparationStats inverse_separation_probe(const ReservoirConfig& config,
                                                       const std::vector<InputSeries>& inputs,
                                                       double epsilon = 1.0) {
    if (epsilon <= 0.0) throw std::invalid_argument("inverse_separation_probe: epsilon must be positive");
    if (inputs.size() < 2) throw std::invalid_argument("inverse_separation_probe: need at least two inputs");

    InputBatch padded = pad_inputs(InputBatch{inputs, 0});
    std::vector<StateTrajectory> trajectories;
    trajectories.reserve(padded.inputs.size());
    for (const auto& u : padded.inputs) trajectories.push_back(run(config, u));

    InverseSeparationStats stats;
    stats.infimum = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = 0; i < padded.inputs.size(); ++i) {
        for (std::size_t j = i + 1; j < padded.inputs.size(); ++j) {
            for (int t = 1; t <= padded.padded_length; ++t) {
                const double gap = std::abs(padded.inputs[i](t) - padded.inputs[j](t));
                if (gap < epsilon) continue;
                double distance = (trajectories[i].state(t) - trajectories[j].state(t)).norm();
                if (distance <= 1e-12) distance = 0.0;  // states coincide
                const double ratio = distance / gap;
                stats.infimum = std::min(stats.infimum, ratio);
                sum += ratio;
                ++stats.admissible_steps;
            }
        }
    }
    if (stats.admissible_steps == 0) throw std::runtime_error("no admissible pairs");
    stats.mean = sum / static_cast<double>(stats.admissible_steps);
    return stats;
}

/// Checks the injectivity consequence: at the first time the inputs differ,
/// the full state vectors must differ too. A false return would mean the
/// simulation is broken, not that the statement fails.
inline bool injectivity_check(const ReservoirConfig& config, const InputSeries& u,
                              const InputSeries& v) {
    if (!config.nonlinearity().injective())
        throw std::invalid_argument("injectivity_check requires an injective nonlinearity");

    InputBatch padded = pad_inputs(InputBatch{{u, v}, 0});
    const InputSeries& pu = padded.inputs[0];
    const InputSeries& pv = padded.inputs[1];
    int first_diff = 0;
    for (int t = 1; t <= padded.padded_length; ++t) {
        if (pu(t) != pv(t)) {
            first_diff = t;
            break;
        }
    }
    if (first_diff == 0) throw std::invalid_argument("injectivity_check: identical inputs");

    const StateTrajectory tu = run(config, pu);
    const StateTrajectory tv = run(config, pv);
    return tu.state(first_diff) != tv.state(first_diff);
}

/// Checks the periodic blind spot: shifting every input entry by -P/beta
/// leaves the trajectory unchanged when f has period P. Returns true when
/// the two trajectories agree within 1e-9 everywhere, which the shift
/// guarantees.
inline bool periodicity_check(const ReservoirConfig& config, const InputSeries& u) {
    const auto period = config.nonlinearity().period();
    if (!period) throw std::invalid_argument("periodicity_check requires a periodic nonlinearity");

    const InputSeries shifted(u.values().array() - *period / config.beta());
    const StateTrajectory tu = run(config, u);
    const StateTrajectory tv = run(config, shifted);
    return ((tu.matrix() - tv.matrix()).array().abs() <= 1e-9).all();
}

}  // namespace dlrc
