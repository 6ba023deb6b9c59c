#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dlrc {

/// Discrete-time input series u(1..m). The entry u(0) is defined to be zero
/// and is never stored.
class InputSeries {
public:
    InputSeries() = default;
    explicit InputSeries(Eigen::VectorXd values) : values_(std::move(values)) {}
    InputSeries(std::initializer_list<double> values)
        : values_(Eigen::Map<const Eigen::VectorXd>(values.begin(),
                                                    static_cast<Eigen::Index>(values.size()))) {}

    /// Number of stored entries m; valid times are 0..m.
    int length() const { return static_cast<int>(values_.size()); }

    /// u(t) for t in [0, length()]; u(0) is always 0.
    double operator()(int t) const {
        if (t == 0) return 0.0;
        if (t < 0 || t > length()) throw std::out_of_range("InputSeries: time index out of range");
        return values_(t - 1);
    }

    const Eigen::VectorXd& values() const { return values_; }

    bool operator==(const InputSeries& other) const {
        return values_.size() == other.values_.size() && values_ == other.values_;
    }

private:
    Eigen::VectorXd values_;
};

/// A collection of input series sharing a common length after padding.
struct InputBatch {
    std::vector<InputSeries> inputs;
    /// Common length M; nonzero only after pad_inputs.
    int padded_length = 0;
};

/// Extends every series with zeros to the maximum length in the batch.
/// Original entries are left untouched.
inline InputBatch pad_inputs(const InputBatch& batch) {
    if (batch.inputs.empty()) throw std::invalid_argument("no inputs");
    int max_len = 0;
    for (const auto& u : batch.inputs) max_len = std::max(max_len, u.length());

    InputBatch out;
    out.padded_length = max_len;
    out.inputs.reserve(batch.inputs.size());
    for (const auto& u : batch.inputs) {
        Eigen::VectorXd padded = Eigen::VectorXd::Zero(max_len);
        padded.head(u.length()) = u.values();
        out.inputs.emplace_back(std::move(padded));
    }
    return out;
}

/// Zero-pads one series to an explicit length.
inline InputSeries pad_to(const InputSeries& u, int length) {
    if (length < u.length()) throw std::invalid_argument("pad_to: target shorter than series");
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(length);
    padded.head(u.length()) = u.values();
    return InputSeries(std::move(padded));
}

/// Rescales u to unit l2 norm.
inline InputSeries normalize_input(const InputSeries& u) {
    const double norm = u.values().norm();
    if (norm == 0.0) throw std::invalid_argument("cannot normalize zero series");
    return InputSeries(u.values() / norm);
}

/// Elementwise multiplication by a mask repeated periodically over time:
/// out(t) = u(t) * mask(((t-1) mod q) + 1).
inline InputSeries apply_mask(const InputSeries& u, const Eigen::VectorXd& mask) {
    const auto q = mask.size();
    if (q < 1) throw std::invalid_argument("empty mask");
    Eigen::VectorXd out(u.length());
    for (int t = 1; t <= u.length(); ++t) out(t - 1) = u(t) * mask((t - 1) % q);
    return InputSeries(std::move(out));
}

}  // namespace dlrc
