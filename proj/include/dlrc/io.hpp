#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlrc/bounds.hpp"
#include "dlrc/readout.hpp"
#include "dlrc/reservoir.hpp"
#include "dlrc/separation.hpp"
#include "dlrc/series.hpp"
#include "dlrc/tasks.hpp"

namespace dlrc::io {

using nlohmann::json;

namespace detail {

/// Shortest exactly-round-tripping decimal form of a double.
inline std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    double check = 0.0;
    std::sscanf(buf, "%lf", &check);
    if (check == value) {
        // Try to shorten; 17 digits are only needed in the worst case.
        for (int precision = 1; precision < 17; ++precision) {
            char shorter[32];
            std::snprintf(shorter, sizeof shorter, "%.*g", precision, value);
            std::sscanf(shorter, "%lf", &check);
            if (check == value) return shorter;
        }
    }
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline double parse_double(const std::string& field, const std::string& context) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw std::runtime_error(context + ": malformed number '" + field + "'");
    return value;
}

inline std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

/// Single-column CSV with a fixed header; used for inputs ("u"),
/// targets ("y") and weights ("w").
inline Eigen::VectorXd read_column(const std::string& path, const std::string& header) {
    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{header})
        throw std::runtime_error(path + ": expected single-column CSV with header '" + header + "'");
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 1) throw std::runtime_error(path + ": expected one value per row");
        values.push_back(parse_double(fields[0], path));
    }
    if (values.empty()) return Eigen::VectorXd();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline void write_column(const std::string& path, const std::string& header,
                         const Eigen::VectorXd& values) {
    auto out = open_for_write(path);
    out << header << "\n";
    for (Eigen::Index i = 0; i < values.size(); ++i) out << format_double(values(i)) << "\n";
}

}  // namespace detail

inline InputSeries read_input_series(const std::string& path) {
    return InputSeries(detail::read_column(path, "u"));
}

inline void write_input_series(const std::string& path, const InputSeries& u) {
    detail::write_column(path, "u", u.values());
}

inline TargetSeries read_target_series(const std::string& path) {
    return detail::read_column(path, "y");
}

inline void write_target_series(const std::string& path, const TargetSeries& y) {
    detail::write_column(path, "y", y);
}

inline ReadoutWeights read_weights(const std::string& path) {
    return ReadoutWeights(detail::read_column(path, "w"));
}

inline void write_weights(const std::string& path, const ReadoutWeights& w) {
    detail::write_column(path, "w", w.vector());
}

/// Trajectory CSV: columns t, x0..xN; one row per time step t = 0..M.
inline void write_trajectory(const std::string& path, const StateTrajectory& traj) {
    auto out = detail::open_for_write(path);
    out << "t";
    for (int k = 0; k < traj.node_count(); ++k) out << ",x" << k;
    out << "\n";
    for (int t = 0; t <= traj.duration(); ++t) {
        out << t;
        for (int k = 0; k < traj.node_count(); ++k)
            out << "," << detail::format_double(traj.at(k, t));
        out << "\n";
    }
}

inline StateTrajectory read_trajectory(const std::string& path) {
    auto in = detail::open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty trajectory file");
    const auto header = detail::split_csv_line(line);
    if (header.size() < 2 || header[0] != "t")
        throw std::runtime_error(path + ": expected header t,x0,...");
    const int nodes = static_cast<int>(header.size()) - 1;

    std::vector<Eigen::VectorXd> columns;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split_csv_line(line);
        if (static_cast<int>(fields.size()) != nodes + 1)
            throw std::runtime_error(path + ": wrong column count in trajectory row");
        Eigen::VectorXd column(nodes);
        for (int k = 0; k < nodes; ++k) column(k) = detail::parse_double(fields[k + 1], path);
        columns.push_back(std::move(column));
    }
    if (columns.empty()) throw std::runtime_error(path + ": no states in trajectory file");
    Eigen::MatrixXd states(nodes, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t t = 0; t < columns.size(); ++t)
        states.col(static_cast<Eigen::Index>(t)) = columns[t];
    return StateTrajectory(std::move(states));
}

/// Labeled batch CSV: the header row carries one class label per column and
/// each column is one series over t = 1, 2, .... Columns may end early;
/// shorter series are simply absent below a row, written as empty cells.
inline LabeledBatch read_labeled_batch(const std::string& path) {
    auto in = detail::open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty labeled CSV");
    const auto labels = detail::split_csv_line(line);
    if (labels.empty()) throw std::runtime_error(path + ": no columns in labeled CSV");
    for (const auto& label : labels)
        if (label.empty()) throw std::runtime_error(path + ": empty class label");

    std::vector<std::vector<double>> columns(labels.size());
    std::vector<bool> ended(labels.size(), false);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() > labels.size())
            throw std::runtime_error(path + ": row wider than the header");
        for (std::size_t c = 0; c < labels.size(); ++c) {
            if (c >= fields.size() || fields[c].empty()) {
                ended[c] = true;
                continue;
            }
            if (ended[c])
                throw std::runtime_error(path + ": series column resumes after a gap");
            columns[c].push_back(detail::parse_double(fields[c], path));
        }
    }

    LabeledBatch batch;
    batch.labels = labels;
    for (auto& column : columns) {
        Eigen::VectorXd v =
            Eigen::Map<const Eigen::VectorXd>(column.data(), static_cast<Eigen::Index>(column.size()));
        batch.inputs.emplace_back(std::move(v));
    }
    const InputBatch padded = pad_inputs(InputBatch{batch.inputs, 0});
    batch.inputs = padded.inputs;
    batch.padded_length = padded.padded_length;
    return batch;
}

inline void write_labeled_batch(const std::string& path, const LabeledBatch& batch) {
    if (batch.inputs.empty()) throw std::invalid_argument("write_labeled_batch: empty batch");
    if (batch.inputs.size() != batch.labels.size())
        throw std::invalid_argument("write_labeled_batch: one label per series required");
    auto out = detail::open_for_write(path);
    for (std::size_t c = 0; c < batch.labels.size(); ++c)
        out << (c ? "," : "") << batch.labels[c];
    out << "\n";
    int max_len = 0;
    for (const auto& u : batch.inputs) max_len = std::max(max_len, u.length());
    for (int t = 1; t <= max_len; ++t) {
        for (std::size_t c = 0; c < batch.inputs.size(); ++c) {
            if (c) out << ",";
            if (t <= batch.inputs[c].length()) out << detail::format_double(batch.inputs[c](t));
        }
        out << "\n";
    }
}

/// General numeric matrix CSV with a header row (column names are free-form).
inline Eigen::MatrixXd read_matrix(const std::string& path) {
    auto in = detail::open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty matrix file");
    const auto header = detail::split_csv_line(line);
    const auto cols = header.size();
    if (cols == 0) throw std::runtime_error(path + ": no columns");

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != cols) throw std::runtime_error(path + ": ragged matrix row");
        for (const auto& f : fields) values.push_back(detail::parse_double(f, path));
        ++rows;
    }
    if (rows == 0) throw std::runtime_error(path + ": no rows");
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = values[r * cols + c];
    return m;
}

inline void write_narma_dataset(const std::string& path, const NarmaData& data) {
    auto out = detail::open_for_write(path);
    out << "t,u,y\n";
    for (int t = 1; t <= data.input.length(); ++t)
        out << t << "," << detail::format_double(data.input(t)) << ","
            << detail::format_double(data.target(t - 1)) << "\n";
}

// ---- JSON report shapes (field names are part of the stable interface) ----

inline json to_json(const BoundReport& report) {
    return json{{"theoretical_c", report.theoretical_c},
                {"max_empirical_ratio", report.max_empirical_ratio},
                {"mean_empirical_ratio", report.mean_empirical_ratio},
                {"num_pairs", report.num_pairs},
                {"violations", report.violations},
                {"slack", report.slack}};
}

inline BoundReport bound_report_from_json(const json& j) {
    BoundReport report;
    report.theoretical_c = j.at("theoretical_c").get<double>();
    report.max_empirical_ratio = j.at("max_empirical_ratio").get<double>();
    report.mean_empirical_ratio = j.at("mean_empirical_ratio").get<double>();
    report.num_pairs = j.at("num_pairs").get<int>();
    report.violations = j.at("violations").get<int>();
    report.slack = j.at("slack").get<double>();
    return report;
}

inline json to_json(const PointwiseRatioStats& stats) {
    return json{{"max", stats.max},
                {"mean", stats.mean},
                {"p99", stats.p99},
                {"admissible_steps", stats.admissible_steps}};
}

inline json to_json(const SeparationReport& report) {
    double max_sep = 0.0;
    if (report.best_time >= 1)
        max_sep = report.separation[static_cast<std::size_t>(report.best_time - 1)];
    return json{{"inter_class_distance", report.inter_class},
                {"intra_class_variance", report.intra_class},
                {"separation", report.separation},
                {"best_time", report.best_time},
                {"max_separation", max_sep}};
}

inline void write_separation_csv(const std::string& path, const SeparationReport& report) {
    auto out = detail::open_for_write(path);
    out << "t,C_d,C_v,Sep\n";
    for (std::size_t i = 0; i < report.separation.size(); ++i)
        out << (i + 1) << "," << detail::format_double(report.inter_class[i]) << ","
            << detail::format_double(report.intra_class[i]) << ","
            << detail::format_double(report.separation[i]) << "\n";
}

/// The training-report record shared by train/eval/narma: nrmse_test is null
/// when no held-out split exists.
inline json training_report(const std::string& method, double hyper, double nrmse_train,
                            std::optional<double> nrmse_test, double weight_norm) {
    json j{{"method", method},
           {"lambda_or_delta", hyper},
           {"nrmse_train", nrmse_train},
           {"weight_norm", weight_norm}};
    if (nrmse_test)
        j["nrmse_test"] = *nrmse_test;
    else
        j["nrmse_test"] = nullptr;
    return j;
}

inline json to_json(const ClassificationReport& report) {
    json j{{"accuracy_train", report.accuracy_train},
           {"accuracy_test", report.accuracy_test},
           {"train_samples", report.train_samples},
           {"test_samples", report.test_samples},
           {"weight_norm", report.weight_norm},
           {"separation", to_json(report.separation)}};
    if (std::isnan(report.accuracy_test)) j["accuracy_test"] = nullptr;
    return j;
}

inline void write_json(const std::string& path, const json& j) {
    auto out = detail::open_for_write(path);
    out << j.dump(2) << "\n";
}

inline json read_json(const std::string& path) {
    auto in = detail::open_for_read(path);
    return json::parse(in);
}

}  // namespace dlrc::io
