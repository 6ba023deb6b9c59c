#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlrc/bounds.hpp"
#include "dlrc/dantzig.hpp"
#include "dlrc/io.hpp"
#include "dlrc/random.hpp"
#include "dlrc/readout.hpp"
#include "dlrc/reservoir.hpp"
#include "dlrc/separation.hpp"
#include "dlrc/series.hpp"
#include "dlrc/tasks.hpp"

namespace dlrc::cli {

using nlohmann::json;

/// Exit codes: 0 success, 1 checked property violated, 2 usage/config error.
enum ExitCode { kOk = 0, kViolation = 1, kUsage = 2 };

namespace detail {

/// Options shared by every subcommand: reservoir parameters, training
/// parameters and the seed. Values come from (in increasing precedence)
/// built-in defaults, the --config JSON file, explicit flags.
struct CommonOpts {
    int delay_length = 10;
    double alpha = 0.5;
    double beta = 0.5;
    std::string nonlinearity = "tanh";
    double gain = 1.0;
    std::string feedback = "delayed";
    std::string method = "ridge";
    double lambda = 1e-6;
    double delta = 0.1;
    int washout = 0;
    double train_fraction = 0.8;
    std::optional<std::uint64_t> seed;
    std::string config_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; explicit flags win");
        cmd->add_option("-N,--N", delay_length, "delay length N (N+1 nodes)");
        cmd->add_option("--alpha", alpha, "feedback gain, in (0,1)");
        cmd->add_option("--beta", beta, "input gain, in (0,1)");
        cmd->add_option("--nonlinearity", nonlinearity, "tanh | sine | scaled-tanh");
        cmd->add_option("--gain", gain, "gain of scaled-tanh");
        cmd->add_option("--feedback", feedback, "delayed | instantaneous");
        cmd->add_option("--method", method, "ls | ridge | dantzig");
        cmd->add_option("--lambda", lambda, "ridge penalty");
        cmd->add_option("--delta", delta, "Dantzig selector tolerance");
        cmd->add_option("--washout", washout, "initial steps dropped before training");
        cmd->add_option("--train-fraction", train_fraction, "leading fraction used for training");
        cmd->add_option("--seed", seed, "RNG seed; required whenever randomness is involved");
    }

    template <typename T>
    static void merge_key(const json& cfg, const CLI::App* cmd, const std::string& flag,
                          const char* key, T& value) {
        if (cfg.contains(key) && cmd->count(flag) == 0) value = cfg.at(key).get<T>();
    }

    json load_config(const CLI::App* cmd) {
        json cfg = json::object();
        if (!config_path.empty()) cfg = io::read_json(config_path);
        merge_key(cfg, cmd, "--N", "N", delay_length);
        merge_key(cfg, cmd, "--alpha", "alpha", alpha);
        merge_key(cfg, cmd, "--beta", "beta", beta);
        merge_key(cfg, cmd, "--nonlinearity", "nonlinearity", nonlinearity);
        merge_key(cfg, cmd, "--gain", "gain", gain);
        merge_key(cfg, cmd, "--feedback", "feedback", feedback);
        merge_key(cfg, cmd, "--method", "method", method);
        merge_key(cfg, cmd, "--lambda", "lambda", lambda);
        merge_key(cfg, cmd, "--delta", "delta", delta);
        merge_key(cfg, cmd, "--washout", "washout", washout);
        merge_key(cfg, cmd, "--train-fraction", "train_fraction", train_fraction);
        if (cfg.contains("seed") && cmd->count("--seed") == 0)
            seed = cfg.at("seed").get<std::uint64_t>();
        return cfg;
    }

    ReservoirConfig reservoir() const {
        const Feedback fb = [&] {
            if (feedback == "delayed") return Feedback::Delayed;
            if (feedback == "instantaneous") return Feedback::Instantaneous;
            throw std::invalid_argument("unknown feedback variant: " + feedback);
        }();
        return ReservoirConfig(delay_length, alpha, beta,
                               Nonlinearity::from_name(nonlinearity, gain), fb);
    }

    TrainSpec train_spec() const {
        TrainSpec spec;
        if (method == "ls")
            spec.method = TrainSpec::Method::LeastSquares;
        else if (method == "ridge")
            spec.method = TrainSpec::Method::Ridge;
        else if (method == "dantzig")
            spec.method = TrainSpec::Method::Dantzig;
        else
            throw std::invalid_argument("unknown training method: " + method);
        spec.hyper = spec.method == TrainSpec::Method::Dantzig ? delta : lambda;
        spec.washout = washout;
        spec.train_fraction = train_fraction;
        return spec;
    }

    double hyper_for_report() const {
        if (method == "dantzig") return delta;
        if (method == "ridge") return lambda;
        return 0.0;
    }

    std::uint64_t require_seed() const {
        if (!seed) throw std::invalid_argument("seed required (--seed or \"seed\" in the config)");
        return *seed;
    }
};

inline std::vector<InputPair> random_pairs(int count, int length, std::mt19937_64& rng) {
    std::vector<InputPair> pairs;
    pairs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        InputSeries u = random_series(length, rng);
        InputSeries v = random_series(length, rng);
        pairs.emplace_back(std::move(u), std::move(v));
    }
    return pairs;
}

inline ReadoutWeights load_or_draw_weights(const std::string& path, int nodes,
                                           std::mt19937_64& rng) {
    if (!path.empty()) return io::read_weights(path);
    Eigen::VectorXd w(nodes);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    do {
        for (int i = 0; i < nodes; ++i) w(i) = dist(rng);
    } while (w.norm() == 0.0);
    return ReadoutWeights(w / w.norm());
}

}  // namespace detail

/// Runs the command line given as plain arguments (no program name).
/// Everything the commands print goes to the supplied streams, so the whole
/// CLI is testable in-process.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using detail::CommonOpts;

    CLI::App app{"delay-line reservoir computer: simulation, training, bounds, separation"};
    app.require_subcommand(1);

    struct {
        CommonOpts common;
        std::string input, output;
        bool normalize = false;
    } simulate;
    auto* simulate_cmd = app.add_subcommand("simulate", "run the reservoir on an input CSV");
    simulate.common.attach(simulate_cmd);
    simulate_cmd->add_option("--input", simulate.input, "input series CSV (header 'u')")->required();
    simulate_cmd->add_option("--output", simulate.output, "trajectory CSV to write")->required();
    simulate_cmd->add_flag("--normalize", simulate.normalize, "rescale the input to unit l2 norm");

    struct {
        CommonOpts common;
        std::string input, target, weights_out, report;
    } train;
    auto* train_cmd = app.add_subcommand("train", "train readout weights on one series");
    train.common.attach(train_cmd);
    train.common.train_fraction = 1.0;  // train on everything unless asked otherwise
    train_cmd->add_option("--input", train.input, "input series CSV")->required();
    train_cmd->add_option("--target", train.target, "target series CSV (header 'y')")->required();
    train_cmd->add_option("--weights-out", train.weights_out, "weights CSV to write");
    train_cmd->add_option("--report", train.report, "training report JSON to write");

    struct {
        CommonOpts common;
        std::string input, target, weights, report, output;
    } eval;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate existing weights on a series");
    eval.common.attach(eval_cmd);
    eval_cmd->add_option("--input", eval.input, "input series CSV")->required();
    eval_cmd->add_option("--target", eval.target, "target series CSV")->required();
    eval_cmd->add_option("--weights", eval.weights, "weights CSV")->required();
    eval_cmd->add_option("--report", eval.report, "report JSON to write");
    eval_cmd->add_option("--output", eval.output, "predicted series CSV to write");

    struct {
        CommonOpts common;
        int pairs = 100;
        int length = 64;
        std::string weights, report;
    } bound;
    auto* bound_cmd = app.add_subcommand("bound", "check the output-variation bound on random pairs");
    bound.common.attach(bound_cmd);
    bound_cmd->add_option("--pairs", bound.pairs, "number of random input pairs");
    bound_cmd->add_option("--length", bound.length, "series length M");
    bound_cmd->add_option("--weights", bound.weights, "weights CSV; default random with |w| = 1");
    bound_cmd->add_option("--report", bound.report, "bound report JSON to write");

    struct {
        CommonOpts common;
        int pairs = 100;
        int length = 64;
        double epsilon = 1e-6;
        std::string weights, report;
    } probe;
    auto* probe_cmd =
        app.add_subcommand("pointwise-probe", "measure instantaneous output/input ratios");
    probe.common.attach(probe_cmd);
    probe_cmd->add_option("--pairs", probe.pairs, "number of random input pairs");
    probe_cmd->add_option("--length", probe.length, "series length M");
    probe_cmd->add_option("--epsilon", probe.epsilon, "minimum |u(t)-v(t)| for a step to count");
    probe_cmd->add_option("--weights", probe.weights, "weights CSV; default random with |w| = 1");
    probe_cmd->add_option("--report", probe.report, "probe report JSON to write");

    struct {
        CommonOpts common;
        std::string input, report, csv;
        bool normalize = false;
    } separation;
    auto* separation_cmd =
        app.add_subcommand("separation", "per-time class separation of reservoir states");
    separation.common.attach(separation_cmd);
    separation_cmd->add_option("--input", separation.input, "labeled series CSV")->required();
    separation_cmd->add_option("--report", separation.report, "separation report JSON to write");
    separation_cmd->add_option("--csv", separation.csv, "per-time t,C_d,C_v,Sep CSV to write");
    separation_cmd->add_flag("--normalize", separation.normalize,
                             "rescale every series to unit l2 norm first");

    struct {
        CommonOpts common;
        int length = 2000;
        int order = 10;
        std::string report, data;
    } narma;
    auto* narma_cmd = app.add_subcommand("narma", "NARMA benchmark end to end");
    narma.common.attach(narma_cmd);
    narma_cmd->add_option("--length", narma.length, "series length T");
    narma_cmd->add_option("--order", narma.order, "NARMA order");
    narma_cmd->add_option("--report", narma.report, "benchmark report JSON to write");
    narma_cmd->add_option("--data", narma.data, "write the generated t,u,y dataset CSV here");

    struct {
        CommonOpts common;
        std::string templates, report;
        int samples = 10;
        double noise = 0.1;
    } classify;
    auto* classify_cmd =
        app.add_subcommand("classify", "synthetic classification benchmark from templates");
    classify.common.attach(classify_cmd);
    classify_cmd->add_option("--templates", classify.templates, "labeled CSV, one template per class")
        ->required();
    classify_cmd->add_option("--samples", classify.samples, "samples generated per class");
    classify_cmd->add_option("--noise", classify.noise, "uniform noise amplitude");
    classify_cmd->add_option("--report", classify.report, "benchmark report JSON to write");

    struct {
        CommonOpts common;
        std::string design, target, solution, report;
    } dantzig;
    auto* dantzig_cmd = app.add_subcommand("dantzig", "solve a Dantzig selector problem");
    dantzig.common.attach(dantzig_cmd);
    dantzig_cmd->add_option("--design", dantzig.design, "regression matrix CSV (rows = observations)")
        ->required();
    dantzig_cmd->add_option("--target", dantzig.target, "target CSV (header 'y')")->required();
    dantzig_cmd->add_option("--solution", dantzig.solution, "coefficient CSV to write");
    dantzig_cmd->add_option("--report", dantzig.report, "report JSON to write");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (app.got_subcommand(simulate_cmd)) {
            simulate.common.load_config(simulate_cmd);
            const ReservoirConfig rc = simulate.common.reservoir();
            InputSeries u = io::read_input_series(simulate.input);
            if (simulate.normalize) u = normalize_input(u);
            io::write_trajectory(simulate.output, dlrc::run(rc, u));
            return kOk;
        }

        if (app.got_subcommand(train_cmd)) {
            train.common.load_config(train_cmd);
            const ReservoirConfig rc = train.common.reservoir();
            const TrainSpec spec = train.common.train_spec();
            const InputSeries u = io::read_input_series(train.input);
            const TargetSeries y = io::read_target_series(train.target);
            if (y.size() != u.length())
                throw std::invalid_argument("train: input and target lengths differ");

            const StateTrajectory traj = dlrc::run(rc, u);
            const DesignMatrix design = build_design({traj}, spec.washout);
            const TargetSeries retained = y.tail(design.column_count());

            const int total = design.column_count();
            const int train_count =
                std::min(total, std::max(1, static_cast<int>(total * spec.train_fraction)));
            const DesignMatrix head(design.matrix().leftCols(train_count), spec.washout);
            const ReadoutWeights w = train_readout(head, retained.head(train_count), spec);

            const double nrmse_train =
                nrmse(head.matrix().transpose() * w.vector(), retained.head(train_count));
            std::optional<double> nrmse_test;
            if (total - train_count >= 2) {
                const Eigen::MatrixXd tail = design.matrix().rightCols(total - train_count);
                nrmse_test = nrmse(tail.transpose() * w.vector(), retained.tail(total - train_count));
            }

            if (!train.weights_out.empty()) io::write_weights(train.weights_out, w);
            const json report = io::training_report(train.common.method,
                                                    train.common.hyper_for_report(), nrmse_train,
                                                    nrmse_test, w.norm());
            out << report.dump(2) << "\n";
            if (!train.report.empty()) io::write_json(train.report, report);
            return kOk;
        }

        if (app.got_subcommand(eval_cmd)) {
            eval.common.load_config(eval_cmd);
            const ReservoirConfig rc = eval.common.reservoir();
            const InputSeries u = io::read_input_series(eval.input);
            const TargetSeries y = io::read_target_series(eval.target);
            const ReadoutWeights w = io::read_weights(eval.weights);
            if (y.size() != u.length())
                throw std::invalid_argument("eval: input and target lengths differ");

            const Eigen::VectorXd predictions = output(dlrc::run(rc, u), w);
            const int kept = u.length() - eval.common.washout;
            if (kept < 2) throw std::invalid_argument("eval: washout leaves too few steps");
            const double score = nrmse(predictions.tail(kept), y.tail(kept));

            if (!eval.output.empty()) io::write_target_series(eval.output, predictions);
            const json report{{"nrmse", score}, {"weight_norm", w.norm()}, {"steps", kept}};
            out << report.dump(2) << "\n";
            if (!eval.report.empty()) io::write_json(eval.report, report);
            return kOk;
        }

        if (app.got_subcommand(bound_cmd)) {
            const json cfg = bound.common.load_config(bound_cmd);
            CommonOpts::merge_key(cfg, bound_cmd, "--pairs", "pairs", bound.pairs);
            CommonOpts::merge_key(cfg, bound_cmd, "--length", "length", bound.length);
            const ReservoirConfig rc = bound.common.reservoir();
            if (!contraction_valid(rc.alpha(), rc.nonlinearity().lipschitz_constant())) {
                err << "bound inapplicable: alpha*L >= 1/sqrt(2)\n";
                return kUsage;
            }
            std::mt19937_64 rng(bound.common.require_seed());
            const ReadoutWeights w =
                detail::load_or_draw_weights(bound.weights, rc.node_count(), rng);
            const BoundReport report =
                bound_check(rc, w, detail::random_pairs(bound.pairs, bound.length, rng));
            const json j = io::to_json(report);
            out << j.dump(2) << "\n";
            if (!bound.report.empty()) io::write_json(bound.report, j);
            return report.violations > 0 ? kViolation : kOk;
        }

        if (app.got_subcommand(probe_cmd)) {
            const json cfg = probe.common.load_config(probe_cmd);
            CommonOpts::merge_key(cfg, probe_cmd, "--pairs", "pairs", probe.pairs);
            CommonOpts::merge_key(cfg, probe_cmd, "--length", "length", probe.length);
            CommonOpts::merge_key(cfg, probe_cmd, "--epsilon", "epsilon", probe.epsilon);
            const ReservoirConfig rc = probe.common.reservoir();
            std::mt19937_64 rng(probe.common.require_seed());
            const ReadoutWeights w =
                detail::load_or_draw_weights(probe.weights, rc.node_count(), rng);
            const PointwiseRatioStats stats = pointwise_ratio_probe(
                rc, w, detail::random_pairs(probe.pairs, probe.length, rng), probe.epsilon);
            const json j = io::to_json(stats);
            out << j.dump(2) << "\n";
            if (!probe.report.empty()) io::write_json(probe.report, j);
            return kOk;
        }

        if (app.got_subcommand(separation_cmd)) {
            separation.common.load_config(separation_cmd);
            const ReservoirConfig rc = separation.common.reservoir();
            LabeledBatch batch = io::read_labeled_batch(separation.input);
            if (separation.normalize)
                for (auto& u : batch.inputs) u = normalize_input(u);
            const SeparationReport report =
                separation_over_time(rc, batch.inputs, batch.labels);

            std::size_t distinct = 0;
            {
                std::vector<std::string> seen;
                for (const auto& label : batch.labels)
                    if (std::find(seen.begin(), seen.end(), label) == seen.end())
                        seen.push_back(label);
                distinct = seen.size();
            }
            const double max_cd =
                *std::max_element(report.inter_class.begin(), report.inter_class.end());
            if (distinct >= 2 && max_cd <= 1e-12)
                err << "warning: class centers coincide at every time step (C_d = 0)\n";

            const json j = io::to_json(report);
            out << j.dump(2) << "\n";
            if (!separation.report.empty()) io::write_json(separation.report, j);
            if (!separation.csv.empty()) io::write_separation_csv(separation.csv, report);
            return kOk;
        }

        if (app.got_subcommand(narma_cmd)) {
            const json cfg = narma.common.load_config(narma_cmd);
            CommonOpts::merge_key(cfg, narma_cmd, "--length", "length", narma.length);
            CommonOpts::merge_key(cfg, narma_cmd, "--order", "order", narma.order);
            const ReservoirConfig rc = narma.common.reservoir();
            NarmaSpec spec;
            spec.length = narma.length;
            spec.order = narma.order;
            spec.seed = narma.common.require_seed();
            const NarmaData data = narma_generate(spec);
            if (!narma.data.empty()) io::write_narma_dataset(narma.data, data);

            const RegressionReport report =
                run_regression(rc, data.input, data.target, narma.common.train_spec());
            json j = io::training_report(narma.common.method, narma.common.hyper_for_report(),
                                         report.nrmse_train, report.nrmse_test, report.weight_norm);
            j["train_steps"] = report.train_steps;
            j["test_steps"] = report.test_steps;
            out << j.dump(2) << "\n";
            if (!narma.report.empty()) io::write_json(narma.report, j);
            return kOk;
        }

        if (app.got_subcommand(classify_cmd)) {
            const json cfg = classify.common.load_config(classify_cmd);
            CommonOpts::merge_key(cfg, classify_cmd, "--samples", "samples", classify.samples);
            CommonOpts::merge_key(cfg, classify_cmd, "--noise", "noise", classify.noise);
            const ReservoirConfig rc = classify.common.reservoir();
            const LabeledBatch templates = io::read_labeled_batch(classify.templates);

            SyntheticClassSpec spec;
            spec.templates = templates.inputs;
            spec.labels = templates.labels;
            spec.noise_amplitude = classify.noise;
            spec.samples_per_class = classify.samples;
            spec.seed = classify.common.require_seed();

            const ClassificationReport report =
                run_benchmark(rc, spec, classify.common.train_spec());
            const json j = io::to_json(report);
            out << j.dump(2) << "\n";
            if (!classify.report.empty()) io::write_json(classify.report, j);
            return kOk;
        }

        if (app.got_subcommand(dantzig_cmd)) {
            dantzig.common.load_config(dantzig_cmd);
            const Eigen::MatrixXd A = io::read_matrix(dantzig.design);
            const TargetSeries y = io::read_target_series(dantzig.target);
            const Eigen::VectorXd beta = dantzig_selector(A, y, dantzig.common.delta);

            Eigen::VectorXd correlations(A.cols());
            for (Eigen::Index k = 0; k < A.cols(); ++k)
                correlations(k) = (A.col(k) / A.col(k).norm()).dot(A * beta - y);
            const json j{{"delta", dantzig.common.delta},
                         {"l1_norm", beta.lpNorm<1>()},
                         {"max_correlation", correlations.lpNorm<Eigen::Infinity>()},
                         {"nonzeros", static_cast<int>((beta.array().abs() > 1e-9).count())}};
            if (!dantzig.solution.empty())
                io::write_weights(dantzig.solution, ReadoutWeights(beta));
            out << j.dump(2) << "\n";
            if (!dantzig.report.empty()) io::write_json(dantzig.report, j);
            return kOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    err << "error: no subcommand\n";
    return kUsage;
}

inline int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args), std::cout, std::cerr);
}

}  // namespace dlrc::cli
