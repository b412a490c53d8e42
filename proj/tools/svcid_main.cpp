#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "svcid/svcid.hpp"

namespace {

using namespace svcid;

AppConfig load_or_default(const std::string& path) {
    return path.empty() ? AppConfig{} : load_config(path);
}

std::vector<DataPoint> full_dataset(const AppConfig& cfg, const std::string& dataset_path) {
    if (!dataset_path.empty()) {
        return read_dataset_csv(dataset_path);
    }
    return build_dataset(cfg.scenario, cfg.timing);
}

std::vector<DataPoint> select_split(const std::vector<DataPoint>& points, const AppConfig& cfg,
                                    const std::string& name) {
    if (name == "all") {
        return points;
    }
    SplitResult sp = split(points, cfg.split.train_fraction, cfg.split.seed);
    if (name == "train") {
        return std::move(sp.train);
    }
    if (name == "validation") {
        return std::move(sp.validation);
    }
    throw std::invalid_argument("unknown split '" + name +
                                "' (expected validation, train or all)");
}

PredictionTrace load_trace_for(const std::string& trace_path,
                               const std::vector<DataPoint>& full) {
    PredictionTrace trace = read_trace_csv(trace_path);
    const TraceApplication app = apply_trace(trace, full);
    if (!app.unmatched_ids.empty()) {
        throw std::runtime_error("trace '" + trace_path + "' has " +
                                 std::to_string(app.unmatched_ids.size()) +
                                 " predictions for points outside the dataset (first id " +
                                 std::to_string(app.unmatched_ids.front()) + ")");
    }
    return trace;
}

std::vector<Prediction> predictions_for(const std::vector<DataPoint>& subset,
                                        const AppConfig& cfg, const PredictionTrace* trace,
                                        const std::string& trace_path) {
    if (trace != nullptr) {
        const TraceApplication app = apply_trace(*trace, subset);
        if (!app.covers_all()) {
            throw std::runtime_error("trace '" + trace_path + "' is missing predictions for " +
                                     std::to_string(app.uncovered_ids.size()) +
                                     " evaluated points (first id " +
                                     std::to_string(app.uncovered_ids.front()) +
                                     "); refusing to evaluate a partial trace");
        }
        std::vector<Prediction> preds;
        preds.reserve(app.pairs.size());
        for (const auto& [dp, pred] : app.pairs) {
            preds.push_back(pred);
        }
        return preds;
    }
    std::vector<Prediction> preds;
    preds.reserve(subset.size());
    switch (cfg.predictor_model) {
        case PredictorModel::oracle:
            for (const DataPoint& dp : subset) {
                preds.push_back(predict_oracle(dp));
            }
            return preds;
        case PredictorModel::stochastic:
            for (const DataPoint& dp : subset) {
                preds.push_back(predict_stochastic(dp, cfg.stochastic));
            }
            return preds;
        case PredictorModel::trace:
            throw std::runtime_error(
                "config selects the trace predictor but no --trace file was given");
    }
    throw std::logic_error("unreachable predictor model");
}

/// Write through a file when a path is given, else to stdout.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    body(out);
}

int run(int argc, char** argv) {
    CLI::App app{"Deterministic simulator and metrics engine for proactive URLL/eMBB "
                 "spectrum sharing"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (defaults apply when omitted)");

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "Generate a labeled dataset file");
    std::string gen_out;
    std::optional<std::uint64_t> gen_seed;
    generate_cmd->add_option("--out", gen_out, "Dataset CSV path")->required();
    generate_cmd->add_option("--seed", gen_seed, "Override the scenario seed");

    // predict
    auto* predict_cmd =
        app.add_subcommand("predict", "Run a predictor over a dataset and record a trace");
    std::string pred_dataset;
    std::string pred_model;
    std::string pred_out;
    std::optional<std::uint64_t> pred_seed;
    predict_cmd->add_option("--dataset", pred_dataset,
                            "Dataset CSV (generated from the config when omitted)");
    predict_cmd->add_option("--model", pred_model, "Predictor: oracle or stochastic")
        ->check(CLI::IsMember({"oracle", "stochastic"}));
    predict_cmd->add_option("--seed", pred_seed, "Override the stochastic predictor seed");
    predict_cmd->add_option("--out", pred_out, "Trace CSV path")->required();

    // evaluate
    auto* eval_cmd = app.add_subcommand(
        "evaluate", "Score predictions at one guard width and write a report");
    std::string eval_dataset;
    std::string eval_trace;
    std::string eval_policy = "proactive";
    std::string eval_split = "validation";
    std::string eval_out;
    std::string eval_dump;
    double eval_tg = 1.0;
    std::size_t eval_dump_limit = 10;
    eval_cmd->add_option("--dataset", eval_dataset,
                         "Dataset CSV (generated from the config when omitted)");
    eval_cmd->add_option("--trace", eval_trace, "Prediction trace CSV");
    eval_cmd->add_option("--policy", eval_policy, "proactive, orthogonal or greedy");
    eval_cmd->add_option("--tg-frames", eval_tg, "Guard half-width in frames")
        ->check(CLI::NonNegativeNumber);
    eval_cmd->add_option("--split", eval_split, "validation, train or all")
        ->check(CLI::IsMember({"validation", "train", "all"}));
    eval_cmd->add_option("--out", eval_out, "Report path (stdout when omitted)");
    eval_cmd->add_option("--dump-timeline", eval_dump, "Write slot-level timelines here");
    eval_cmd->add_option("--dump-limit", eval_dump_limit,
                         "Timelines to dump (first N evaluated points)");

    // sweep
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Score predictions across the configured guard grid");
    std::string sweep_dataset;
    std::string sweep_trace;
    std::string sweep_policy = "proactive";
    std::string sweep_split = "validation";
    std::string sweep_out;
    sweep_cmd->add_option("--dataset", sweep_dataset,
                          "Dataset CSV (generated from the config when omitted)");
    sweep_cmd->add_option("--trace", sweep_trace, "Prediction trace CSV");
    sweep_cmd->add_option("--policy", sweep_policy, "proactive, orthogonal or greedy");
    sweep_cmd->add_option("--split", sweep_split, "validation, train or all")
        ->check(CLI::IsMember({"validation", "train", "all"}));
    sweep_cmd->add_option("--out", sweep_out, "Sweep CSV path (stdout when omitted)");

    // baselines
    auto* base_cmd = app.add_subcommand(
        "baselines", "Slot-exact reference points for the prediction-free policies");
    std::string base_dataset;
    std::string base_policy;
    std::string base_split = "validation";
    std::string base_out;
    base_cmd->add_option("--dataset", base_dataset,
                         "Dataset CSV (generated from the config when omitted)");
    base_cmd->add_option("--policy", base_policy,
                         "Only this policy (default: orthogonal and greedy)");
    base_cmd->add_option("--split", base_split, "validation, train or all")
        ->check(CLI::IsMember({"validation", "train", "all"}));
    base_cmd->add_option("--out", base_out, "Baselines CSV path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    AppConfig cfg = load_or_default(config_path);

    if (generate_cmd->parsed()) {
        if (gen_seed) {
            cfg.scenario.seed = *gen_seed;
        }
        write_dataset_csv(gen_out, build_dataset(cfg.scenario, cfg.timing));
        return 0;
    }

    if (predict_cmd->parsed()) {
        if (!pred_model.empty()) {
            cfg.predictor_model = predictor_model_from_string(pred_model);
        }
        if (cfg.predictor_model == PredictorModel::trace) {
            throw std::runtime_error("predict needs a generating model, not 'trace'");
        }
        if (pred_seed) {
            cfg.stochastic.seed = *pred_seed;
        }
        const auto points = full_dataset(cfg, pred_dataset);
        const PredictionTrace trace = cfg.predictor_model == PredictorModel::oracle
                                          ? trace_from_oracle(points)
                                          : trace_from_stochastic(points, cfg.stochastic);
        write_trace_csv(pred_out, trace);
        return 0;
    }

    if (eval_cmd->parsed()) {
        const auto full = full_dataset(cfg, eval_dataset);
        std::optional<PredictionTrace> trace;
        if (!eval_trace.empty()) {
            trace = load_trace_for(eval_trace, full);
        }
        const auto subset = select_split(full, cfg, eval_split);
        const auto preds =
            predictions_for(subset, cfg, trace ? &*trace : nullptr, eval_trace);

        EvalOptions opts;
        opts.policy = policy_from_string(eval_policy);
        opts.horizon_slots = cfg.rho_slots;
        opts.with_timelines = true;
        const MetricsReport report =
            evaluate_predictions(subset, preds, eval_tg, cfg.timing, opts);
        with_output(eval_out, [&report](std::ostream& out) { write_report_text(out, report); });

        if (!eval_dump.empty()) {
            const GuardConfig guard = GuardConfig::from_frames(eval_tg, cfg.timing);
            std::ofstream dump(eval_dump, std::ios::binary);
            if (!dump) {
                throw std::runtime_error("cannot open '" + eval_dump + "' for writing");
            }
            const std::size_t limit = std::min(eval_dump_limit, subset.size());
            for (std::size_t i = 0; i < limit; ++i) {
                const auto planned = plan_guard(preds[i], guard, cfg.timing);
                write_timeline_dump(dump, subset[i],
                                    build_timeline(subset[i], planned, opts.policy,
                                                   report.horizon_slots));
            }
        }
        return 0;
    }

    if (sweep_cmd->parsed()) {
        const auto full = full_dataset(cfg, sweep_dataset);
        std::optional<PredictionTrace> trace;
        if (!sweep_trace.empty()) {
            trace = load_trace_for(sweep_trace, full);
        }
        const auto subset = select_split(full, cfg, sweep_split);
        const auto preds =
            predictions_for(subset, cfg, trace ? &*trace : nullptr, sweep_trace);

        EvalOptions opts;
        opts.policy = policy_from_string(sweep_policy);
        opts.horizon_slots = cfg.rho_slots;
        const auto rows = run_sweep(subset, preds, cfg.sweep_grid, cfg.timing, opts);
        with_output(sweep_out, [&rows](std::ostream& out) { write_sweep_csv(out, rows); });
        return 0;
    }

    if (base_cmd->parsed()) {
        const auto full = full_dataset(cfg, base_dataset);
        const auto subset = select_split(full, cfg, base_split);
        std::vector<BaselineRow> rows;
        if (base_policy.empty()) {
            rows.push_back(
                run_baseline(subset, Policy::orthogonal_reactive, cfg.timing, cfg.rho_slots));
            rows.push_back(
                run_baseline(subset, Policy::greedy_reuse, cfg.timing, cfg.rho_slots));
        } else {
            rows.push_back(run_baseline(subset, policy_from_string(base_policy), cfg.timing,
                                        cfg.rho_slots));
        }
        with_output(base_out, [&rows](std::ostream& out) { write_baselines_csv(out, rows); });
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
