// Acceptance suite for the guard-interval coexistence artifact.
//
// Each criterion prints exactly one PASS/FAIL line; the process exits with
// the number of failed criteria. Tolerances are pinned next to each check.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "svcid/svcid.hpp"

using namespace svcid;

namespace {

int failures = 0;

void criterion(int index, const char* name, bool ok) {
    std::printf("%s %d: %s\n", ok ? "PASS" : "FAIL", index, name);
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

std::vector<Prediction> predictions_of(const std::vector<DataPoint>& points,
                                       const StochasticModelSpec& spec) {
    std::vector<Prediction> preds;
    preds.reserve(points.size());
    for (const DataPoint& dp : points) {
        preds.push_back(predict_stochastic(dp, spec));
    }
    return preds;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return {};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 1. A perfect forecast with a zero-width guard reaches 100% reliability and
//    100% utilization on the default scenario, at the expected corpus scale,
//    in bounded time.
void criterion_1(const std::vector<DataPoint>& full,
                 const std::vector<DataPoint>& validation, const TimingConfig& timing,
                 std::chrono::steady_clock::time_point started) {
    bool ok = std::abs(static_cast<double>(full.size()) - 36040.0) / 36040.0 <= 0.05;

    std::vector<Prediction> preds;
    preds.reserve(validation.size());
    for (const DataPoint& dp : validation) {
        preds.push_back(predict_oracle(dp));
    }
    const MetricsReport report = evaluate_predictions(validation, preds, 0.0, timing);
    ok = ok && report.er_percent == 100.0;  // exact
    ok = ok && report.ez_percent == 100.0;  // exact
    ok = ok && report.classification.accuracy == 1.0;

    const auto elapsed = std::chrono::steady_clock::now() - started;
    ok = ok && elapsed < std::chrono::seconds(10);
    criterion(1, "perfect forecasts with a zero guard keep the band fully used and reliable",
              ok);
}

// 2. On clean geometry (guard unclamped, inside the horizon, not grazed by an
//    escaped packet) the closed-form accounting equals the slot-exact
//    timeline, with zero tolerance, over at least 10000 random cases.
void criterion_2(const TimingConfig& timing) {
    const SlotCount horizon = 16 * 33 + 2 * 66 + 20;
    RandomStream stream(substream_seed(20260823, 2));
    int accepted = 0;
    bool ok = true;
    for (int trial = 0; trial < 100000 && accepted < 10000 && ok; ++trial) {
        DataPoint dp;
        dp.id = static_cast<std::uint64_t>(trial + 1);
        dp.service_type = ServiceType::urll;
        dp.request_time_frames = 1 + static_cast<int>(stream.uniform_below(16));
        dp.packet_start_slot = dp.request_time_frames * 33 + 1;
        dp.packet_length_slots = 1 + static_cast<int>(stream.uniform_below(20));

        const int pred_rt = static_cast<int>(stream.uniform_below(17));
        const SlotCount tg = static_cast<SlotCount>(stream.uniform_below(67));
        const Prediction pred{ServiceType::urll, static_cast<double>(pred_rt)};
        const GuardConfig guard{static_cast<double>(tg) / 33.0, tg};
        const auto planned = plan_guard(pred, guard, timing);
        if (planned->lo != predicted_start_slot(pred, timing) - tg) continue;
        if (planned->hi > horizon) continue;
        const bool covered = planned->contains(dp.packet_start_slot);
        const SlotIndex packet_end = dp.packet_start_slot + dp.packet_length_slots - 1;
        if (!covered && packet_end >= planned->lo && dp.packet_start_slot <= planned->hi) {
            continue;
        }

        const EventFlags flags = events(dp, pred, planned);
        const MetricsConfig cfg{horizon, guard};
        const double closed =
            utilization_point(flags, dp, predicted_start_slot(pred, timing), cfg);
        const SlotTimeline tl = build_timeline(dp, planned, Policy::proactive_guard, horizon);
        const double slot_exact = 1.0 - static_cast<double>(tl.idle_slots()) /
                                            static_cast<double>(horizon);
        ok = ok && closed == slot_exact;  // zero tolerance
        ok = ok && reliability_point(flags) == (tl.packet_success ? 1 : 0);
        ++accepted;
    }
    ok = ok && accepted == 10000;
    criterion(2, "closed-form and slot-exact accounting agree exactly on clean geometry", ok);
}

// 3. The prediction-free references bound the trade-off: greedy reuse gives
//    0% reliability at exactly 100% utilization; orthogonal access gives
//    100% reliability at the tiny utilization mean_length/horizon (checked
//    against the configured expectation within 0.5 percentage points).
void criterion_3(const std::vector<DataPoint>& validation, const ScenarioConfig& scenario,
                 const TimingConfig& timing) {
    const BaselineRow greedy = run_baseline(validation, Policy::greedy_reuse, timing);
    bool ok = greedy.r_percent == 0.0 && greedy.z_percent == 100.0;

    const BaselineRow orth = run_baseline(validation, Policy::orthogonal_reactive, timing);
    ok = ok && orth.r_percent == 100.0;
    const double expected_length =
        0.5 * (scenario.packet_length_slots_min + scenario.packet_length_slots_max);
    const double expected_z =
        100.0 * expected_length / static_cast<double>(orth.horizon_slots);
    ok = ok && std::abs(orth.z_percent - expected_z) <= 0.5;  // percentage points
    criterion(3, "prediction-free baselines sit at the two ends of the trade-off", ok);
}

// 4. Widening the guard never costs reliability: across the default
//    100-point sweep grid, reliability is nondecreasing row over row.
void criterion_4(const std::vector<DataPoint>& validation, const TimingConfig& timing) {
    StochasticModelSpec spec;
    spec.true_positive_rate = 0.9;
    spec.false_positive_rate = 0.05;
    spec.rt_bias_frames.assign(16, 0.0);
    spec.rt_std_frames.assign(16, 1.0);
    spec.seed = 777;
    const auto preds = predictions_of(validation, spec);
    const auto rows = run_sweep(validation, preds, default_sweep_grid(), timing);
    bool ok = rows.size() == 100;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ok = ok && rows[i].er_percent >= rows[i - 1].er_percent;
    }
    ok = ok && rows.front().er_percent < rows.back().er_percent;
    criterion(4, "reliability is monotone in the guard width across the default grid", ok);
}

// 5. A strong detector profile (tpr 0.99, fpr 0.02, request-time noise 0.3
//    frames) lands at the advertised operating point with a one-frame guard:
//    reliability 99 +/- 1, precision 0.98 +/- 0.01, recall 0.99 +/- 0.01.
void criterion_5(const std::vector<DataPoint>& validation, const TimingConfig& timing) {
    StochasticModelSpec spec;
    spec.true_positive_rate = 0.99;
    spec.false_positive_rate = 0.02;
    spec.rt_bias_frames.assign(16, 0.0);
    spec.rt_std_frames.assign(16, 0.3);
    spec.seed = 31415;
    const auto preds = predictions_of(validation, spec);
    const MetricsReport report = evaluate_predictions(validation, preds, 1.0, timing);

    bool ok = std::abs(report.er_percent - 99.0) <= 1.0;
    ok = ok && report.classification.precision.has_value();
    ok = ok && std::abs(*report.classification.precision - 0.98) <= 0.01;
    ok = ok && report.classification.recall.has_value();
    ok = ok && std::abs(*report.classification.recall - 0.99) <= 0.01;
    criterion(5, "a strong detector reaches ~99% reliability at ~98% precision", ok);
}

// 6. Error profiles reproduce the qualitative sweep shapes: once reliability
//    saturates, widening the guard only burns utilization (strictly), with
//    the saturation level set by the detector (one profile above 97%, the
//    weaker one at 58 +/- 2).
void criterion_6(const std::vector<DataPoint>& validation, const TimingConfig& timing) {
    StochasticModelSpec strong;
    strong.true_positive_rate = 0.99;
    strong.false_positive_rate = 0.02;
    strong.rt_bias_frames.resize(16);
    for (int n = 1; n <= 16; ++n) strong.rt_bias_frames[n - 1] = -0.12 * n;
    strong.rt_std_frames.assign(16, 0.35);
    strong.seed = 1001;

    StochasticModelSpec weak;
    weak.true_positive_rate = 0.58;
    weak.false_positive_rate = 0.1433;
    weak.rt_bias_frames.resize(16);
    for (int n = 1; n <= 16; ++n) weak.rt_bias_frames[n - 1] = 1.5 - 0.25 * n;
    weak.rt_std_frames.assign(16, 1.2);
    weak.seed = 1002;

    bool ok = true;
    double saturation_strong = 0.0;
    double saturation_weak = 0.0;
    for (int profile = 0; profile < 2; ++profile) {
        const StochasticModelSpec& spec = profile == 0 ? strong : weak;
        const auto preds = predictions_of(validation, spec);
        const auto rows = run_sweep(validation, preds, default_sweep_grid(), timing);

        double max_er = 0.0;
        for (const SweepRow& row : rows) {
            max_er = std::max(max_er, row.er_percent);
        }
        std::size_t first_max = 0;
        while (rows[first_max].er_percent != max_er) {
            ++first_max;
        }
        for (std::size_t i = first_max + 1; i < rows.size(); ++i) {
            ok = ok && rows[i].ez_percent < rows[i - 1].ez_percent;  // strictly
        }
        (profile == 0 ? saturation_strong : saturation_weak) = max_er;
    }
    ok = ok && saturation_strong > 97.0;
    ok = ok && std::abs(saturation_weak - 58.0) <= 2.0;
    criterion(6, "after reliability saturates, wider guards only burn utilization", ok);
}

// 7. Five independent 80%-accurate per-frame votes reach 94.208% window
//    accuracy by majority: exactly by enumeration (1e-9) and empirically
//    over 100000 trials (+/- 0.01).
void criterion_7() {
    double exact = 0.0;
    for (unsigned mask = 0; mask < 32; ++mask) {
        double weight = 1.0;
        std::array<ServiceType, 5> votes{};
        for (unsigned f = 0; f < 5; ++f) {
            const bool correct = (mask >> f) & 1u;
            weight *= correct ? 0.8 : 0.2;
            votes[f] = correct ? ServiceType::urll : ServiceType::embb;
        }
        if (predict_majority_vote(votes) == ServiceType::urll) {
            exact += weight;
        }
    }
    bool ok = std::abs(exact - 0.94208) <= 1e-9;

    RandomStream stream(substream_seed(20260823, 7));
    const int trials = 100000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        std::array<ServiceType, 5> votes{};
        for (auto& v : votes) {
            v = stream.bernoulli(0.8) ? ServiceType::urll : ServiceType::embb;
        }
        hits += predict_majority_vote(votes) == ServiceType::urll ? 1 : 0;
    }
    ok = ok && std::abs(static_cast<double>(hits) / trials - 0.94208) <= 0.01;
    criterion(7, "majority voting over five 80% frames yields 94.208% window accuracy", ok);
}

// 8. Grouped request-time statistics are exact in the two analytically
//    trivial cases: a constant forecast (dyadic 3.5) and the oracle.
void criterion_8(const std::vector<DataPoint>& validation) {
    std::vector<std::pair<int, double>> constant_pairs;
    std::vector<std::pair<int, double>> oracle_pairs;
    for (const DataPoint& dp : validation) {
        if (dp.service_type != ServiceType::urll) {
            continue;
        }
        constant_pairs.emplace_back(dp.request_time_frames, 3.5);
        oracle_pairs.emplace_back(dp.request_time_frames,
                                  static_cast<double>(dp.request_time_frames));
    }
    bool ok = true;
    for (const RtGroupStats& g : grouped_rt_stats(constant_pairs)) {
        ok = ok && g.mean == 3.5 && g.mean_sq_dev == 0.0 && g.std_dev == 0.0;
    }
    const auto oracle_groups = grouped_rt_stats(oracle_pairs);
    ok = ok && oracle_groups.size() == 16;
    for (const RtGroupStats& g : oracle_groups) {
        ok = ok && g.mean == static_cast<double>(g.request_time_frames);
        ok = ok && g.mean_sq_dev == 0.0 && g.std_dev == 0.0;
    }
    criterion(8, "grouped request-time statistics are exact for constant and oracle forecasts",
              ok);
}

// 9. The command-line pipeline (generate, predict, sweep) is byte-identical
//    across two runs with the same config.
void criterion_9() {
    const std::string cli = SVCID_CLI_PATH;
    const std::string cfg_path = "acc9_config.json";
    {
        std::ofstream cfgf(cfg_path, std::ios::binary);
        cfgf << R"({"scenario": {"num_raw_sequences": 600, "seed": 11},
                    "predictor": {"model": "stochastic",
                                  "stochastic": {"tpr": 0.9, "fpr": 0.05,
                                                 "rt_bias_frames": -0.1,
                                                 "rt_std_frames": 0.6, "seed": 5}},
                    "sweep": {"grid": {"start": 0.5, "stop": 5.0, "step": 0.5}}})";
    }
    bool ok = true;
    for (const char* tag : {"a", "b"}) {
        const std::string t = tag;
        ok = ok && std::system((cli + " --config " + cfg_path + " generate --out acc9_" + t +
                                "_data.csv")
                                   .c_str()) == 0;
        ok = ok && std::system((cli + " --config " + cfg_path + " predict --dataset acc9_" + t +
                                "_data.csv --out acc9_" + t + "_trace.csv")
                                   .c_str()) == 0;
        ok = ok && std::system((cli + " --config " + cfg_path + " sweep --dataset acc9_" + t +
                                "_data.csv --trace acc9_" + t + "_trace.csv --out acc9_" + t +
                                "_sweep.csv")
                                   .c_str()) == 0;
    }
    for (const char* name : {"data", "trace", "sweep"}) {
        const std::string a = slurp(std::string("acc9_a_") + name + ".csv");
        const std::string b = slurp(std::string("acc9_b_") + name + ".csv");
        ok = ok && !a.empty() && a == b;
    }
    for (const char* f :
         {"acc9_config.json", "acc9_a_data.csv", "acc9_a_trace.csv", "acc9_a_sweep.csv",
          "acc9_b_data.csv", "acc9_b_trace.csv", "acc9_b_sweep.csv"}) {
        std::remove(f);
    }
    criterion(9, "the generate/predict/sweep pipeline is byte-identical across runs", ok);
}

}  // namespace

int main() {
    const auto started = std::chrono::steady_clock::now();
    const TimingConfig timing;
    const ScenarioConfig scenario;
    const std::vector<DataPoint> full = build_dataset(scenario, timing);
    const SplitResult sp = split(full, 0.7, 7);
    const std::vector<DataPoint>& validation = sp.validation;

    criterion_1(full, validation, timing, started);
    criterion_2(timing);
    criterion_3(validation, scenario, timing);
    criterion_4(validation, timing);
    criterion_5(validation, timing);
    criterion_6(validation, timing);
    criterion_7();
    criterion_8(validation);
    criterion_9();

    if (failures == 0) {
        std::printf("all 9 criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", failures);
    }
    return failures;
}
