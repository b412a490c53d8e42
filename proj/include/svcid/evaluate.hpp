#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "svcid/metrics.hpp"
#include "svcid/predictor.hpp"
#include "svcid/scenario.hpp"
#include "svcid/scheduler.hpp"
#include "svcid/timing.hpp"

namespace svcid {

struct EvalOptions {
    Policy policy = Policy::proactive_guard;
    std::optional<SlotCount> horizon_slots;  ///< override the dataset-derived default
    bool with_timelines = false;             ///< also run the slot-exact cross-check
};

/// Smallest horizon that keeps every packet and every on-time guard inside
/// the accounting window for the given data points. Grows with the guard so
/// widening it never truncates the interval it is supposed to reserve.
inline SlotCount default_horizon_slots(std::span<const DataPoint> points,
                                       SlotCount guard_half_width_slots,
                                       const TimingConfig& timing) {
    if (points.empty()) {
        throw std::invalid_argument("default_horizon_slots: no data points");
    }
    SlotCount max_rt_slots = 0;
    SlotCount max_length = 0;
    SlotIndex max_packet_end = 0;
    for (const DataPoint& dp : points) {
        max_rt_slots = std::max(
            max_rt_slots, frames_to_slots(static_cast<double>(dp.request_time_frames), timing));
        max_length = std::max<SlotCount>(max_length, dp.packet_length_slots);
        max_packet_end =
            std::max<SlotIndex>(max_packet_end, dp.packet_start_slot + dp.packet_length_slots - 1);
    }
    return std::max<SlotCount>(max_rt_slots + 2 * guard_half_width_slots + max_length,
                               max_packet_end);
}

namespace detail {

inline void check_horizon(SlotCount horizon, std::span<const DataPoint> points,
                          SlotCount guard_half_width_slots, const TimingConfig& timing) {
    for (const DataPoint& dp : points) {
        const SlotIndex packet_end = dp.packet_start_slot + dp.packet_length_slots - 1;
        if (horizon < packet_end) {
            throw std::invalid_argument("horizon of " + std::to_string(horizon) +
                                        " slots does not cover the packet of point " +
                                        std::to_string(dp.id) + " ending at slot " +
                                        std::to_string(packet_end));
        }
        const SlotCount needed =
            frames_to_slots(static_cast<double>(dp.request_time_frames), timing) +
            guard_half_width_slots;
        if (horizon < needed) {
            throw std::invalid_argument("horizon of " + std::to_string(horizon) +
                                        " slots does not cover the on-time guard of point " +
                                        std::to_string(dp.id) + " (needs " +
                                        std::to_string(needed) + ")");
        }
    }
}

}  // namespace detail

/// Score one prediction per data point under a guard of the given
/// half-width. Predictions align with `points` by index.
inline MetricsReport evaluate_predictions(const std::vector<DataPoint>& points,
                                          const std::vector<Prediction>& predictions,
                                          double guard_half_width_frames,
                                          const TimingConfig& timing,
                                          const EvalOptions& opts = {}) {
    if (points.empty()) {
        throw std::invalid_argument("evaluate_predictions: no data points");
    }
    if (points.size() != predictions.size()) {
        throw std::invalid_argument("evaluate_predictions: " + std::to_string(points.size()) +
                                    " points but " + std::to_string(predictions.size()) +
                                    " predictions");
    }
    const GuardConfig guard = GuardConfig::from_frames(guard_half_width_frames, timing);
    const SlotCount horizon = opts.horizon_slots.value_or(
        default_horizon_slots(points, guard.half_width_slots, timing));
    detail::check_horizon(horizon, points, guard.half_width_slots, timing);
    const MetricsConfig cfg{horizon, guard};

    MetricsReport report;
    report.guard_half_width_frames = guard.half_width_frames;
    report.guard_half_width_slots = guard.half_width_slots;
    report.horizon_slots = horizon;
    report.policy = opts.policy;
    report.points = static_cast<std::int64_t>(points.size());

    std::vector<PointOutcome> outcomes;
    outcomes.reserve(points.size());
    std::vector<std::pair<ServiceType, ServiceType>> type_pairs;
    type_pairs.reserve(points.size());
    std::vector<std::pair<int, double>> rt_pairs;
    std::vector<SlotTimeline> urll_timelines;

    for (std::size_t i = 0; i < points.size(); ++i) {
        const DataPoint& dp = points[i];
        const Prediction& pred = predictions[i];
        const std::optional<GuardInterval> planned = plan_guard(pred, guard, timing);
        const EventFlags flags = events(dp, pred, planned);

        PointOutcome outcome;
        outcome.point_id = dp.id;
        outcome.service_type = dp.service_type;
        outcome.flags = flags;
        outcome.utilization =
            utilization_point(flags, dp, predicted_start_slot(pred, timing), cfg);
        outcomes.push_back(outcome);

        type_pairs.emplace_back(dp.service_type, pred.service_type);
        if (dp.service_type == ServiceType::urll) {
            ++report.urll_points;
            rt_pairs.emplace_back(dp.request_time_frames, pred.request_time_frames);
            if (opts.with_timelines) {
                urll_timelines.push_back(build_timeline(dp, planned, opts.policy, horizon));
            }
        } else {
            ++report.embb_points;
            if (planned.has_value()) {
                ++report.false_positive_guards;
                const SlotIndex lo = std::max<SlotIndex>(1, planned->lo);
                const SlotIndex hi = std::min<SlotIndex>(horizon, planned->hi);
                report.fp_guard_waste_slots += std::max<SlotCount>(0, hi - lo + 1);
            }
        }
    }

    report.er_percent = expected_reliability(outcomes);
    report.ez_percent = expected_utilization(outcomes);
    report.classification = classification_metrics(type_pairs);
    report.grouped_rt = grouped_rt_stats(std::move(rt_pairs));
    if (opts.with_timelines) {
        report.timeline = timeline_metrics(urll_timelines);
    }
    return report;
}

/// One row of a guard-width sweep.
struct SweepRow {
    double guard_half_width_frames = 0.0;
    SlotCount guard_half_width_slots = 0;
    SlotCount horizon_slots = 0;
    double er_percent = 0.0;
    double ez_percent = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
    double accuracy = 0.0;
    std::int64_t fp_guard_waste_slots = 0;
};

/// Evaluate the same predictions across a grid of guard half-widths. The
/// grid must be nonnegative and strictly increasing. Each row uses its own
/// dataset-derived horizon unless an override is given.
inline std::vector<SweepRow> run_sweep(const std::vector<DataPoint>& points,
                                       const std::vector<Prediction>& predictions,
                                       const std::vector<double>& guard_grid_frames,
                                       const TimingConfig& timing,
                                       const EvalOptions& opts = {}) {
    if (guard_grid_frames.empty()) {
        throw std::invalid_argument("run_sweep: empty guard grid");
    }
    for (std::size_t i = 0; i < guard_grid_frames.size(); ++i) {
        if (!(guard_grid_frames[i] >= 0.0)) {
            throw std::invalid_argument("run_sweep: guard widths must be >= 0 frames");
        }
        if (i > 0 && !(guard_grid_frames[i] > guard_grid_frames[i - 1])) {
            throw std::invalid_argument("run_sweep: guard grid must be strictly increasing");
        }
    }
    EvalOptions row_opts = opts;
    row_opts.with_timelines = false;
    std::vector<SweepRow> rows;
    rows.reserve(guard_grid_frames.size());
    for (double tg : guard_grid_frames) {
        const MetricsReport report = evaluate_predictions(points, predictions, tg, timing, row_opts);
        SweepRow row;
        row.guard_half_width_frames = report.guard_half_width_frames;
        row.guard_half_width_slots = report.guard_half_width_slots;
        row.horizon_slots = report.horizon_slots;
        row.er_percent = report.er_percent;
        row.ez_percent = report.ez_percent;
        row.precision = report.classification.precision;
        row.recall = report.classification.recall;
        row.accuracy = report.classification.accuracy;
        row.fp_guard_waste_slots = report.fp_guard_waste_slots;
        rows.push_back(row);
    }
    return rows;
}

/// Reference point for one prediction-free eMBB discipline.
struct BaselineRow {
    Policy policy = Policy::orthogonal_reactive;
    SlotCount horizon_slots = 0;
    double r_percent = 0.0;
    double z_percent = 0.0;
};

/// Slot-exact score of a policy with no predictions and no guard, over the
/// URLL data points.
inline BaselineRow run_baseline(const std::vector<DataPoint>& points, Policy policy,
                                const TimingConfig& timing,
                                std::optional<SlotCount> horizon_slots = {}) {
    std::vector<DataPoint> urll;
    for (const DataPoint& dp : points) {
        if (dp.service_type == ServiceType::urll) {
            urll.push_back(dp);
        }
    }
    if (urll.empty()) {
        throw std::domain_error("run_baseline: no URLL data points");
    }
    const SlotCount horizon =
        horizon_slots.value_or(default_horizon_slots(urll, 0, timing));
    std::vector<SlotTimeline> timelines;
    timelines.reserve(urll.size());
    for (const DataPoint& dp : urll) {
        timelines.push_back(build_timeline(dp, std::nullopt, policy, horizon));
    }
    const TimelineMetrics m = timeline_metrics(timelines);
    BaselineRow row;
    row.policy = policy;
    row.horizon_slots = horizon;
    row.r_percent = m.r_percent;
    row.z_percent = m.z_percent;
    return row;
}

}  // namespace svcid
