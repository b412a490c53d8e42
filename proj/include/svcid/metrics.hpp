#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "svcid/scenario.hpp"
#include "svcid/scheduler.hpp"

namespace svcid {

/// Success events for one data point: the service type was correctly
/// detected as URLL, and the true packet start fell inside the guard.
struct EventFlags {
    bool type_hit = false;        ///< URLL point predicted as URLL
    bool start_in_guard = false;  ///< true start inside the planned guard

    friend bool operator==(const EventFlags&, const EventFlags&) = default;
};

/// Accounting parameters for the closed-form metrics: a per-point horizon
/// and the guard geometry.
struct MetricsConfig {
    SlotCount horizon_slots = 1;
    GuardConfig guard;
};

/// Evaluate both events against the guard planned for this prediction.
/// Without a guard the start trivially cannot be covered.
inline EventFlags events(const DataPoint& dp, const Prediction& pred,
                         const std::optional<GuardInterval>& guard) {
    EventFlags flags;
    flags.type_hit =
        dp.service_type == ServiceType::urll && pred.service_type == ServiceType::urll;
    flags.start_in_guard = guard.has_value() && guard->contains(dp.packet_start_slot);
    return flags;
}

/// Per-point reliability indicator: 1 iff the type was detected and the
/// start was covered.
inline int reliability_point(EventFlags flags) {
    return flags.type_hit && flags.start_in_guard ? 1 : 0;
}

/// Closed-form per-point utilization.
///
/// Charges the idle slots a detection costs over the horizon: a full guard
/// (2*half_width+1) when the start escapes it, or the pre-start stretch
/// (start - predicted_start + half_width) when it is covered. A missed
/// detection reserves nothing, so nothing idles. The charge assumes the
/// guard lies inside the horizon; the result is clamped to [0, 1].
inline double utilization_point(EventFlags flags, const DataPoint& dp,
                                SlotIndex predicted_start, const MetricsConfig& cfg) {
    const SlotCount half_width = cfg.guard.half_width_slots;
    SlotCount charge = 0;
    if (flags.type_hit && !flags.start_in_guard) {
        charge = 2 * half_width + 1;
    } else if (flags.type_hit && flags.start_in_guard) {
        charge = std::max<SlotCount>(0, dp.packet_start_slot - predicted_start + half_width);
    }
    const double z =
        1.0 - static_cast<double>(charge) / static_cast<double>(cfg.horizon_slots);
    return std::clamp(z, 0.0, 1.0);
}

/// Everything the aggregate metrics need about one evaluated data point.
struct PointOutcome {
    std::uint64_t point_id = 0;
    ServiceType service_type = ServiceType::embb;
    EventFlags flags;
    double utilization = 1.0;
};

namespace detail {

inline std::vector<PointOutcome> urll_sorted_by_id(std::vector<PointOutcome> outcomes) {
    std::erase_if(outcomes,
                  [](const PointOutcome& o) { return o.service_type != ServiceType::urll; });
    if (outcomes.empty()) {
        throw std::domain_error("metric undefined: no true-URLL data points");
    }
    // Fixed accumulation order (ascending point id) for bit-reproducibility.
    std::sort(outcomes.begin(), outcomes.end(),
              [](const PointOutcome& a, const PointOutcome& b) {
                  return a.point_id < b.point_id;
              });
    return outcomes;
}

}  // namespace detail

/// Expected reliability in percent: share of true-URLL points whose packet
/// was detected and covered. Input order does not matter.
inline double expected_reliability(std::vector<PointOutcome> outcomes) {
    const std::vector<PointOutcome> urll = detail::urll_sorted_by_id(std::move(outcomes));
    std::int64_t hits = 0;
    for (const PointOutcome& o : urll) {
        hits += reliability_point(o.flags);
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(urll.size());
}

/// Expected utilization in percent: mean per-point utilization over the
/// true-URLL points. Input order does not matter.
inline double expected_utilization(std::vector<PointOutcome> outcomes) {
    const std::vector<PointOutcome> urll = detail::urll_sorted_by_id(std::move(outcomes));
    double sum = 0.0;
    for (const PointOutcome& o : urll) {
        sum += o.utilization;
    }
    return 100.0 * sum / static_cast<double>(urll.size());
}

struct TimelineMetrics {
    double r_percent = 0.0;  ///< successful packets among timelines that carry one
    double z_percent = 0.0;  ///< mean occupied share over all passed timelines
};

/// Slot-exact counterpart of the closed-form metrics, computed from
/// timelines alone.
inline TimelineMetrics timeline_metrics(const std::vector<SlotTimeline>& timelines) {
    if (timelines.empty()) {
        throw std::invalid_argument("timeline_metrics: no timelines");
    }
    std::int64_t packets = 0;
    std::int64_t successes = 0;
    double occupied_share_sum = 0.0;
    for (const SlotTimeline& tl : timelines) {
        if (tl.has_packet) {
            ++packets;
            successes += tl.packet_success ? 1 : 0;
        }
        occupied_share_sum += static_cast<double>(tl.occupied_slots()) /
                              static_cast<double>(tl.horizon);
    }
    if (packets == 0) {
        throw std::domain_error("timeline_metrics: no URLL packets among the timelines");
    }
    TimelineMetrics m;
    m.r_percent = 100.0 * static_cast<double>(successes) / static_cast<double>(packets);
    m.z_percent = 100.0 * occupied_share_sum / static_cast<double>(timelines.size());
    return m;
}

/// Confusion counts and derived rates with URLL as the positive class.
/// Rates whose denominator is empty are reported absent, not zero.
struct ClassificationMetrics {
    std::int64_t true_positives = 0;
    std::int64_t false_positives = 0;
    std::int64_t true_negatives = 0;
    std::int64_t false_negatives = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    double accuracy = 0.0;
};

inline ClassificationMetrics classification_metrics(
    const std::vector<std::pair<ServiceType, ServiceType>>& truth_prediction_pairs) {
    if (truth_prediction_pairs.empty()) {
        throw std::invalid_argument("classification_metrics: empty input");
    }
    ClassificationMetrics m;
    for (const auto& [truth, predicted] : truth_prediction_pairs) {
        const bool actual = truth == ServiceType::urll;
        const bool flagged = predicted == ServiceType::urll;
        if (actual && flagged) ++m.true_positives;
        if (!actual && flagged) ++m.false_positives;
        if (!actual && !flagged) ++m.true_negatives;
        if (actual && !flagged) ++m.false_negatives;
    }
    if (m.true_positives + m.false_positives > 0) {
        m.precision = static_cast<double>(m.true_positives) /
                      static_cast<double>(m.true_positives + m.false_positives);
    }
    if (m.true_positives + m.false_negatives > 0) {
        m.recall = static_cast<double>(m.true_positives) /
                   static_cast<double>(m.true_positives + m.false_negatives);
    }
    m.accuracy = static_cast<double>(m.true_positives + m.true_negatives) /
                 static_cast<double>(truth_prediction_pairs.size());
    return m;
}

/// Request-time forecast statistics for one ground-truth group.
struct RtGroupStats {
    int request_time_frames = 0;  ///< ground-truth future frames of the group
    std::int64_t count = 0;
    double mean = 0.0;
    double mean_sq_dev = 0.0;  ///< mean squared deviation around the group mean
    double std_dev = 0.0;      ///< sqrt(mean_sq_dev); the headline spread
};

/// Group request-time forecasts by their ground truth and compute the mean
/// and spread per group. Groups come back sorted; empty groups do not occur.
inline std::vector<RtGroupStats> grouped_rt_stats(
    std::vector<std::pair<int, double>> truth_prediction_pairs) {
    // Sort by (group, value) so permuting the input cannot change any sum.
    std::sort(truth_prediction_pairs.begin(), truth_prediction_pairs.end());
    std::vector<RtGroupStats> groups;
    std::size_t i = 0;
    while (i < truth_prediction_pairs.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < truth_prediction_pairs.size() &&
               truth_prediction_pairs[j].first == truth_prediction_pairs[i].first) {
            sum += truth_prediction_pairs[j].second;
            ++j;
        }
        RtGroupStats g;
        g.request_time_frames = truth_prediction_pairs[i].first;
        g.count = static_cast<std::int64_t>(j - i);
        g.mean = sum / static_cast<double>(g.count);
        double sq = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            const double d = truth_prediction_pairs[k].second - g.mean;
            sq += d * d;
        }
        g.mean_sq_dev = sq / static_cast<double>(g.count);
        g.std_dev = std::sqrt(g.mean_sq_dev);
        groups.push_back(g);
        i = j;
    }
    return groups;
}

/// Full evaluation of one (predictor, guard width) configuration.
struct MetricsReport {
    double guard_half_width_frames = 0.0;
    SlotCount guard_half_width_slots = 0;
    SlotCount horizon_slots = 0;
    Policy policy = Policy::proactive_guard;

    std::int64_t points = 0;  ///< evaluated data points
    std::int64_t urll_points = 0;
    std::int64_t embb_points = 0;

    double er_percent = 0.0;  ///< expected reliability (closed form)
    double ez_percent = 0.0;  ///< expected utilization (closed form)
    ClassificationMetrics classification;
    std::vector<RtGroupStats> grouped_rt;

    // Extended accounting beyond the headline averages.
    std::int64_t false_positive_guards = 0;     ///< guards planned on true-eMBB points
    std::int64_t fp_guard_waste_slots = 0;      ///< slots idled by those guards
    std::optional<TimelineMetrics> timeline;    ///< slot-exact cross-check, URLL points
};

}  // namespace svcid
