#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "svcid/rng.hpp"
#include "svcid/scenario.hpp"

namespace svcid {

/// A (service type, request time) forecast for one data point. The request
/// time is in frames and only drives scheduling when the type is URLL.
struct Prediction {
    ServiceType service_type = ServiceType::embb;
    double request_time_frames = 0.0;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Calibrated error model emulating a trained classifier/regressor pair.
///
/// Type errors follow the configured detection rates; request-time errors
/// are additive Gaussian with a per-future-frame bias and spread, clamped
/// at zero. Per-group bias/spread tables are indexed by request time - 1.
struct StochasticModelSpec {
    double true_positive_rate = 1.0;   ///< P(predict URLL | URLL)
    double false_positive_rate = 0.0;  ///< P(predict URLL | eMBB)
    std::vector<double> rt_bias_frames = {0.0};
    std::vector<double> rt_std_frames = {0.0};
    std::uint64_t seed = 0;

    void validate() const {
        if (!(true_positive_rate >= 0.0 && true_positive_rate <= 1.0)) {
            throw std::invalid_argument("stochastic spec: tpr must be in [0, 1]");
        }
        if (!(false_positive_rate >= 0.0 && false_positive_rate <= 1.0)) {
            throw std::invalid_argument("stochastic spec: fpr must be in [0, 1]");
        }
        if (rt_bias_frames.empty() || rt_std_frames.empty()) {
            throw std::invalid_argument("stochastic spec: empty bias/std table");
        }
        for (double s : rt_std_frames) {
            if (!(s >= 0.0)) {
                throw std::invalid_argument("stochastic spec: std entries must be >= 0");
            }
        }
    }

    double bias_for(int request_time_frames) const {
        return table_entry(rt_bias_frames, request_time_frames, "bias");
    }
    double std_for(int request_time_frames) const {
        return table_entry(rt_std_frames, request_time_frames, "std");
    }

private:
    static double table_entry(const std::vector<double>& table, int request_time_frames,
                              const char* name) {
        if (request_time_frames < 1 ||
            static_cast<std::size_t>(request_time_frames) > table.size()) {
            throw std::invalid_argument(
                "stochastic spec: request time " + std::to_string(request_time_frames) +
                " frames outside the " + name + " table domain [1, " +
                std::to_string(table.size()) + "]");
        }
        return table[static_cast<std::size_t>(request_time_frames - 1)];
    }
};

/// Ideal predictor: returns the ground-truth labels.
inline Prediction predict_oracle(const DataPoint& dp) {
    return Prediction{dp.service_type, static_cast<double>(dp.request_time_frames)};
}

/// Draw a forecast for one data point from the error model.
///
/// All randomness comes from the substream keyed by (spec.seed, point id):
/// first the type draw, then one normal for the request time. Removing or
/// reordering data points never changes another point's prediction.
inline Prediction predict_stochastic(const DataPoint& dp, const StochasticModelSpec& spec) {
    spec.validate();
    const double bias = spec.bias_for(dp.request_time_frames);
    const double sigma = spec.std_for(dp.request_time_frames);

    RandomStream stream = substream(spec.seed, dp.id);
    const double detect_prob = dp.service_type == ServiceType::urll
                                   ? spec.true_positive_rate
                                   : spec.false_positive_rate;
    Prediction pred;
    pred.service_type = stream.bernoulli(detect_prob) ? ServiceType::urll : ServiceType::embb;
    const double rt =
        static_cast<double>(dp.request_time_frames) + bias + sigma * stream.normal();
    pred.request_time_frames = std::max(0.0, rt);
    return pred;
}

/// Per-frame type labels combined by majority vote. The window must have odd
/// length so a tie cannot occur.
inline ServiceType predict_majority_vote(std::span<const ServiceType> frame_labels) {
    if (frame_labels.empty()) {
        throw std::invalid_argument("majority vote: empty label window");
    }
    if (frame_labels.size() % 2 == 0) {
        throw std::invalid_argument("majority vote: window length must be odd, got " +
                                    std::to_string(frame_labels.size()));
    }
    std::size_t urll_votes = 0;
    for (ServiceType label : frame_labels) {
        if (label == ServiceType::urll) {
            ++urll_votes;
        }
    }
    return 2 * urll_votes > frame_labels.size() ? ServiceType::urll : ServiceType::embb;
}

/// One line of a trace file: the single forecast for data point `point_id`.
struct TraceRecord {
    std::uint64_t point_id = 0;
    Prediction prediction;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Exactly one forecast per covered data point, ordered by point id.
struct PredictionTrace {
    std::vector<TraceRecord> records;

    friend bool operator==(const PredictionTrace&, const PredictionTrace&) = default;
};

/// Fails on duplicate ids: a trace carries a single prediction per packet.
inline void check_unique_ids(const PredictionTrace& trace) {
    std::unordered_map<std::uint64_t, std::size_t> seen;
    seen.reserve(trace.records.size());
    for (const TraceRecord& rec : trace.records) {
        if (!seen.emplace(rec.point_id, 1).second) {
            throw std::invalid_argument("trace: duplicate prediction for data point " +
                                        std::to_string(rec.point_id));
        }
    }
}

inline PredictionTrace trace_from_oracle(const std::vector<DataPoint>& points) {
    PredictionTrace trace;
    trace.records.reserve(points.size());
    for (const DataPoint& dp : points) {
        trace.records.push_back({dp.id, predict_oracle(dp)});
    }
    return trace;
}

inline PredictionTrace trace_from_stochastic(const std::vector<DataPoint>& points,
                                             const StochasticModelSpec& spec) {
    spec.validate();
    PredictionTrace trace;
    trace.records.reserve(points.size());
    for (const DataPoint& dp : points) {
        trace.records.push_back({dp.id, predict_stochastic(dp, spec)});
    }
    return trace;
}

/// Result of matching a trace against a set of data points.
struct TraceApplication {
    std::vector<std::pair<DataPoint, Prediction>> pairs;  ///< covered points, dataset order
    std::vector<std::uint64_t> uncovered_ids;             ///< points with no prediction
    std::vector<std::uint64_t> unmatched_ids;             ///< records with no point here

    bool covers_all() const { return uncovered_ids.empty(); }
};

/// Pair each data point with its single prediction. Points without a record
/// and records without a point are reported, not dropped silently; callers
/// that evaluate must refuse when coverage is incomplete.
inline TraceApplication apply_trace(const PredictionTrace& trace,
                                    const std::vector<DataPoint>& points) {
    check_unique_ids(trace);
    std::unordered_map<std::uint64_t, const Prediction*> by_id;
    by_id.reserve(trace.records.size());
    for (const TraceRecord& rec : trace.records) {
        by_id.emplace(rec.point_id, &rec.prediction);
    }

    TraceApplication result;
    result.pairs.reserve(points.size());
    std::unordered_map<std::uint64_t, bool> matched;
    matched.reserve(trace.records.size());
    for (const DataPoint& dp : points) {
        auto it = by_id.find(dp.id);
        if (it == by_id.end()) {
            result.uncovered_ids.push_back(dp.id);
        } else {
            result.pairs.emplace_back(dp, *it->second);
            matched[dp.id] = true;
        }
    }
    for (const TraceRecord& rec : trace.records) {
        if (!matched.count(rec.point_id)) {
            result.unmatched_ids.push_back(rec.point_id);
        }
    }
    return result;
}

}  // namespace svcid
