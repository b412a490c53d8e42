#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "svcid/rng.hpp"
#include "svcid/timing.hpp"

namespace svcid {

enum class ServiceType : int { embb = 0, urll = 1 };

inline int to_int(ServiceType t) { return static_cast<int>(t); }

inline ServiceType service_type_from_int(int v) {
    if (v != 0 && v != 1) {
        throw std::invalid_argument("service type must be 0 (eMBB) or 1 (URLL), got " +
                                    std::to_string(v));
    }
    return static_cast<ServiceType>(v);
}

/// Parameters of the abstract scenario generator: trajectories of one user
/// approaching a device that is dedicated to either URLL or eMBB traffic.
struct ScenarioConfig {
    std::size_t num_raw_sequences = 4240;
    int length_frames_min = 6;
    int length_frames_max = 21;
    int observation_window_frames = 5;  ///< frames a predictor observes before forecasting
    double urll_probability = 0.5;
    int packet_length_slots_min = 1;
    int packet_length_slots_max = 20;
    bool jitter_within_frame = false;  ///< uniform sub-frame offset on the packet start
    std::uint64_t seed = 42;

    /// Largest possible number of future frames between the end of an
    /// observation window and the request.
    int max_future_frames() const { return length_frames_max - observation_window_frames; }

    void validate() const {
        if (num_raw_sequences == 0) {
            throw std::invalid_argument("scenario: num_raw_sequences must be >= 1");
        }
        if (observation_window_frames < 1) {
            throw std::invalid_argument("scenario: observation window must be >= 1 frame");
        }
        if (length_frames_min > length_frames_max) {
            throw std::invalid_argument("scenario: empty sequence length range");
        }
        if (length_frames_min < observation_window_frames + 1) {
            throw std::invalid_argument(
                "scenario: min sequence length must be >= observation window + 1 so every "
                "sequence yields a data point");
        }
        if (!(urll_probability >= 0.0 && urll_probability <= 1.0)) {
            throw std::invalid_argument("scenario: urll_probability must be in [0, 1]");
        }
        if (packet_length_slots_min < 1 || packet_length_slots_min > packet_length_slots_max) {
            throw std::invalid_argument("scenario: bad packet length range");
        }
    }
};

/// One trajectory toward a device, before slicing.
struct RawSequence {
    std::uint64_t id = 0;  ///< 1-based
    int length_frames = 0;
    ServiceType service_type = ServiceType::embb;
    int packet_length_slots = 1;

    friend bool operator==(const RawSequence&, const RawSequence&) = default;
};

/// One labeled observation window cut from a raw sequence.
struct DataPoint {
    std::uint64_t id = 0;      ///< 1-based, unique within a dataset ("u" in the file schema)
    std::uint64_t raw_id = 0;  ///< parent sequence
    int window_end_frame = 0;  ///< frame where the observation window ends (in-memory only)
    ServiceType service_type = ServiceType::embb;
    int request_time_frames = 0;      ///< future frames until the request; >= 1
    SlotIndex packet_start_slot = 0;  ///< first slot of the packet ("x" in the file schema)
    int packet_length_slots = 1;

    friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

namespace detail {

/// All randomness of sequence `id` comes from its own substream, so the
/// sequence is the same regardless of how many others are generated.
inline RawSequence make_sequence(const ScenarioConfig& config, std::uint64_t id) {
    RandomStream stream = substream(config.seed, id);
    RawSequence seq;
    seq.id = id;
    seq.length_frames = static_cast<int>(
        stream.uniform_int(config.length_frames_min, config.length_frames_max));
    seq.service_type =
        stream.bernoulli(config.urll_probability) ? ServiceType::urll : ServiceType::embb;
    seq.packet_length_slots = static_cast<int>(
        stream.uniform_int(config.packet_length_slots_min, config.packet_length_slots_max));
    return seq;
}

// Distinct key spaces for the jitter and split streams.
constexpr std::uint64_t kJitterStreamTag = 0x6A69747465720001ull;
constexpr std::uint64_t kSplitStreamTag = 0x73706C69740002ull;

}  // namespace detail

/// Generate the configured number of raw sequences, deterministically from
/// the config seed.
inline std::vector<RawSequence> generate(const ScenarioConfig& config) {
    config.validate();
    std::vector<RawSequence> sequences;
    sequences.reserve(config.num_raw_sequences);
    for (std::uint64_t id = 1; id <= config.num_raw_sequences; ++id) {
        sequences.push_back(detail::make_sequence(config, id));
    }
    return sequences;
}

/// Slice a raw sequence with a window that moves one frame at a time.
///
/// A sequence of L frames yields exactly L - W data points (W = observation
/// window): windows ending at frames W, W+1, ..., L-1, with request times
/// counting down from L-W to 1. The packet begins at the first slot after
/// the last future frame: request_time * slots_per_frame + 1.
inline std::vector<DataPoint> slice(const RawSequence& raw, int observation_window_frames,
                                    const TimingConfig& timing,
                                    std::uint64_t first_point_id = 1) {
    if (observation_window_frames < 1) {
        throw std::invalid_argument("slice: observation window must be >= 1 frame");
    }
    if (raw.length_frames <= observation_window_frames) {
        throw std::invalid_argument("slice: sequence of " + std::to_string(raw.length_frames) +
                                    " frames is too short for a " +
                                    std::to_string(observation_window_frames) +
                                    "-frame window plus a future frame");
    }
    std::vector<DataPoint> points;
    points.reserve(static_cast<std::size_t>(raw.length_frames - observation_window_frames));
    std::uint64_t id = first_point_id;
    for (int end = observation_window_frames; end < raw.length_frames; ++end, ++id) {
        DataPoint dp;
        dp.id = id;
        dp.raw_id = raw.id;
        dp.window_end_frame = end;
        dp.service_type = raw.service_type;
        dp.request_time_frames = raw.length_frames - end;
        dp.packet_start_slot =
            static_cast<SlotIndex>(dp.request_time_frames) * timing.slots_per_frame() + 1;
        dp.packet_length_slots = raw.packet_length_slots;
        points.push_back(dp);
    }
    return points;
}

/// Generate and slice in one step, assigning consecutive 1-based point ids.
/// With jitter_within_frame set, each packet start gains a uniform offset in
/// {0, ..., slots_per_frame-1} drawn from the point's own substream.
inline std::vector<DataPoint> build_dataset(const ScenarioConfig& config,
                                            const TimingConfig& timing) {
    const std::vector<RawSequence> sequences = generate(config);
    std::vector<DataPoint> points;
    std::uint64_t next_id = 1;
    for (const RawSequence& raw : sequences) {
        std::vector<DataPoint> sliced =
            slice(raw, config.observation_window_frames, timing, next_id);
        next_id += sliced.size();
        points.insert(points.end(), sliced.begin(), sliced.end());
    }
    if (config.jitter_within_frame) {
        for (DataPoint& dp : points) {
            RandomStream stream = substream(config.seed ^ detail::kJitterStreamTag, dp.id);
            dp.packet_start_slot +=
                static_cast<SlotIndex>(stream.uniform_below(
                    static_cast<std::uint64_t>(timing.slots_per_frame())));
        }
    }
    return points;
}

struct SplitResult {
    std::vector<DataPoint> train;
    std::vector<DataPoint> validation;
};

/// Deterministic shuffled split; |train| = round(fraction * n). Both halves
/// come back sorted by point id.
inline SplitResult split(const std::vector<DataPoint>& points, double train_fraction,
                         std::uint64_t seed) {
    if (points.empty()) {
        throw std::invalid_argument("split: empty dataset");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("split: train fraction must be in (0, 1)");
    }
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    // Fisher-Yates with our own stream; std::shuffle is not pinned by the standard.
    RandomStream stream(substream_seed(seed, detail::kSplitStreamTag));
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(stream.uniform_below(i + 1));
        std::swap(order[i], order[j]);
    }
    const auto train_size = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(points.size())));

    SplitResult result;
    result.train.reserve(train_size);
    result.validation.reserve(points.size() - train_size);
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < train_size ? result.train : result.validation).push_back(points[order[i]]);
    }
    auto by_id = [](const DataPoint& a, const DataPoint& b) { return a.id < b.id; };
    std::sort(result.train.begin(), result.train.end(), by_id);
    std::sort(result.validation.begin(), result.validation.end(), by_id);
    return result;
}

}  // namespace svcid
