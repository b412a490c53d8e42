#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace svcid {

using SlotIndex = std::int64_t;   ///< 1-based wireless slot index
using SlotCount = std::int64_t;
using FrameIndex = std::int64_t;  ///< 1-based video frame index

/// Shared time base between the camera (video frames) and the radio
/// (wireless slots).
///
/// A frame spans an integer number of slots and the two clocks are
/// synchronized: frame n begins exactly at slot (n-1)*slots_per_frame + 1.
/// Immutable value type; safe to share across threads.
class TimingConfig {
public:
    /// Default: 30 fps camera, 33 slots per frame (slot ~= 1.01 ms).
    TimingConfig() : TimingConfig(1.0 / 30.0 / 33.0, 1.0 / 30.0) {}

    /// Explicit slot and frame durations. The ratio frame/slot must be an
    /// integer within 1e-9 and the slot must not be longer than the frame.
    TimingConfig(double slot_seconds, double frame_seconds)
        : slot_seconds_(slot_seconds), frame_seconds_(frame_seconds) {
        if (!(slot_seconds > 0.0) || !std::isfinite(slot_seconds) ||
            !(frame_seconds > 0.0) || !std::isfinite(frame_seconds)) {
            throw std::invalid_argument("TimingConfig: durations must be finite and > 0");
        }
        if (slot_seconds > frame_seconds) {
            throw std::invalid_argument("TimingConfig: slot duration exceeds frame duration");
        }
        const double ratio = frame_seconds / slot_seconds;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9 || rounded < 1.0) {
            throw std::invalid_argument(
                "TimingConfig: frame/slot ratio " + std::to_string(ratio) +
                " is not a positive integer within 1e-9");
        }
        slots_per_frame_ = static_cast<SlotCount>(rounded);
    }

    /// Build from the frame duration and the integer slots-per-frame ratio;
    /// the slot duration is derived.
    static TimingConfig from_frame_rate(double frame_seconds, SlotCount slots_per_frame) {
        if (slots_per_frame < 1) {
            throw std::invalid_argument("TimingConfig: slots_per_frame must be >= 1");
        }
        if (!(frame_seconds > 0.0) || !std::isfinite(frame_seconds)) {
            throw std::invalid_argument("TimingConfig: frame_seconds must be finite and > 0");
        }
        return TimingConfig(frame_seconds / static_cast<double>(slots_per_frame), frame_seconds);
    }

    double slot_seconds() const { return slot_seconds_; }
    double frame_seconds() const { return frame_seconds_; }
    SlotCount slots_per_frame() const { return slots_per_frame_; }

    friend bool operator==(const TimingConfig&, const TimingConfig&) = default;

private:
    double slot_seconds_;
    double frame_seconds_;
    SlotCount slots_per_frame_ = 1;
};

/// Convert a (possibly fractional) frame count to slots, rounding half away
/// from zero. Used for guard widths and predicted request times.
inline SlotCount frames_to_slots(double frame_count, const TimingConfig& timing) {
    if (!std::isfinite(frame_count) || frame_count < 0.0) {
        throw std::invalid_argument("frames_to_slots: frame count must be finite and >= 0");
    }
    const double scaled = frame_count * static_cast<double>(timing.slots_per_frame());
    if (scaled >= 9.0e18) {
        throw std::invalid_argument("frames_to_slots: frame count out of range");
    }
    return std::llround(scaled);  // llround rounds half away from zero
}

/// First slot of frame n (both 1-based): (n-1)*slots_per_frame + 1.
inline SlotIndex frame_start_slot(FrameIndex frame, const TimingConfig& timing) {
    if (frame < 1) {
        throw std::invalid_argument("frame_start_slot: frame index must be >= 1");
    }
    return (frame - 1) * timing.slots_per_frame() + 1;
}

}  // namespace svcid
