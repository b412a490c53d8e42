#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "svcid/predictor.hpp"
#include "svcid/scenario.hpp"
#include "svcid/timing.hpp"

namespace svcid {

/// Guard half-width around the predicted packet start; 2*half_width+1 slots
/// are kept free.
struct GuardConfig {
    double half_width_frames = 0.0;
    SlotCount half_width_slots = 0;

    static GuardConfig from_frames(double frames, const TimingConfig& timing) {
        return GuardConfig{frames, frames_to_slots(frames, timing)};
    }
};

/// Pre-cleared slot range [lo, hi] on the contested sub-band.
struct GuardInterval {
    SlotIndex lo = 1;
    SlotIndex hi = 1;

    bool contains(SlotIndex slot) const { return lo <= slot && slot <= hi; }
    SlotCount width() const { return hi - lo + 1; }

    friend bool operator==(const GuardInterval&, const GuardInterval&) = default;
};

/// Slot where a predicted request lands: first slot after the forecast
/// future frames.
inline SlotIndex predicted_start_slot(const Prediction& pred, const TimingConfig& timing) {
    return frames_to_slots(pred.request_time_frames, timing) + 1;
}

/// Reserve [start - half_width, start + half_width] around the predicted
/// start, clamped to slot 1 at the bottom. eMBB predictions reserve nothing.
inline std::optional<GuardInterval> plan_guard(const Prediction& pred, const GuardConfig& guard,
                                               const TimingConfig& timing) {
    if (pred.service_type != ServiceType::urll) {
        return std::nullopt;
    }
    const SlotIndex start = predicted_start_slot(pred, timing);
    return GuardInterval{std::max<SlotIndex>(1, start - guard.half_width_slots),
                         start + guard.half_width_slots};
}

/// eMBB discipline on the contested sub-band.
enum class Policy {
    proactive_guard,      ///< eMBB everywhere except the planned guard interval
    orthogonal_reactive,  ///< eMBB never enters the sub-band
    greedy_reuse,         ///< eMBB fills every slot
};

inline const char* to_string(Policy p) {
    switch (p) {
        case Policy::proactive_guard: return "proactive";
        case Policy::orthogonal_reactive: return "orthogonal";
        case Policy::greedy_reuse: return "greedy";
    }
    return "?";
}

inline Policy policy_from_string(const std::string& name) {
    if (name == "proactive") return Policy::proactive_guard;
    if (name == "orthogonal") return Policy::orthogonal_reactive;
    if (name == "greedy") return Policy::greedy_reuse;
    throw std::invalid_argument("unknown policy '" + name +
                                "' (expected proactive, orthogonal or greedy)");
}

enum class SlotState : unsigned char { idle, embb_only, urll_only, collision };

inline const char* to_string(SlotState s) {
    switch (s) {
        case SlotState::idle: return "idle";
        case SlotState::embb_only: return "embb";
        case SlotState::urll_only: return "urll";
        case SlotState::collision: return "collision";
    }
    return "?";
}

/// Exact per-slot occupancy of the contested sub-band over one accounting
/// horizon, for a single data point.
struct SlotTimeline {
    SlotCount horizon = 0;
    std::vector<SlotState> states;  ///< index slot-1
    bool has_packet = false;        ///< true for URLL data points
    bool packet_success = true;     ///< no collision anywhere in the packet

    SlotState state(SlotIndex slot) const {
        return states.at(static_cast<std::size_t>(slot - 1));
    }

    /// A slot counts as occupied whenever anything transmits in it;
    /// collisions are occupied.
    SlotCount occupied_slots() const {
        SlotCount n = 0;
        for (SlotState s : states) {
            if (s != SlotState::idle) {
                ++n;
            }
        }
        return n;
    }

    SlotCount idle_slots() const { return horizon - occupied_slots(); }
};

/// Build the slot-exact occupancy record for one data point.
///
/// eMBB baseline follows the policy. A URLL packet occupies
/// [start, start + length - 1] and keeps transmitting even when it
/// collides. Deferral rule: when the packet's first slot is eMBB-free, eMBB
/// stays off the sub-band until the packet completes and resumes right
/// after, so packet success is equivalent to the start slot being free.
inline SlotTimeline build_timeline(const DataPoint& dp,
                                   const std::optional<GuardInterval>& guard, Policy policy,
                                   SlotCount horizon_slots) {
    const SlotIndex packet_end = dp.packet_start_slot + dp.packet_length_slots - 1;
    if (horizon_slots < packet_end) {
        throw std::invalid_argument("build_timeline: horizon of " +
                                    std::to_string(horizon_slots) +
                                    " slots does not cover the packet ending at slot " +
                                    std::to_string(packet_end));
    }

    SlotTimeline tl;
    tl.horizon = horizon_slots;
    const bool embb_everywhere = policy != Policy::orthogonal_reactive;
    tl.states.assign(static_cast<std::size_t>(horizon_slots),
                     embb_everywhere ? SlotState::embb_only : SlotState::idle);

    if (policy == Policy::proactive_guard && guard) {
        const SlotIndex lo = std::max<SlotIndex>(1, guard->lo);
        const SlotIndex hi = std::min<SlotIndex>(horizon_slots, guard->hi);
        for (SlotIndex s = lo; s <= hi; ++s) {
            tl.states[static_cast<std::size_t>(s - 1)] = SlotState::idle;
        }
    }

    if (dp.service_type == ServiceType::urll) {
        tl.has_packet = true;
        auto& start_state = tl.states[static_cast<std::size_t>(dp.packet_start_slot - 1)];
        tl.packet_success = start_state != SlotState::embb_only;
        for (SlotIndex s = dp.packet_start_slot; s <= packet_end; ++s) {
            auto& state = tl.states[static_cast<std::size_t>(s - 1)];
            if (tl.packet_success) {
                state = SlotState::urll_only;  // eMBB defers until the packet completes
            } else {
                state = state == SlotState::embb_only ? SlotState::collision
                                                      : SlotState::urll_only;
            }
        }
        if (tl.packet_success && embb_everywhere && guard) {
            // eMBB resumes right after the packet, reclaiming any guard tail.
            const SlotIndex hi = std::min<SlotIndex>(horizon_slots, guard->hi);
            for (SlotIndex s = packet_end + 1; s <= hi; ++s) {
                tl.states[static_cast<std::size_t>(s - 1)] = SlotState::embb_only;
            }
        }
    }
    return tl;
}

}  // namespace svcid
