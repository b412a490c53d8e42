#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "svcid/predictor.hpp"
#include "svcid/scenario.hpp"
#include "svcid/timing.hpp"

namespace svcid {

enum class PredictorModel { oracle, stochastic, trace };

inline const char* to_string(PredictorModel m) {
    switch (m) {
        case PredictorModel::oracle: return "oracle";
        case PredictorModel::stochastic: return "stochastic";
        case PredictorModel::trace: return "trace";
    }
    throw std::invalid_argument("unknown predictor model");
}

inline PredictorModel predictor_model_from_string(const std::string& name) {
    if (name == "oracle") return PredictorModel::oracle;
    if (name == "stochastic") return PredictorModel::stochastic;
    if (name == "trace") return PredictorModel::trace;
    throw std::invalid_argument("unknown predictor model '" + name +
                                "' (expected oracle, stochastic or trace)");
}

struct SplitConfig {
    double train_fraction = 0.7;
    std::uint64_t seed = 7;
};

/// Inclusive arithmetic grid start, start+step, ... up to stop.
inline std::vector<double> arithmetic_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !(stop >= start)) {
        throw std::invalid_argument("grid: need step > 0 and stop >= start");
    }
    const auto count =
        static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        values.push_back(start + static_cast<double>(k) * step);
    }
    return values;
}

/// Default guard sweep: half-widths 0.1, 0.2, ..., 10.0 frames.
inline std::vector<double> default_sweep_grid() { return arithmetic_grid(0.1, 10.0, 0.1); }

/// Everything the command-line tools read from a config file. A `{}` file
/// yields all defaults.
struct AppConfig {
    TimingConfig timing;
    ScenarioConfig scenario;
    SplitConfig split;
    PredictorModel predictor_model = PredictorModel::oracle;
    StochasticModelSpec stochastic;
    std::optional<SlotCount> rho_slots;
    std::vector<double> sweep_grid = default_sweep_grid();

    AppConfig() {
        stochastic.rt_bias_frames.assign(
            static_cast<std::size_t>(scenario.max_future_frames()), 0.0);
        stochastic.rt_std_frames.assign(
            static_cast<std::size_t>(scenario.max_future_frames()), 0.0);
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const char* where,
                                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument(std::string("config: unknown key '") + key + "' in " +
                                        where);
        }
    }
}

/// A per-future-frame table given as a constant, an explicit array of
/// table_size entries, or {"slope": a, "intercept": b} meaning b + a*n.
inline std::vector<double> expand_rt_table(const nlohmann::json& value, std::size_t table_size,
                                           const char* name) {
    if (value.is_number()) {
        return std::vector<double>(table_size, value.get<double>());
    }
    if (value.is_array()) {
        if (value.size() != table_size) {
            throw std::invalid_argument(std::string("config: ") + name + " array must have " +
                                        std::to_string(table_size) + " entries, got " +
                                        std::to_string(value.size()));
        }
        return value.get<std::vector<double>>();
    }
    if (value.is_object()) {
        reject_unknown_keys(value, name, {"slope", "intercept"});
        const double slope = value.value("slope", 0.0);
        const double intercept = value.value("intercept", 0.0);
        std::vector<double> table(table_size);
        for (std::size_t n = 1; n <= table_size; ++n) {
            table[n - 1] = intercept + slope * static_cast<double>(n);
        }
        return table;
    }
    throw std::invalid_argument(std::string("config: ") + name +
                                " must be a number, an array or {slope, intercept}");
}

}  // namespace detail

inline AppConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("config: top level must be an object");
    }
    detail::reject_unknown_keys(
        j, "the top level", {"timing", "scenario", "split", "predictor", "metrics", "sweep"});
    AppConfig cfg;

    if (j.contains("timing")) {
        const auto& t = j.at("timing");
        detail::reject_unknown_keys(t, "timing", {"tau_v_seconds", "fsr"});
        const double tau_v = t.value("tau_v_seconds", 1.0 / 30.0);
        const auto fsr = t.value("fsr", SlotCount{33});
        cfg.timing = TimingConfig::from_frame_rate(tau_v, fsr);
    }

    if (j.contains("scenario")) {
        const auto& s = j.at("scenario");
        detail::reject_unknown_keys(
            s, "scenario",
            {"num_raw_sequences", "length_frames_min", "length_frames_max",
             "observation_window_frames", "urll_probability", "packet_length_slots_min",
             "packet_length_slots_max", "jitter_within_frame", "seed"});
        ScenarioConfig& sc = cfg.scenario;
        sc.num_raw_sequences = s.value("num_raw_sequences", sc.num_raw_sequences);
        sc.length_frames_min = s.value("length_frames_min", sc.length_frames_min);
        sc.length_frames_max = s.value("length_frames_max", sc.length_frames_max);
        sc.observation_window_frames =
            s.value("observation_window_frames", sc.observation_window_frames);
        sc.urll_probability = s.value("urll_probability", sc.urll_probability);
        sc.packet_length_slots_min =
            s.value("packet_length_slots_min", sc.packet_length_slots_min);
        sc.packet_length_slots_max =
            s.value("packet_length_slots_max", sc.packet_length_slots_max);
        sc.jitter_within_frame = s.value("jitter_within_frame", sc.jitter_within_frame);
        sc.seed = s.value("seed", sc.seed);
    }
    cfg.scenario.validate();

    if (j.contains("split")) {
        const auto& s = j.at("split");
        detail::reject_unknown_keys(s, "split", {"train_fraction", "seed"});
        cfg.split.train_fraction = s.value("train_fraction", cfg.split.train_fraction);
        cfg.split.seed = s.value("seed", cfg.split.seed);
    }
    if (!(cfg.split.train_fraction > 0.0 && cfg.split.train_fraction < 1.0)) {
        throw std::invalid_argument("config: split.train_fraction must be in (0, 1)");
    }

    const auto table_size = static_cast<std::size_t>(cfg.scenario.max_future_frames());
    cfg.stochastic.rt_bias_frames.assign(table_size, 0.0);
    cfg.stochastic.rt_std_frames.assign(table_size, 0.0);
    if (j.contains("predictor")) {
        const auto& p = j.at("predictor");
        detail::reject_unknown_keys(p, "predictor", {"model", "stochastic"});
        cfg.predictor_model =
            predictor_model_from_string(p.value("model", std::string("oracle")));
        if (p.contains("stochastic")) {
            const auto& st = p.at("stochastic");
            detail::reject_unknown_keys(
                st, "predictor.stochastic",
                {"tpr", "fpr", "rt_bias_frames", "rt_std_frames", "seed"});
            cfg.stochastic.true_positive_rate =
                st.value("tpr", cfg.stochastic.true_positive_rate);
            cfg.stochastic.false_positive_rate =
                st.value("fpr", cfg.stochastic.false_positive_rate);
            if (st.contains("rt_bias_frames")) {
                cfg.stochastic.rt_bias_frames =
                    detail::expand_rt_table(st.at("rt_bias_frames"), table_size,
                                            "predictor.stochastic.rt_bias_frames");
            }
            if (st.contains("rt_std_frames")) {
                cfg.stochastic.rt_std_frames =
                    detail::expand_rt_table(st.at("rt_std_frames"), table_size,
                                            "predictor.stochastic.rt_std_frames");
            }
            cfg.stochastic.seed = st.value("seed", cfg.stochastic.seed);
        }
    }
    cfg.stochastic.validate();

    if (j.contains("metrics")) {
        const auto& m = j.at("metrics");
        detail::reject_unknown_keys(m, "metrics", {"rho_slots"});
        if (m.contains("rho_slots")) {
            const auto rho = m.at("rho_slots").get<SlotCount>();
            if (rho < 1) {
                throw std::invalid_argument("config: metrics.rho_slots must be >= 1");
            }
            cfg.rho_slots = rho;
        }
    }

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        detail::reject_unknown_keys(s, "sweep", {"grid"});
        if (s.contains("grid")) {
            const auto& g = s.at("grid");
            if (g.is_array()) {
                cfg.sweep_grid = g.get<std::vector<double>>();
            } else if (g.is_object()) {
                detail::reject_unknown_keys(g, "sweep.grid", {"start", "stop", "step"});
                cfg.sweep_grid = arithmetic_grid(g.value("start", 0.1), g.value("stop", 10.0),
                                                 g.value("step", 0.1));
            } else {
                throw std::invalid_argument(
                    "config: sweep.grid must be an array or {start, stop, step}");
            }
        }
    }
    if (cfg.sweep_grid.empty()) {
        throw std::invalid_argument("config: sweep grid is empty");
    }
    for (std::size_t i = 0; i < cfg.sweep_grid.size(); ++i) {
        if (!(cfg.sweep_grid[i] >= 0.0)) {
            throw std::invalid_argument("config: sweep grid values must be >= 0");
        }
        if (i > 0 && !(cfg.sweep_grid[i] > cfg.sweep_grid[i - 1])) {
            throw std::invalid_argument("config: sweep grid must be strictly increasing");
        }
    }

    return cfg;
}

inline AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("config '" + path + "': " + e.what());
    }
    return parse_config(j);
}

}  // namespace svcid
