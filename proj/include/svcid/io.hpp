#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <vector>

#include "svcid/evaluate.hpp"
#include "svcid/metrics.hpp"
#include "svcid/predictor.hpp"
#include "svcid/scenario.hpp"
#include "svcid/scheduler.hpp"

namespace svcid {

/// Parse failure with the file position that caused it.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, std::size_t line, const std::string& message)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + message),
          path_(std::move(path)),
          line_(line) {}

    const std::string& path() const { return path_; }
    std::size_t line() const { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

/// Fixed-point formatting, locale independent.
inline std::string format_fixed(double value, int precision) {
    char buf[512];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
    if (res.ec != std::errc{}) {
        throw std::invalid_argument("format_fixed: value does not fit");
    }
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

template <typename T>
inline T parse_number(std::string_view field, const std::string& path, std::size_t line,
                      const char* what) {
    T value{};
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ParseError(path, line, std::string("invalid ") + what + " '" +
                                         std::string(field) + "'");
    }
    return value;
}

inline void expect_fields(const std::vector<std::string_view>& fields, std::size_t expected,
                          const std::string& path, std::size_t line) {
    if (fields.size() != expected) {
        throw ParseError(path, line, "expected " + std::to_string(expected) + " fields, got " +
                                         std::to_string(fields.size()));
    }
}

/// Read one line, stripping a trailing carriage return.
inline bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for reading");
    }
    return in;
}

}  // namespace detail

inline constexpr std::string_view kDatasetHeader = "u,raw_id,y_type,y_rt,x,l";
inline constexpr std::string_view kTraceHeader = "u,y_type_hat,y_rt_hat";
inline constexpr std::string_view kSweepHeader =
    "t_g_frames,t_g_slots,er_percent,ez_percent,precision,recall,accuracy,fp_guard_waste_slots";
inline constexpr std::string_view kBaselinesHeader = "policy,r_percent,z_percent,horizon_slots";

inline void write_dataset_csv(std::ostream& out, const std::vector<DataPoint>& points) {
    out << kDatasetHeader << '\n';
    for (const DataPoint& dp : points) {
        out << dp.id << ',' << dp.raw_id << ',' << to_int(dp.service_type) << ','
            << dp.request_time_frames << ',' << dp.packet_start_slot << ','
            << dp.packet_length_slots << '\n';
    }
}

inline void write_dataset_csv(const std::string& path, const std::vector<DataPoint>& points) {
    std::ofstream out = detail::open_output(path);
    write_dataset_csv(out, points);
}

/// Read a dataset file. The observation-window frame is not stored in the
/// file and comes back as zero.
inline std::vector<DataPoint> read_dataset_csv(std::istream& in, const std::string& path) {
    std::string line;
    std::size_t lineno = 1;
    if (!detail::read_line(in, line)) {
        throw ParseError(path, lineno, "empty file");
    }
    if (line != kDatasetHeader) {
        throw ParseError(path, lineno, "expected header '" + std::string(kDatasetHeader) + "'");
    }
    std::vector<DataPoint> points;
    std::unordered_set<std::uint64_t> seen;
    while (detail::read_line(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto fields = detail::split_fields(line);
        detail::expect_fields(fields, 6, path, lineno);
        DataPoint dp;
        dp.id = detail::parse_number<std::uint64_t>(fields[0], path, lineno, "point id");
        dp.raw_id = detail::parse_number<std::uint64_t>(fields[1], path, lineno, "raw id");
        const int type = detail::parse_number<int>(fields[2], path, lineno, "service type");
        const int rt = detail::parse_number<int>(fields[3], path, lineno, "request time");
        dp.packet_start_slot =
            detail::parse_number<SlotIndex>(fields[4], path, lineno, "packet start");
        dp.packet_length_slots =
            detail::parse_number<int>(fields[5], path, lineno, "packet length");
        if (dp.id < 1) {
            throw ParseError(path, lineno, "point id must be >= 1");
        }
        if (!seen.insert(dp.id).second) {
            throw ParseError(path, lineno, "duplicate point id " + std::to_string(dp.id));
        }
        if (type != 0 && type != 1) {
            throw ParseError(path, lineno, "service type must be 0 or 1");
        }
        dp.service_type = service_type_from_int(type);
        if (rt < 1) {
            throw ParseError(path, lineno, "request time must be >= 1 frame");
        }
        dp.request_time_frames = rt;
        if (dp.packet_start_slot < 1) {
            throw ParseError(path, lineno, "packet start must be >= slot 1");
        }
        if (dp.packet_length_slots < 1) {
            throw ParseError(path, lineno, "packet length must be >= 1 slot");
        }
        points.push_back(dp);
    }
    if (points.empty()) {
        throw ParseError(path, lineno, "no data points");
    }
    return points;
}

inline std::vector<DataPoint> read_dataset_csv(const std::string& path) {
    std::ifstream in = detail::open_input(path);
    return read_dataset_csv(in, path);
}

inline void write_trace_csv(std::ostream& out, const PredictionTrace& trace) {
    out << kTraceHeader << '\n';
    for (const TraceRecord& rec : trace.records) {
        out << rec.point_id << ',' << to_int(rec.prediction.service_type) << ','
            << format_double(rec.prediction.request_time_frames) << '\n';
    }
}

inline void write_trace_csv(const std::string& path, const PredictionTrace& trace) {
    std::ofstream out = detail::open_output(path);
    write_trace_csv(out, trace);
}

inline PredictionTrace read_trace_csv(std::istream& in, const std::string& path) {
    std::string line;
    std::size_t lineno = 1;
    if (!detail::read_line(in, line)) {
        throw ParseError(path, lineno, "empty file");
    }
    if (line != kTraceHeader) {
        throw ParseError(path, lineno, "expected header '" + std::string(kTraceHeader) + "'");
    }
    PredictionTrace trace;
    std::unordered_set<std::uint64_t> seen;
    while (detail::read_line(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto fields = detail::split_fields(line);
        detail::expect_fields(fields, 3, path, lineno);
        TraceRecord rec;
        rec.point_id = detail::parse_number<std::uint64_t>(fields[0], path, lineno, "point id");
        const int type = detail::parse_number<int>(fields[1], path, lineno, "service type");
        const double rt =
            detail::parse_number<double>(fields[2], path, lineno, "request time");
        if (rec.point_id < 1) {
            throw ParseError(path, lineno, "point id must be >= 1");
        }
        if (!seen.insert(rec.point_id).second) {
            throw ParseError(path, lineno,
                             "duplicate prediction for point " + std::to_string(rec.point_id));
        }
        if (type != 0 && type != 1) {
            throw ParseError(path, lineno, "service type must be 0 or 1");
        }
        rec.prediction.service_type = service_type_from_int(type);
        if (!(rt >= 0.0) || !std::isfinite(rt)) {
            throw ParseError(path, lineno, "request time must be finite and >= 0");
        }
        rec.prediction.request_time_frames = rt;
        trace.records.push_back(rec);
    }
    if (trace.records.empty()) {
        throw ParseError(path, lineno, "no predictions");
    }
    return trace;
}

inline PredictionTrace read_trace_csv(const std::string& path) {
    std::ifstream in = detail::open_input(path);
    return read_trace_csv(in, path);
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepHeader << '\n';
    for (const SweepRow& row : rows) {
        out << format_double(row.guard_half_width_frames) << ',' << row.guard_half_width_slots
            << ',' << format_double(row.er_percent) << ',' << format_double(row.ez_percent)
            << ',';
        if (row.precision.has_value()) {
            out << format_double(*row.precision);
        }
        out << ',';
        if (row.recall.has_value()) {
            out << format_double(*row.recall);
        }
        out << ',' << format_double(row.accuracy) << ',' << row.fp_guard_waste_slots << '\n';
    }
}

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out = detail::open_output(path);
    write_sweep_csv(out, rows);
}

inline void write_baselines_csv(std::ostream& out, const std::vector<BaselineRow>& rows) {
    out << kBaselinesHeader << '\n';
    for (const BaselineRow& row : rows) {
        out << to_string(row.policy) << ',' << format_double(row.r_percent) << ','
            << format_double(row.z_percent) << ',' << row.horizon_slots << '\n';
    }
}

inline void write_baselines_csv(const std::string& path, const std::vector<BaselineRow>& rows) {
    std::ofstream out = detail::open_output(path);
    write_baselines_csv(out, rows);
}

/// Human-readable summary, one `key = value` per line.
inline void write_report_text(std::ostream& out, const MetricsReport& report) {
    out << "policy = " << to_string(report.policy) << '\n';
    out << "t_g_frames = " << format_double(report.guard_half_width_frames) << '\n';
    out << "t_g_slots = " << report.guard_half_width_slots << '\n';
    out << "rho_slots = " << report.horizon_slots << '\n';
    out << "points = " << report.points << '\n';
    out << "urll_points = " << report.urll_points << '\n';
    out << "embb_points = " << report.embb_points << '\n';
    out << "er_percent = " << format_fixed(report.er_percent, 4) << '\n';
    out << "ez_percent = " << format_fixed(report.ez_percent, 4) << '\n';
    const ClassificationMetrics& cls = report.classification;
    out << "accuracy = " << format_fixed(cls.accuracy, 4) << '\n';
    out << "precision = "
        << (cls.precision ? format_fixed(*cls.precision, 4) : std::string("n/a")) << '\n';
    out << "recall = " << (cls.recall ? format_fixed(*cls.recall, 4) : std::string("n/a"))
        << '\n';
    out << "true_positives = " << cls.true_positives << '\n';
    out << "false_positives = " << cls.false_positives << '\n';
    out << "true_negatives = " << cls.true_negatives << '\n';
    out << "false_negatives = " << cls.false_negatives << '\n';
    out << "false_positive_guards = " << report.false_positive_guards << '\n';
    out << "fp_guard_waste_slots = " << report.fp_guard_waste_slots << '\n';
    if (report.timeline.has_value()) {
        out << "timeline_r_percent = " << format_fixed(report.timeline->r_percent, 4) << '\n';
        out << "timeline_z_percent = " << format_fixed(report.timeline->z_percent, 4) << '\n';
    }
    for (const RtGroupStats& g : report.grouped_rt) {
        const std::string k = std::to_string(g.request_time_frames);
        out << "rt_count_" << k << " = " << g.count << '\n';
        out << "rt_mean_" << k << " = " << format_fixed(g.mean, 4) << '\n';
        out << "rt_msd_" << k << " = " << format_fixed(g.mean_sq_dev, 4) << '\n';
        out << "rt_std_" << k << " = " << format_fixed(g.std_dev, 4) << '\n';
    }
}

inline void write_report_text(const std::string& path, const MetricsReport& report) {
    std::ofstream out = detail::open_output(path);
    write_report_text(out, report);
}

/// Dump slot-by-slot occupancy for inspection.
inline void write_timeline_dump(std::ostream& out, const DataPoint& dp,
                                const SlotTimeline& timeline) {
    out << "# u=" << dp.id << " y_type=" << to_int(dp.service_type)
        << " x=" << dp.packet_start_slot << " l=" << dp.packet_length_slots << " success=";
    if (timeline.has_packet) {
        out << (timeline.packet_success ? '1' : '0');
    } else {
        out << '-';
    }
    out << '\n';
    out << "slot,state\n";
    for (SlotIndex slot = 1; slot <= timeline.horizon; ++slot) {
        out << slot << ',' << to_string(timeline.state(slot)) << '\n';
    }
}

}  // namespace svcid
