#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "svcid/predictor.hpp"
#include "svcid/rng.hpp"
#include "svcid/scenario.hpp"
#include "svcid/timing.hpp"

using namespace svcid;

namespace {

std::vector<DataPoint> small_dataset() {
    ScenarioConfig cfg;
    cfg.num_raw_sequences = 40;
    cfg.seed = 3;
    return build_dataset(cfg, TimingConfig{});
}

StochasticModelSpec degenerate_spec() {
    StochasticModelSpec spec;
    spec.rt_bias_frames.assign(16, 0.0);
    spec.rt_std_frames.assign(16, 0.0);
    return spec;
}

/// Labeled points with the requested class balance, all with request time 1.
std::vector<DataPoint> labeled_points(std::size_t urll, std::size_t embb) {
    std::vector<DataPoint> points;
    points.reserve(urll + embb);
    for (std::size_t i = 0; i < urll + embb; ++i) {
        DataPoint dp;
        dp.id = i + 1;
        dp.service_type = i < urll ? ServiceType::urll : ServiceType::embb;
        dp.request_time_frames = 1;
        dp.packet_start_slot = 34;
        points.push_back(dp);
    }
    return points;
}

}  // namespace

TEST_CASE("the oracle predictor returns the ground truth") {
    for (const DataPoint& dp : small_dataset()) {
        const Prediction pred = predict_oracle(dp);
        REQUIRE(pred.service_type == dp.service_type);
        REQUIRE(pred.request_time_frames ==
                static_cast<double>(dp.request_time_frames));
    }
}

TEST_CASE("a degenerate stochastic model collapses to the oracle") {
    const auto points = small_dataset();
    const StochasticModelSpec spec = degenerate_spec();
    const PredictionTrace stochastic = trace_from_stochastic(points, spec);
    const PredictionTrace oracle = trace_from_oracle(points);
    REQUIRE(stochastic.records.size() == oracle.records.size());
    for (std::size_t i = 0; i < oracle.records.size(); ++i) {
        REQUIRE(stochastic.records[i].point_id == oracle.records[i].point_id);
        REQUIRE(stochastic.records[i].prediction == oracle.records[i].prediction);
    }
}

TEST_CASE("stochastic predictions depend only on the point and the error model") {
    const auto points = small_dataset();
    StochasticModelSpec spec = degenerate_spec();
    spec.true_positive_rate = 0.7;
    spec.false_positive_rate = 0.1;
    for (double& s : spec.rt_std_frames) s = 0.5;
    spec.seed = 21;

    std::vector<DataPoint> subset;
    for (std::size_t i = 0; i < points.size(); i += 3) {
        subset.push_back(points[i]);
    }
    const PredictionTrace full = trace_from_stochastic(points, spec);
    const PredictionTrace part = trace_from_stochastic(subset, spec);
    for (const TraceRecord& rec : part.records) {
        bool found = false;
        for (const TraceRecord& ref : full.records) {
            if (ref.point_id == rec.point_id) {
                REQUIRE(ref.prediction == rec.prediction);
                found = true;
            }
        }
        REQUIRE(found);
    }
}

TEST_CASE("request-time errors follow the per-group bias table") {
    StochasticModelSpec spec;
    spec.rt_bias_frames = {0.0, 0.0, 1.5};
    spec.rt_std_frames = {0.0, 0.0, 0.0};
    DataPoint dp;
    dp.id = 5;
    dp.service_type = ServiceType::urll;
    dp.request_time_frames = 3;
    REQUIRE(predict_stochastic(dp, spec).request_time_frames == 4.5);

    spec.rt_bias_frames = {-5.0, 0.0, 0.0};
    dp.request_time_frames = 1;
    REQUIRE(predict_stochastic(dp, spec).request_time_frames == 0.0);  // clamped

    dp.request_time_frames = 4;  // beyond the three-entry table
    REQUIRE_THROWS_AS(predict_stochastic(dp, spec), std::invalid_argument);
}

TEST_CASE("request-time noise matches the configured spread") {
    StochasticModelSpec spec;
    spec.rt_bias_frames = {0.0, 0.5};
    spec.rt_std_frames = {0.0, 0.8};
    spec.seed = 4;
    const int n = 20000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        DataPoint dp;
        dp.id = static_cast<std::uint64_t>(i + 1);
        dp.service_type = ServiceType::urll;
        dp.request_time_frames = 2;
        const double rt = predict_stochastic(dp, spec).request_time_frames;
        REQUIRE(rt >= 0.0);
        sum += rt;
        sum_sq += rt * rt;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    REQUIRE(mean == Catch::Approx(2.5).margin(3.0 * 0.8 / std::sqrt(double(n))));
    REQUIRE(sd == Catch::Approx(0.8).margin(0.02));
}

TEST_CASE("detection rates land at a reference operating point") {
    // Mimic a weak classifier on the reference validation mix: tpr 0.58 with
    // fpr 0.1433 gives precision near 0.80.
    const auto points = labeled_points(5492, 5558);
    StochasticModelSpec spec;
    spec.true_positive_rate = 0.58;
    spec.false_positive_rate = 0.1433;
    spec.seed = 8;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    for (const DataPoint& dp : points) {
        const bool flagged =
            predict_stochastic(dp, spec).service_type == ServiceType::urll;
        const bool actual = dp.service_type == ServiceType::urll;
        if (actual && flagged) ++tp;
        if (!actual && flagged) ++fp;
        if (actual && !flagged) ++fn;
    }
    const double precision = double(tp) / double(tp + fp);
    const double recall = double(tp) / double(tp + fn);
    REQUIRE(precision == Catch::Approx(0.80).margin(0.02));
    REQUIRE(recall == Catch::Approx(0.58).margin(0.02));
}

TEST_CASE("a strong operating point keeps precision near 0.98") {
    const auto points = labeled_points(5492, 5558);
    StochasticModelSpec spec;
    spec.true_positive_rate = 0.99;
    spec.false_positive_rate = 0.02;
    spec.seed = 9;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    for (const DataPoint& dp : points) {
        const bool flagged =
            predict_stochastic(dp, spec).service_type == ServiceType::urll;
        const bool actual = dp.service_type == ServiceType::urll;
        if (actual && flagged) ++tp;
        if (!actual && flagged) ++fp;
        if (actual && !flagged) ++fn;
    }
    REQUIRE(double(tp) / double(tp + fp) == Catch::Approx(0.98).margin(0.01));
    REQUIRE(double(tp) / double(tp + fn) == Catch::Approx(0.99).margin(0.005));
}

TEST_CASE("stochastic spec validation") {
    StochasticModelSpec spec;
    spec.true_positive_rate = 1.2;
    REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = StochasticModelSpec{};
    spec.false_positive_rate = -0.1;
    REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = StochasticModelSpec{};
    spec.rt_bias_frames.clear();
    REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = StochasticModelSpec{};
    spec.rt_std_frames = {-0.5};
    REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
    REQUIRE_NOTHROW(StochasticModelSpec{}.validate());
}

TEST_CASE("majority vote picks the strictly larger side") {
    using enum ServiceType;
    const std::array<ServiceType, 3> mostly_urll{urll, urll, embb};
    REQUIRE(predict_majority_vote(mostly_urll) == urll);
    const std::array<ServiceType, 3> mostly_embb{embb, embb, urll};
    REQUIRE(predict_majority_vote(mostly_embb) == embb);
    const std::array<ServiceType, 1> single{urll};
    REQUIRE(predict_majority_vote(single) == urll);
    const std::array<ServiceType, 5> three_of_five{urll, embb, urll, embb, urll};
    REQUIRE(predict_majority_vote(three_of_five) == urll);

    const std::array<ServiceType, 2> tied{urll, embb};
    REQUIRE_THROWS_AS(predict_majority_vote(tied), std::invalid_argument);
    REQUIRE_THROWS_AS(predict_majority_vote(std::span<const ServiceType>{}),
                      std::invalid_argument);
}

TEST_CASE("five 80% voters reach 94.208% by majority") {
    // Exact: sum over the 2^5 correctness patterns with >= 3 correct votes.
    double exact = 0.0;
    for (unsigned mask = 0; mask < 32; ++mask) {
        double weight = 1.0;
        std::array<ServiceType, 5> votes{};
        int correct = 0;
        for (unsigned f = 0; f < 5; ++f) {
            const bool ok = (mask >> f) & 1u;
            weight *= ok ? 0.8 : 0.2;
            votes[f] = ok ? ServiceType::urll : ServiceType::embb;
            correct += ok ? 1 : 0;
        }
        if (predict_majority_vote(votes) == ServiceType::urll) {
            REQUIRE(correct >= 3);
            exact += weight;
        }
    }
    REQUIRE(exact == Catch::Approx(0.94208).epsilon(1e-12));

    // Empirical cross-check of the same setup.
    RandomStream stream(substream_seed(100, 1));
    const int trials = 100000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        std::array<ServiceType, 5> votes{};
        for (auto& v : votes) {
            v = stream.bernoulli(0.8) ? ServiceType::urll : ServiceType::embb;
        }
        hits += predict_majority_vote(votes) == ServiceType::urll ? 1 : 0;
    }
    const double se = std::sqrt(0.94208 * (1.0 - 0.94208) / trials);
    REQUIRE(double(hits) / trials == Catch::Approx(0.94208).margin(3.0 * se));
}

TEST_CASE("traces pair points with their single prediction") {
    const auto points = small_dataset();
    const PredictionTrace trace = trace_from_oracle(points);
    REQUIRE_NOTHROW(check_unique_ids(trace));

    const TraceApplication app = apply_trace(trace, points);
    REQUIRE(app.covers_all());
    REQUIRE(app.unmatched_ids.empty());
    REQUIRE(app.pairs.size() == points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        REQUIRE(app.pairs[i].first == points[i]);
    }
}

TEST_CASE("trace application reports gaps instead of hiding them") {
    const auto points = small_dataset();
    PredictionTrace trace = trace_from_oracle(points);

    PredictionTrace missing = trace;
    const std::uint64_t dropped = missing.records[4].point_id;
    missing.records.erase(missing.records.begin() + 4);
    const TraceApplication app = apply_trace(missing, points);
    REQUIRE_FALSE(app.covers_all());
    REQUIRE(app.uncovered_ids == std::vector<std::uint64_t>{dropped});
    REQUIRE(app.pairs.size() == points.size() - 1);

    PredictionTrace extra = trace;
    TraceRecord stray;
    stray.point_id = 999999;
    extra.records.push_back(stray);
    const TraceApplication app2 = apply_trace(extra, points);
    REQUIRE(app2.covers_all());
    REQUIRE(app2.unmatched_ids == std::vector<std::uint64_t>{999999});

    PredictionTrace dup = trace;
    dup.records.push_back(dup.records.front());
    REQUIRE_THROWS_AS(check_unique_ids(dup), std::invalid_argument);
    REQUIRE_THROWS_AS(apply_trace(dup, points), std::invalid_argument);
}
