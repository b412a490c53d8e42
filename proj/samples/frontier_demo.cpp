// Sweeps the guard width for two detector profiles and prints the
// reliability/utilization frontier each one traces out.
//
// Build target: frontier_demo (not registered as a test).

#include <cstdio>
#include <vector>

#include "svcid/svcid.hpp"

namespace {

svcid::StochasticModelSpec make_profile(double tpr, double fpr, double bias_slope,
                                        double bias_intercept, double std_frames,
                                        std::uint64_t seed) {
    svcid::StochasticModelSpec spec;
    spec.true_positive_rate = tpr;
    spec.false_positive_rate = fpr;
    spec.rt_bias_frames.resize(16);
    for (int n = 1; n <= 16; ++n) {
        spec.rt_bias_frames[n - 1] = bias_intercept + bias_slope * n;
    }
    spec.rt_std_frames.assign(16, std_frames);
    spec.seed = seed;
    return spec;
}

}  // namespace

int main() {
    const svcid::TimingConfig timing;
    svcid::ScenarioConfig scenario;
    scenario.num_raw_sequences = 1200;
    const auto full = svcid::build_dataset(scenario, timing);
    const auto sp = svcid::split(full, 0.7, 7);
    const auto& points = sp.validation;
    std::printf("dataset: %zu points (%zu held out)\n", full.size(), points.size());

    const auto grid = svcid::arithmetic_grid(0.5, 8.0, 0.5);
    const struct {
        const char* name;
        svcid::StochasticModelSpec spec;
    } profiles[] = {
        {"strong", make_profile(0.99, 0.02, -0.12, 0.0, 0.35, 1001)},
        {"weak", make_profile(0.58, 0.1433, -0.25, 1.5, 1.2, 1002)},
    };

    for (const auto& profile : profiles) {
        std::vector<svcid::Prediction> preds;
        preds.reserve(points.size());
        for (const auto& dp : points) {
            preds.push_back(svcid::predict_stochastic(dp, profile.spec));
        }
        std::printf("\n%s detector (tpr %.2f, fpr %.4f)\n", profile.name,
                    profile.spec.true_positive_rate, profile.spec.false_positive_rate);
        std::printf("  %10s %12s %12s\n", "t_g", "reliability", "utilization");
        for (const auto& row : svcid::run_sweep(points, preds, grid, timing)) {
            std::printf("  %8.1f f %10.2f %% %10.2f %%\n", row.guard_half_width_frames,
                        row.er_percent, row.ez_percent);
        }
    }

    const auto orth = svcid::run_baseline(points, svcid::Policy::orthogonal_reactive, timing);
    const auto greedy = svcid::run_baseline(points, svcid::Policy::greedy_reuse, timing);
    std::printf("\nreferences: orthogonal %.2f %% / %.2f %%, greedy %.2f %% / %.2f %%\n",
                orth.r_percent, orth.z_percent, greedy.r_percent, greedy.z_percent);
    return 0;
}
