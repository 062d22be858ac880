// Obstacle-density benchmark protocol: seeded scenario sweeps, per-trial
// metrics, and deterministic CSV aggregation.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "replan/pipeline.hpp"
#include "replan/scenario.hpp"

namespace replan {

struct ScenarioResult {
    double density{0.0};
    int trial{0};
    bool success{false};
    double traverse_distance{0.0};  // meters
    double traverse_time{0.0};      // seconds
    double control_effort{0.0};
    double speed_min{0.0};
    double speed_max{0.0};
    double planning_frequency_mean{0.0};  // Hz
    double planning_frequency_sd{0.0};
    double path_efficiency{0.0};
    bool recovery_fired{false};
    long search_invocations{0};
};

struct BenchmarkOptions {
    std::vector<double> densities{20.0, 30.0, 40.0, 50.0};
    int trials{5};
    uint64_t seed{0};
    PlannerSettings settings;
    bool enable_recovery{true};
    int replans_per_trial{5};  // planning-frequency probe count (>= 1)
    /// Report wall-clock planning frequencies instead of the deterministic
    /// work-based proxy; breaks byte-reproducibility of the CSV.
    bool wall_clock_timing{false};
    double map_size{32.0};     // square side [m]
    double resolution{0.1};    // [m/cell]
    double min_spacing{2.5};   // [m]
    std::string svg_dir;       // per-scenario renders when non-empty
};

/// Start/goal used for generated scenarios: opposite corners at a 10%
/// inset, heading along the diagonal.
Pose2D benchmark_start(const BenchmarkOptions& options);
Pose2D benchmark_goal(const BenchmarkOptions& options);

/// One generated scenario per (density, trial), planned, executed, and
/// measured. Failed trials record NaN metrics and never abort the sweep.
/// Fully deterministic for a fixed seed (unless wall_clock_timing).
std::vector<ScenarioResult> run_benchmark(const BenchmarkOptions& options);

/// CSV schema:
///   density,trial,success,distance_m,time_s,effort,v_min,v_max,
///   freq_hz_mean,freq_hz_sd,path_eff,recovery_fired
/// One row per trial (4-decimal fixed metrics, NaN for failures), then two
/// aggregate rows per density (trial column "mean" / "sd"; success holds
/// the success rate, metric aggregates cover successful trials only).
void write_benchmark_csv(const std::vector<ScenarioResult>& results, std::ostream& out);
void write_benchmark_csv_file(const std::vector<ScenarioResult>& results,
                              const std::string& path);

}  // namespace replan
