#include "replan/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "replan/errors.hpp"
#include "replan/svg_render.hpp"

namespace replan {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return kNan;
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::string format_metric(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string format_density(double d) {
    char buf[64];
    if (d == std::floor(d))
        std::snprintf(buf, sizeof buf, "%d", static_cast<int>(d));
    else
        std::snprintf(buf, sizeof buf, "%.4f", d);
    return buf;
}

}  // namespace

Pose2D benchmark_start(const BenchmarkOptions& options) {
    const double inset = 0.1 * options.map_size;
    return {inset, inset, M_PI / 4.0};
}

Pose2D benchmark_goal(const BenchmarkOptions& options) {
    const double inset = 0.1 * options.map_size;
    return {options.map_size - inset, options.map_size - inset, M_PI / 4.0};
}

std::vector<ScenarioResult> run_benchmark(const BenchmarkOptions& options) {
    if (options.densities.empty() || options.trials < 1)
        throw std::invalid_argument("need >= 1 density and >= 1 trial");

    const int cells = std::max(1, static_cast<int>(std::lround(options.map_size /
                                                               options.resolution)));
    const Pose2D start = benchmark_start(options);
    const Pose2D goal = benchmark_goal(options);
    const PlanOptions plan_options{options.enable_recovery, 10};

    std::vector<ScenarioResult> results;
    for (size_t di = 0; di < options.densities.size(); ++di) {
        const double density = options.densities[di];
        for (int trial = 0; trial < options.trials; ++trial) {
            ScenarioResult row;
            row.density = density;
            row.trial = trial;

            ScenarioSpec spec;
            spec.seed = derive_seed(options.seed, static_cast<uint64_t>(std::llround(density * 100)),
                                    static_cast<uint64_t>(trial));
            spec.base_grid = OccupancyGrid(cells, cells, options.resolution);
            spec.target_density = density;
            spec.min_spacing = options.min_spacing;
            spec.start = start;
            spec.goal = goal;

            OccupancyGrid grid;
            try {
                grid = generate_scenario(spec, options.settings.vehicle);
            } catch (const Error&) {
                row.success = false;
                row.traverse_distance = row.traverse_time = row.control_effort = kNan;
                row.speed_min = row.speed_max = kNan;
                row.planning_frequency_mean = row.planning_frequency_sd = kNan;
                row.path_efficiency = kNan;
                results.push_back(row);
                continue;
            }

            PlanningQuery query{grid, start, goal, {}};
            PlanResult plan = plan_resilient(query, options.settings, plan_options);
            row.recovery_fired = plan.report.recovery_fired;
            row.search_invocations = plan.report.search_invocations;

            std::vector<double> plan_ms;
            plan_ms.push_back(options.wall_clock_timing ? plan.report.total_ms
                                                        : plan.report.virtual_ms());

            if (plan.ok()) {
                const ExecutionTrace trace = execute(plan.trajectory);
                row.success = true;
                row.traverse_distance = trace.total_distance;
                row.traverse_time = trace.total_time;
                row.control_effort = trace.control_effort;
                row.speed_min = trace.speed_min;
                row.speed_max = trace.speed_max;
                try {
                    row.path_efficiency = path_efficiency(
                        trace.total_distance, grid, start, goal, options.settings.vehicle);
                } catch (const Error&) {
                    row.path_efficiency = kNan;
                }

                // Planning-frequency probes: replans from poses along the
                // executed trajectory.
                const auto& samples = plan.trajectory.samples;
                for (int k = 1; k < options.replans_per_trial && samples.size() > 1; ++k) {
                    const double frac =
                        static_cast<double>(k) / options.replans_per_trial;
                    const size_t idx = std::min(
                        samples.size() - 1,
                        static_cast<size_t>(frac * static_cast<double>(samples.size())));
                    PlanningQuery replan_query{grid, samples[idx].pose, goal, {}};
                    PlanResult replan =
                        plan_resilient(replan_query, options.settings, plan_options);
                    row.search_invocations += replan.report.search_invocations;
                    plan_ms.push_back(options.wall_clock_timing
                                          ? replan.report.total_ms
                                          : replan.report.virtual_ms());
                }
            } else {
                row.success = false;
                row.traverse_distance = row.traverse_time = row.control_effort = kNan;
                row.speed_min = row.speed_max = kNan;
                row.path_efficiency = kNan;
            }

            std::vector<double> freqs;
            freqs.reserve(plan_ms.size());
            for (double ms : plan_ms) freqs.push_back(1000.0 / std::max(ms, 1e-9));
            row.planning_frequency_mean = 1000.0 / std::max(mean_of(plan_ms), 1e-9);
            row.planning_frequency_sd = sd_of(freqs);

            if (!options.svg_dir.empty()) {
                char name[128];
                std::snprintf(name, sizeof name, "/scenario_d%s_t%02d.svg",
                              format_density(density).c_str(), trial);
                try {
                    render_plan_svg_file(grid, plan, start, goal,
                                         options.svg_dir + name);
                } catch (const Error&) {
                    // rendering failures never abort the sweep
                }
            }
            results.push_back(row);
        }
    }
    return results;
}

void write_benchmark_csv(const std::vector<ScenarioResult>& results, std::ostream& out) {
    out << "density,trial,success,distance_m,time_s,effort,v_min,v_max,"
           "freq_hz_mean,freq_hz_sd,path_eff,recovery_fired\n";

    std::vector<double> densities;
    for (const auto& row : results) {
        if (std::find(densities.begin(), densities.end(), row.density) ==
            densities.end())
            densities.push_back(row.density);
        out << format_density(row.density) << ',' << row.trial << ','
            << (row.success ? 1 : 0) << ',' << format_metric(row.traverse_distance)
            << ',' << format_metric(row.traverse_time) << ','
            << format_metric(row.control_effort) << ',' << format_metric(row.speed_min)
            << ',' << format_metric(row.speed_max) << ','
            << format_metric(row.planning_frequency_mean) << ','
            << format_metric(row.planning_frequency_sd) << ','
            << format_metric(row.path_efficiency) << ',' << (row.recovery_fired ? 1 : 0)
            << '\n';
    }

    for (double density : densities) {
        std::vector<double> success, recovery;
        std::vector<std::vector<double>> metrics(8);
        for (const auto& row : results) {
            if (row.density != density) continue;
            success.push_back(row.success ? 1.0 : 0.0);
            recovery.push_back(row.recovery_fired ? 1.0 : 0.0);
            if (!row.success) continue;
            metrics[0].push_back(row.traverse_distance);
            metrics[1].push_back(row.traverse_time);
            metrics[2].push_back(row.control_effort);
            metrics[3].push_back(row.speed_min);
            metrics[4].push_back(row.speed_max);
            metrics[5].push_back(row.planning_frequency_mean);
            metrics[6].push_back(row.planning_frequency_sd);
            metrics[7].push_back(row.path_efficiency);
        }
        out << format_density(density) << ",mean," << format_metric(mean_of(success));
        for (const auto& m : metrics) out << ',' << format_metric(mean_of(m));
        out << ',' << format_metric(mean_of(recovery)) << '\n';
        out << format_density(density) << ",sd," << format_metric(sd_of(success));
        for (const auto& m : metrics)
            out << ',' << format_metric(m.empty() ? kNan : sd_of(m));
        out << ',' << format_metric(sd_of(recovery)) << '\n';
    }
}

void write_benchmark_csv_file(const std::vector<ScenarioResult>& results,
                              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    write_benchmark_csv(results, out);
}

}  // namespace replan
