// replan command-line front end: plan single queries, generate scenario
// grids, run density benchmarks, and render field maps.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "replan/benchmark.hpp"
#include "replan/config.hpp"
#include "replan/errors.hpp"
#include "replan/pipeline.hpp"
#include "replan/scenario.hpp"
#include "replan/svg_render.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlanFailure = 2;
constexpr int kExitInputError = 3;

replan::Pose2D parse_pose(const std::string& text) {
    replan::Pose2D pose;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> pose.x >> c1 >> pose.y >> c2 >> pose.theta) || c1 != ',' || c2 != ',')
        throw replan::ConfigError("expected pose as X,Y,T: " + text);
    std::string rest;
    if (in >> rest) throw replan::ConfigError("trailing characters in pose: " + text);
    return pose;
}

std::pair<double, double> parse_size(const std::string& text) {
    double w, h;
    char x;
    std::istringstream in(text);
    if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || w <= 0 || h <= 0)
        throw replan::ConfigError("expected size as WxH in meters: " + text);
    return {w, h};
}

int run_plan(const std::string& map_file, const std::string& start_text,
             const std::string& goal_text, const std::string& config_file,
             const std::string& out_traj, const std::string& out_svg) {
    replan::PlannerSettings settings;
    if (!config_file.empty()) settings = replan::load_config_file(config_file);

    replan::PlanningQuery query;
    query.grid = replan::load_grid_file(map_file);
    query.start = parse_pose(start_text);
    query.goal = parse_pose(goal_text);

    const replan::PlanResult result = replan::plan_resilient(query, settings);
    std::fprintf(stderr,
                 "plan: %s  recovery=%s searches=%d expansions=%ld total=%.2fms\n",
                 result.ok() ? "ok" : "FAILED", result.report.recovery_fired ? "yes" : "no",
                 result.report.search_invocations, result.report.expansions_total,
                 result.report.total_ms);
    if (!result.ok()) return kExitPlanFailure;

    replan::save_trajectory_file(result.trajectory, out_traj);
    if (!out_svg.empty())
        replan::render_plan_svg_file(query.grid, result, query.start, query.goal, out_svg);
    return kExitOk;
}

int run_gen(const std::string& size_text, double resolution, double density,
            double min_spacing, uint64_t seed, const std::string& out_file) {
    const auto [w, h] = parse_size(size_text);
    replan::ScenarioSpec spec;
    spec.seed = seed;
    spec.base_grid = replan::OccupancyGrid(
        std::max(1, static_cast<int>(std::lround(w / resolution))),
        std::max(1, static_cast<int>(std::lround(h / resolution))), resolution);
    spec.target_density = density;
    spec.min_spacing = min_spacing;
    spec.start = {0.1 * w, 0.1 * h, 0.0};
    spec.goal = {0.9 * w, 0.9 * h, 0.0};

    const replan::OccupancyGrid grid =
        replan::generate_scenario(spec, replan::VehicleParams{});
    replan::save_grid_file(grid, out_file);
    return kExitOk;
}

int run_bench(const std::string& densities_text, int trials, uint64_t seed,
              const std::string& out_file, const std::string& svg_dir,
              const std::string& config_file, bool no_recovery, bool wall_clock,
              double map_size, double resolution) {
    replan::BenchmarkOptions options;
    options.densities.clear();
    std::istringstream in(densities_text);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            options.densities.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw replan::ConfigError("bad density value: " + token);
        }
    }
    options.trials = trials;
    options.seed = seed;
    if (!config_file.empty()) options.settings = replan::load_config_file(config_file);
    options.enable_recovery = !no_recovery;
    options.wall_clock_timing = wall_clock;
    options.map_size = map_size;
    options.resolution = resolution;
    options.svg_dir = svg_dir;

    const auto results = replan::run_benchmark(options);
    replan::write_benchmark_csv_file(results, out_file);

    int successes = 0;
    for (const auto& row : results) successes += row.success ? 1 : 0;
    std::fprintf(stderr, "bench: %zu trials, %d successful, results in %s\n",
                 results.size(), successes, out_file.c_str());
    return kExitOk;
}

int run_field(const std::string& map_file, const std::string& out_svg,
              const std::string& config_file) {
    replan::PlannerSettings settings;
    if (!config_file.empty()) settings = replan::load_config_file(config_file);
    const replan::OccupancyGrid grid = replan::load_grid_file(map_file);
    const replan::FieldMap field(grid, settings.field);
    replan::render_field_svg_file(field, out_svg);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"replan: resilient trajectory replanning for car-like vehicles"};
    app.require_subcommand(1);

    std::string map_file, start_text, goal_text, config_file, out_traj, out_svg;
    auto* plan = app.add_subcommand("plan", "plan a single query on a map file");
    plan->add_option("--map", map_file, "grid map file")->required();
    plan->add_option("--start", start_text, "start pose X,Y,T")->required();
    plan->add_option("--goal", goal_text, "goal pose X,Y,T")->required();
    plan->add_option("--config", config_file, "planner config JSON");
    plan->add_option("--out-traj", out_traj, "trajectory output file")->required();
    plan->add_option("--out-svg", out_svg, "optional SVG render");

    std::string size_text = "20x20", gen_out;
    double resolution = 0.1, density = 30.0, min_spacing = 2.5;
    uint64_t seed = 0;
    auto* gen = app.add_subcommand("gen", "generate a random scenario grid");
    gen->add_option("--size", size_text, "map size WxH in meters")->required();
    gen->add_option("--resolution", resolution, "cell size in meters")->required();
    gen->add_option("--density", density, "target obstacle density percent")->required();
    gen->add_option("--min-spacing", min_spacing, "minimum obstacle spacing in meters")
        ->required();
    gen->add_option("--seed", seed, "generator seed")->required();
    gen->add_option("--out", gen_out, "grid output file")->required();

    std::string densities_text = "20,30,40,50", bench_out, svg_dir, bench_config;
    int trials = 5;
    uint64_t bench_seed = 0;
    bool no_recovery = false, wall_clock = false;
    double map_size = 32.0, bench_resolution = 0.1;
    auto* bench = app.add_subcommand("bench", "run the obstacle-density benchmark");
    bench->add_option("--densities", densities_text, "comma-separated density percents");
    bench->add_option("--trials", trials, "trials per density")->required();
    bench->add_option("--seed", bench_seed, "master seed")->required();
    bench->add_option("--out", bench_out, "CSV output file")->required();
    bench->add_option("--svg-dir", svg_dir, "directory for per-scenario SVG renders");
    bench->add_option("--config", bench_config, "planner config JSON");
    bench->add_flag("--no-recovery", no_recovery, "disable the repair stage (ablation)");
    bench->add_flag("--wall-clock", wall_clock,
                    "report wall-clock planning frequencies (not reproducible)");
    bench->add_option("--map-size", map_size, "scenario map side length in meters");
    bench->add_option("--resolution", bench_resolution, "scenario cell size in meters");

    std::string field_map, field_svg, field_config;
    auto* field = app.add_subcommand("field", "render the clearance field of a map");
    field->add_option("--map", field_map, "grid map file")->required();
    field->add_option("--out-svg", field_svg, "SVG output file")->required();
    field->add_option("--config", field_config, "planner config JSON");

    std::string config_out;
    auto* config = app.add_subcommand("config", "write the reference config JSON");
    config->add_option("--out", config_out, "config output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (app.got_subcommand(plan))
            return run_plan(map_file, start_text, goal_text, config_file, out_traj,
                            out_svg);
        if (app.got_subcommand(gen))
            return run_gen(size_text, resolution, density, min_spacing, seed, gen_out);
        if (app.got_subcommand(bench))
            return run_bench(densities_text, trials, bench_seed, bench_out, svg_dir,
                             bench_config, no_recovery, wall_clock, map_size,
                             bench_resolution);
        if (app.got_subcommand(field)) return run_field(field_map, field_svg, field_config);
        if (app.got_subcommand(config)) {
            replan::save_config_file(replan::PlannerSettings{}, config_out);
            return kExitOk;
        }
    } catch (const replan::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
    return kExitOk;
}
