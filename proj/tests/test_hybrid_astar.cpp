#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "replan/hybrid_astar.hpp"
#include "replan/scenario.hpp"

using namespace replan;

namespace {

// Paper-default weights.
HeuristicWeights paper_weights() { return {}; }

VehicleParams bench_vehicle() {
    VehicleParams p;  // defaults: L=0.65, delta_max=0.4, footprint 0.98x0.74
    return p;
}

OccupancyGrid open_grid(int w = 200, int h = 200, double res = 0.1) {
    return OccupancyGrid(w, h, res);
}

}  // namespace

TEST_CASE("transition_cost: hand values with paper parameters") {
    const HeuristicWeights w = paper_weights();
    SearchNode root;
    root.g_score = 0.0;  // no arrived_by: phi_t = 0

    CHECK(transition_cost(root, {0.0, 1.0}, w) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(transition_cost(root, {0.5, -1.0}, w) ==
          doctest::Approx(1.255).epsilon(1e-12));
}

TEST_CASE("transition_cost: direction symmetry when penalties are equal") {
    const HeuristicWeights w = paper_weights();
    SearchNode root;
    const double forward = transition_cost(root, {0.0, 1.3}, w);
    const double backward = transition_cost(root, {0.0, -1.3}, w);
    CHECK(forward == doctest::Approx(backward).epsilon(1e-15));
}

TEST_CASE("transition_cost: accumulates parent cost and steering change") {
    const HeuristicWeights w = paper_weights();
    SearchNode parent;
    parent.g_score = 2.0;
    parent.arrived_by = MotionPrimitive{0.3, 1.0};
    // g = 2 + 1*1.5 + 0.5*0.1*1.5 + 0.01*|0.1-0.3|
    CHECK(transition_cost(parent, {0.1, 1.5}, w) ==
          doctest::Approx(2.0 + 1.5 + 0.075 + 0.002).epsilon(1e-12));
}

TEST_CASE("heuristic_cost: hand values and linearity") {
    HeuristicWeights w = paper_weights();
    CHECK(heuristic_cost({1, 2, 0.5}, {1, 2, -1.0}, w) == 0.0);
    CHECK(heuristic_cost({0, 0, 0}, {2, 0, 0}, w) ==
          doctest::Approx(10.001).epsilon(1e-12));
    const double base = heuristic_cost({0, 0, 0}, {3, 4, 1}, w);
    w.lambda_heu *= 3.0;
    CHECK(heuristic_cost({0, 0, 0}, {3, 4, 1}, w) ==
          doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("collision_free: empty grid and direct hits") {
    const auto grid = open_grid();
    const auto params = bench_vehicle();
    CHECK(collision_free({10, 10, 0.7}, grid, params));
    CHECK_FALSE(collision_free({-5, 10, 0}, grid, params));  // out of bounds

    auto walled = grid;
    walled.set_occupied(100, 100);
    CHECK_FALSE(collision_free({10.05, 10.05, 0}, walled, params));
}

TEST_CASE("collision_free: agrees with the rotated-rectangle oracle") {
    auto grid = open_grid(60, 60, 0.1);
    grid.set_occupied(30, 30);
    grid.set_occupied(31, 30);
    grid.set_occupied(12, 40);
    const auto params = bench_vehicle();

    Rng rng(41);
    int disagreements = 0, collisions_seen = 0;
    for (int i = 0; i < 400; ++i) {
        const Pose2D pose{rng.uniform(2.2, 3.8), rng.uniform(2.2, 4.4),
                          rng.uniform(-M_PI, M_PI)};
        const bool fast = collision_free(pose, grid, params);
        const bool slow = oracles::footprint_free_oracle(pose, grid, params, kRearAxleShare);
        if (fast != slow) ++disagreements;
        if (!slow) ++collisions_seen;
    }
    CHECK(disagreements == 0);
    CHECK(collisions_seen > 20);  // the sweep actually exercises collisions
}

TEST_CASE("collision_free: 45 degree corner overlap") {
    auto grid = open_grid(60, 60, 0.1);
    grid.set_occupied(35, 30);  // world (3.55, 3.05)
    const auto params = bench_vehicle();
    // rear axle placed so only the front corner reaches the obstacle
    const Pose2D pose{3.05, 2.55, M_PI / 4.0};
    CHECK(collision_free(pose, grid, params) ==
          oracles::footprint_free_oracle(pose, grid, params, kRearAxleShare));
    CHECK_FALSE(collision_free(pose, grid, params));
}

TEST_CASE("search: straight free corridor") {
    const auto grid = open_grid();
    const auto params = bench_vehicle();
    const HeuristicWeights weights = paper_weights();
    const Pose2D start{4, 10, 0}, goal{14, 10, 0};

    const auto result =
        hybrid_astar_search(grid, start, goal, params, weights, SearchLimits{});
    REQUIRE(result.ok());
    REQUIRE(result.path.size() >= 2);
    CHECK(distance_xy(result.path.back().pose, goal) <= 0.2);
    CHECK(std::abs(angle_diff(result.path.back().pose.theta, goal.theta)) <= 0.1);

    double path_len = 0.0;
    for (size_t i = 1; i < result.path.size(); ++i) {
        CHECK(result.path[i].pose.x >= result.path[i - 1].pose.x - 1e-9);  // monotone
        path_len += std::abs(result.path[i].arrived_by->arc_length);
    }
    // cost ~ lambda_f * length within one primitive quantum (straight arcs
    // carry no steering penalties)
    CHECK(result.cost >= path_len * weights.lambda_f - 1e-9);
    CHECK(result.cost <= (path_len + 2.0 * params.s_max) * weights.lambda_f + 1.0);
}

TEST_CASE("search: kinematic chain, reproducible cost, determinism") {
    auto grid = open_grid();
    for (int x = 60; x < 140; ++x) grid.set_occupied(x, 110);  // wall above route
    const auto params = bench_vehicle();
    const HeuristicWeights weights = paper_weights();
    const Pose2D start{4, 10, 0.2}, goal{15, 12, 0.9};

    const auto result =
        hybrid_astar_search(grid, start, goal, params, weights, SearchLimits{});
    REQUIRE(result.ok());

    // consecutive poses satisfy the transition model
    for (size_t i = 1; i < result.path.size(); ++i) {
        const Pose2D expect =
            propagate(result.path[i - 1].pose, *result.path[i].arrived_by, params);
        CHECK(std::abs(expect.x - result.path[i].pose.x) < 1e-9);
        CHECK(std::abs(expect.y - result.path[i].pose.y) < 1e-9);
        CHECK(std::abs(angle_diff(expect.theta, result.path[i].pose.theta)) < 1e-9);
    }

    // re-summing transition costs reproduces the reported cost
    SearchNode node;
    node.g_score = 0.0;
    for (size_t i = 1; i < result.path.size(); ++i) {
        node.g_score = transition_cost(node, *result.path[i].arrived_by, {});
        node.arrived_by = result.path[i].arrived_by;
    }
    CHECK(std::abs(node.g_score - result.cost) < 1e-9);

    // every intermediate pose along every primitive is collision free
    for (size_t i = 1; i < result.path.size(); ++i) {
        for (const Pose2D& p : sample_arc(result.path[i - 1].pose,
                                          *result.path[i].arrived_by, params,
                                          0.5 * grid.resolution))
            CHECK(collision_free(p, grid, params));
    }

    // identical inputs give an identical path
    const auto again =
        hybrid_astar_search(grid, start, goal, params, weights, SearchLimits{});
    REQUIRE(again.ok());
    REQUIRE(again.path.size() == result.path.size());
    for (size_t i = 0; i < again.path.size(); ++i)
        CHECK(again.path[i].pose == result.path[i].pose);
    CHECK(again.expansions == result.expansions);
}

TEST_CASE("search: admissible-ordering sanity on an obstacle-free grid") {
    const auto grid = open_grid();
    const auto params = bench_vehicle();
    HeuristicWeights weights = paper_weights();
    weights.lambda_s = 0.0;
    weights.lambda_sc = 0.0;
    weights.eta = 1.0 + 1e-12;  // eta > 1 required; effectively 1

    const Pose2D start{3, 3, M_PI / 4}, goal{15, 15, M_PI / 4};
    const auto result =
        hybrid_astar_search(grid, start, goal, params, weights, SearchLimits{});
    REQUIRE(result.ok());
    double path_len = 0.0;
    for (size_t i = 1; i < result.path.size(); ++i)
        path_len += std::abs(result.path[i].arrived_by->arc_length);
    CHECK(path_len <= distance_xy(start, goal) + 2.0 * (2.0 * params.s_max));
}

TEST_CASE("search: dead end requires reversing") {
    // A cul-de-sac narrower than the turning circle, goal behind the start.
    auto grid = open_grid(200, 200, 0.1);
    for (int x = 0; x < 200; ++x)
        for (int y = 0; y < 200; ++y)
            if (!(y > 88 && y < 112 && x < 120)) grid.set_occupied(x, y);
    const auto params = bench_vehicle();
    const Pose2D start{9.0, 10.0, 0.0};   // deep in the dead end, facing the wall
    const Pose2D goal{3.0, 10.0, 0.0};    // behind the robot, same heading

    REQUIRE(collision_free(start, grid, params));
    REQUIRE(collision_free(goal, grid, params));

    // forward-only motion provably cannot reach the goal here
    CHECK_FALSE(oracles::primitive_bfs_reachable(grid, start, goal, params,
                                                 Direction::Forward, 0.2, 0.1, 20000));

    const auto result =
        hybrid_astar_search(grid, start, goal, params, paper_weights(), SearchLimits{});
    REQUIRE(result.ok());
    bool used_reverse = false;
    for (size_t i = 1; i < result.path.size(); ++i)
        used_reverse |= result.path[i].arrived_by->arc_length < 0.0;
    CHECK(used_reverse);
}

TEST_CASE("search: enclosed goal yields NoPath") {
    auto grid = open_grid(120, 120, 0.1);
    for (int x = 40; x <= 80; ++x) {
        for (int y = 40; y <= 80; ++y) {
            const bool ring = x == 40 || x == 80 || y == 40 || y == 80;
            if (ring) grid.set_occupied(x, y);
        }
    }
    const auto params = bench_vehicle();
    const Pose2D start{1.5, 1.5, 0}, goal{6.0, 6.0, 0};  // goal inside the ring
    const auto result =
        hybrid_astar_search(grid, start, goal, params, paper_weights(), SearchLimits{});
    CHECK(result.status == SearchStatus::NoPath);
    CHECK(result.path.empty());
}

TEST_CASE("search: expansion limit reported") {
    auto grid = open_grid(120, 120, 0.1);
    for (int x = 40; x <= 80; ++x)
        for (int y = 40; y <= 80; ++y)
            if (x == 40 || x == 80 || y == 40 || y == 80) grid.set_occupied(x, y);
    const auto params = bench_vehicle();
    SearchLimits limits;
    limits.max_expansions = 50;
    const auto result = hybrid_astar_search(grid, {1.5, 1.5, 0}, {6.0, 6.0, 0}, params,
                                            paper_weights(), limits);
    CHECK(result.status == SearchStatus::ExpansionLimit);
}

TEST_CASE("HeuristicWeights validation") {
    HeuristicWeights w;
    CHECK_NOTHROW(w.validate());
    w.eta = 1.0;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
    w = {};
    w.lambda_s = -0.1;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}
