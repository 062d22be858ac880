#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "replan/errors.hpp"
#include "replan/field_map.hpp"
#include "replan/grid_map.hpp"

using namespace replan;

TEST_CASE("grid file format round trip and strictness") {
    OccupancyGrid grid(4, 3, 0.5, -1.0, 2.0);
    grid.set_occupied(1, 0);
    grid.set_occupied(3, 2);

    std::ostringstream out;
    save_grid(grid, out);
    CHECK(out.str() == "4 3 0.5 -1 2\n.#..\n....\n...#\n");

    std::istringstream in(out.str());
    const OccupancyGrid loaded = load_grid(in);
    CHECK(loaded == grid);

    std::istringstream bad_char("2 2 1 0 0\n.x\n..\n");
    CHECK_THROWS_AS(load_grid(bad_char), GridParseError);
    std::istringstream short_row("2 2 1 0 0\n.\n..\n");
    CHECK_THROWS_AS(load_grid(short_row), GridParseError);
    std::istringstream missing_row("2 2 1 0 0\n..\n");
    CHECK_THROWS_AS(load_grid(missing_row), GridParseError);
    std::istringstream bad_header("2 0 1 0 0\n");
    CHECK_THROWS_AS(load_grid(bad_header), GridParseError);
}

TEST_CASE("distance map: single center obstacle") {
    OccupancyGrid grid(3, 3, 1.0);
    grid.set_occupied(1, 1);
    const auto d = compute_distance_map(grid);
    CHECK(d[grid.index(0, 0)] == doctest::Approx(std::sqrt(2.0)));
    CHECK(d[grid.index(2, 2)] == doctest::Approx(std::sqrt(2.0)));
    CHECK(d[grid.index(1, 0)] == doctest::Approx(1.0));
    CHECK(d[grid.index(1, 1)] == 0.0);
}

TEST_CASE("distance map: all occupied is identically zero") {
    OccupancyGrid grid(5, 4, 0.2);
    for (auto& c : grid.cells) c = 1;
    for (double d : compute_distance_map(grid)) CHECK(d == 0.0);
}

TEST_CASE("distance map: empty grid raises EmptyMapError") {
    OccupancyGrid grid(5, 5, 1.0);
    CHECK_THROWS_AS(compute_distance_map(grid), EmptyMapError);
}

TEST_CASE("distance map equals brute force on random 50x50 grids") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const auto grid = oracles::random_grid(seed + 100, 50, 50, 0.15);
        if (grid.occupied_count() == 0) continue;
        const auto fast = compute_squared_distance_map(grid);
        const auto brute = oracles::brute_distance_sq(grid);
        REQUIRE(fast.size() == brute.size());
        for (size_t i = 0; i < fast.size(); ++i) REQUIRE(fast[i] == brute[i]);
    }
}

TEST_CASE("voronoi: perpendicular bisector of two obstacles") {
    OccupancyGrid grid(11, 11, 1.0);
    grid.set_occupied(0, 5);
    grid.set_occupied(10, 5);
    const FieldMap field(grid);
    REQUIRE(field.has_voronoi_edges());
    for (int y = 0; y < 11; ++y) CHECK(field.voronoi_edge(5, y));
    // cells clearly closer to one obstacle are not edge cells
    CHECK_FALSE(field.voronoi_edge(1, 5));
    CHECK_FALSE(field.voronoi_edge(9, 5));
    CHECK(field.d_vor(5, 5) == 0.0);
}

TEST_CASE("voronoi: single basin has no edges, field decays with distance") {
    OccupancyGrid grid(21, 21, 1.0);
    grid.set_occupied(10, 10);
    const FieldMap field(grid, {1.0, 8.0});
    CHECK_FALSE(field.has_voronoi_edges());
    CHECK(field.component_count() == 1);
    // R collapses to 1: field is the pure distance penalty, decreasing
    double prev = field.field_at(grid.cell_center(10, 10));
    CHECK(prev == doctest::Approx(1.0));
    for (int x = 11; x < 18; ++x) {
        const double value = field.field_at(grid.cell_center(x, 10));
        CHECK(value < prev);
        prev = value;
    }
}

TEST_CASE("voronoi edges oracle: marked cells have two near-equal basins") {
    for (uint64_t seed = 0; seed < 8; ++seed) {
        const auto grid = oracles::random_grid(seed + 500, 50, 50, 0.08);
        int count = 0;
        const auto labels = obstacle_components(grid, count);
        if (count < 2) continue;
        const FieldMap field(grid);
        for (int y = 0; y < grid.height; ++y) {
            for (int x = 0; x < grid.width; ++x) {
                if (!field.voronoi_edge(x, y)) continue;
                int64_t d1, d2;
                int basin;
                oracles::brute_two_basins(grid, labels, count, x, y, d1, d2, basin);
                REQUIRE(d2 < std::numeric_limits<int64_t>::max());
                // sqrt(d2) - sqrt(d1) <= sqrt(2) in cell units
                CHECK(std::sqrt(static_cast<double>(d2)) -
                          std::sqrt(static_cast<double>(d1)) <=
                      M_SQRT2 + 1e-9);
            }
        }
    }
}

TEST_CASE("voronoi field: Eq limits and hand value") {
    SUBCASE("occupied cell evaluates to 1") {
        OccupancyGrid grid(9, 9, 1.0);
        grid.set_occupied(2, 2);
        grid.set_occupied(6, 6);
        const FieldMap field(grid);
        CHECK(field.field_at(grid.cell_center(2, 2)) == doctest::Approx(1.0));
        CHECK(field.field_at(grid.cell_center(6, 6)) == doctest::Approx(1.0));
    }
    SUBCASE("Voronoi edge cell evaluates to 0") {
        OccupancyGrid grid(11, 11, 1.0);
        grid.set_occupied(0, 5);
        grid.set_occupied(10, 5);
        const FieldMap field(grid);
        CHECK(field.field_at(grid.cell_center(5, 5)) == doctest::Approx(0.0));
    }
    SUBCASE("hand evaluation: A=0.75 S=0.5 R=0.5 -> 0.1875") {
        // direct factor arithmetic at d_obs = 1, d_vor = 1, lambda_v = 1,
        // d_obs_max = 2; geometry: obstacles at x=0 and x=4 on one row,
        // probing x=1 (one cell from the left obstacle, one from the edge)
        OccupancyGrid grid(5, 1, 1.0);
        grid.set_occupied(0, 0);
        grid.set_occupied(4, 0);
        const FieldMap field(grid, {1.0, 2.0});
        REQUIRE(field.has_voronoi_edges());
        REQUIRE(field.voronoi_edge(2, 0));
        REQUIRE(field.d_obs(1, 0) == doctest::Approx(1.0));
        REQUIRE(field.d_vor(1, 0) == doctest::Approx(1.0));
        CHECK(field.field_at(grid.cell_center(1, 0)) == doctest::Approx(0.1875));
    }
}

TEST_CASE("voronoi field: bounds, anchors, and far-field clamp on random grids") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const auto grid = oracles::random_grid(seed + 900, 40, 40, 0.05);
        if (grid.occupied_count() == 0) continue;
        const FieldMap field(grid, {1.0, 3.0});
        for (int y = 0; y < grid.height; ++y) {
            for (int x = 0; x < grid.width; ++x) {
                const double value = field.field_at(grid.cell_center(x, y));
                CHECK(value >= 0.0);
                CHECK(value <= 1.0);
                if (grid.occupied(x, y)) CHECK(value == doctest::Approx(1.0));
                if (field.voronoi_edge(x, y)) CHECK(value == doctest::Approx(0.0));
                if (field.d_obs(x, y) >= 3.0) CHECK(value == 0.0);
            }
        }
    }
}

TEST_CASE("voronoi field: monotone decay along a corridor ray") {
    // wall on the left, wall on the right, GVD edge down the middle
    OccupancyGrid grid(21, 9, 1.0);
    for (int y = 0; y < 9; ++y) {
        grid.set_occupied(0, y);
        grid.set_occupied(20, y);
    }
    const FieldMap field(grid, {1.0, 50.0});
    double prev = field.field_at(grid.cell_center(0, 4));
    for (int x = 1; x <= 10; ++x) {
        const double value = field.field_at(grid.cell_center(x, 4));
        CHECK(value <= prev + 1e-12);
        prev = value;
    }
}

TEST_CASE("voronoi field: out of bounds") {
    OccupancyGrid grid(5, 5, 1.0);
    grid.set_occupied(2, 2);
    const FieldMap field(grid);
    CHECK_THROWS_AS(field.field_at({-1.0, 2.0}), OutOfBoundsError);
    CHECK(field.field_at_or({-1.0, 2.0}, 1.0) == 1.0);
}

TEST_CASE("obstacle_density: forced readings") {
    OccupancyGrid before(10, 10, 1.0);
    OccupancyGrid after = before;
    for (int i = 0; i < 20; ++i) after.cells[i] = 1;
    CHECK(obstacle_density(before, after) == doctest::Approx(20.0));
    CHECK(obstacle_density(before, before) == doctest::Approx(0.0));

    OccupancyGrid other(9, 10, 1.0);
    CHECK_THROWS_AS(obstacle_density(before, other), DimensionMismatchError);

    OccupancyGrid full(4, 4, 1.0);
    for (auto& c : full.cells) c = 1;
    CHECK_THROWS_AS(obstacle_density(full, full), NoFreeSpaceError);
}

TEST_CASE("obstacle_density is zero on identical random grids") {
    for (uint64_t seed = 0; seed < 5; ++seed) {
        const auto grid = oracles::random_grid(seed, 30, 30, 0.3);
        if (grid.free_count() == 0) continue;
        CHECK(obstacle_density(grid, grid) == 0.0);
    }
}

TEST_CASE("narrow_gap_metric: two smallest pairwise clearances") {
    OccupancyGrid grid(40, 40, 1.0);
    // four single-cell obstacles: pair distances 3 (a-b), 5 (c-d), rest larger
    grid.set_occupied(0, 0);   // a
    grid.set_occupied(3, 0);   // b
    grid.set_occupied(0, 20);  // c
    grid.set_occupied(5, 20);  // d
    // pair distances: ab=3, cd=5, ac=20, ad=20.6, bc=20.2, bd=20.1
    CHECK(narrow_gap_metric(grid) == doctest::Approx(4.0));
}

TEST_CASE("narrow_gap_metric: exactly two components returns the single gap") {
    OccupancyGrid grid(10, 10, 1.0);
    grid.set_occupied(1, 1);
    grid.set_occupied(1, 3);  // 2.0 m apart
    CHECK(narrow_gap_metric(grid) == doctest::Approx(2.0));
}

TEST_CASE("narrow_gap_metric: under two components") {
    OccupancyGrid grid(10, 10, 1.0);
    CHECK_THROWS_AS(narrow_gap_metric(grid), InsufficientObstaclesError);
    grid.set_occupied(1, 1);
    CHECK_THROWS_AS(narrow_gap_metric(grid), InsufficientObstaclesError);
    grid.set_occupied(2, 2);  // 8-connected with (1,1): still one component
    CHECK_THROWS_AS(narrow_gap_metric(grid), InsufficientObstaclesError);
}

TEST_CASE("distance map matches the metric version") {
    const auto grid = oracles::random_grid(3, 25, 25, 0.2, 0.25);
    const auto sq = compute_squared_distance_map(grid);
    const auto metric = compute_distance_map(grid);
    for (size_t i = 0; i < sq.size(); ++i)
        CHECK(metric[i] ==
              doctest::Approx(0.25 * std::sqrt(static_cast<double>(sq[i]))));
}
