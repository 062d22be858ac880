#include "replan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "replan/errors.hpp"
#include "replan/field_map.hpp"

namespace replan {

uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b) {
    Rng rng(master ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL));
    return rng.next();
}

namespace {

struct Rect {
    double x0, y0, x1, y1;
};

double rect_distance(const Rect& a, const Rect& b) {
    const double dx = std::max({a.x0 - b.x1, b.x0 - a.x1, 0.0});
    const double dy = std::max({a.y0 - b.y1, b.y0 - a.y1, 0.0});
    return std::hypot(dx, dy);
}

double rect_point_distance(const Rect& r, Point2 p) {
    const double dx = std::max({r.x0 - p.x, p.x - r.x1, 0.0});
    const double dy = std::max({r.y0 - p.y, p.y - r.y1, 0.0});
    return std::hypot(dx, dy);
}

// Cells whose centers fall inside the rectangle (world coordinates).
void rasterize(OccupancyGrid& grid, const Rect& r, std::vector<size_t>& touched) {
    int x0, y0, x1, y1;
    grid.world_to_cell(r.x0, r.y0, x0, y0);
    grid.world_to_cell(r.x1, r.y1, x1, y1);
    for (int iy = std::max(y0, 0); iy <= std::min(y1, grid.height - 1); ++iy) {
        for (int ix = std::max(x0, 0); ix <= std::min(x1, grid.width - 1); ++ix) {
            const Point2 c = grid.cell_center(ix, iy);
            if (c.x < r.x0 || c.x > r.x1 || c.y < r.y0 || c.y > r.y1) continue;
            if (grid.occupied(ix, iy)) continue;
            grid.set_occupied(ix, iy);
            touched.push_back(grid.index(ix, iy));
        }
    }
}

}  // namespace

// Obstacles form randomized rows of rectangular blocks separated by door
// gaps, the layout the density targets are actually reachable with under
// a hard pairwise spacing: row pitch keeps min_spacing between rows, doors
// keep it between blocks of a row. Block width auto-calibrates to the
// density target; the final block is trimmed to land inside the band.
OccupancyGrid generate_scenario(const ScenarioSpec& spec, const VehicleParams& params) {
    if (spec.target_density <= 0.0 || spec.target_density >= 100.0)
        throw std::invalid_argument("target_density must be in (0, 100)");
    if (spec.min_spacing <= 0.0)
        throw std::invalid_argument("min_spacing must be > 0");

    const double free_before = static_cast<double>(spec.base_grid.free_count());
    if (free_before == 0.0) throw NoFreeSpaceError("base grid has no free space");

    const double gap = spec.min_spacing;
    const double world_w = spec.base_grid.world_width();
    const double world_h = spec.base_grid.world_height();
    const double endpoint_clearance =
        gap + std::hypot(0.5 * params.footprint_length, 0.5 * params.footprint_width);
    const double target = spec.target_density;
    const double tol = spec.density_tolerance;

    // Initial row width assuming ~78% in-row fill, refined by remeasuring.
    const double fill = 0.78;
    const double fraction = std::min(target / 100.0 / fill, 0.9);
    double row_width = gap * fraction / (1.0 - fraction);
    const double width_cap = std::max(0.5, (world_h - 2.0 * gap) / 2.0);
    const int calibration_rounds = std::max(1, spec.max_attempts / 1000);

    for (int round = 0; round < calibration_rounds; ++round) {
        row_width = std::clamp(row_width, 0.3, width_cap);
        const bool at_cap = row_width >= width_cap - 1e-9;
        Rng rng(derive_seed(spec.seed, 0x526f77, static_cast<uint64_t>(round)));
        OccupancyGrid grid = spec.base_grid;
        std::vector<size_t> touched;
        long occupied_added = 0;
        double density = 0.0;
        bool done = false;
        const double cell_area = grid.resolution * grid.resolution;

        const double pitch = row_width + gap;
        for (double y0 = spec.base_grid.origin_y + 0.5 * gap;
             y0 + row_width <= spec.base_grid.origin_y + world_h && !done; y0 += pitch) {
            // Start/goal keep-out holes for this row: wide enough that the
            // blocks on either side also stay min_spacing apart.
            std::vector<std::pair<double, double>> holes;
            for (const Pose2D* endpoint : {&spec.start, &spec.goal}) {
                const double dy = std::max(
                    {y0 - endpoint->y, endpoint->y - (y0 + row_width), 0.0});
                if (dy >= endpoint_clearance) continue;
                const double half =
                    std::max(std::sqrt(endpoint_clearance * endpoint_clearance - dy * dy),
                             0.5 * gap);
                holes.emplace_back(endpoint->x - half, endpoint->x + half);
            }
            std::sort(holes.begin(), holes.end());

            auto place = [&](double x0, double x1) {
                if (done || x1 - x0 < 0.5) return;
                // Trim the closing block so the density lands in the band.
                const double remaining_cells = (target - density) / 100.0 * free_before;
                const double projected_cells = (x1 - x0) * row_width / cell_area;
                if (projected_cells > remaining_cells) {
                    x1 = x0 + remaining_cells * cell_area / row_width;
                    if (x1 - x0 < 0.5) {
                        done = density >= target - tol;
                        return;
                    }
                }
                touched.clear();
                rasterize(grid, Rect{x0, y0, x1, y0 + row_width}, touched);
                occupied_added += static_cast<long>(touched.size());
                density = 100.0 * static_cast<double>(occupied_added) / free_before;
                if (density >= target - 0.5 * tol) done = true;
            };

            double cursor = spec.base_grid.origin_x + rng.uniform(0.0, gap);
            const double x_end = spec.base_grid.origin_x + world_w;
            while (cursor < x_end && !done) {
                const double block_len = std::min(rng.uniform(6.0, 14.0), x_end - cursor);
                if (block_len < 0.5) break;
                // Carve the keep-out holes out of the block.
                double piece_start = cursor;
                const double piece_end = cursor + block_len;
                for (const auto& [lo, hi] : holes) {
                    if (hi <= piece_start || lo >= piece_end) continue;
                    place(piece_start, std::min(lo, piece_end));
                    piece_start = std::max(piece_start, hi);
                }
                place(piece_start, piece_end);
                cursor = piece_end + rng.uniform(gap, gap + 0.5);
            }
        }

        if (density >= target - tol && density <= target + tol) return grid;
        // Recalibrate the row width toward the target and retry.
        const double ratio = density > 1e-6 ? target / density : 2.0;
        if (at_cap && ratio > 1.0) break;  // already maxed out
        row_width *= std::clamp(ratio, 0.6, 1.8);
    }
    throw DensityUnreachableError(
        "could not reach target density under the spacing constraints");
}

double reference_path_length(const OccupancyGrid& grid, const Pose2D& start,
                             const Pose2D& goal, const VehicleParams& params) {
    const double inflate = 0.5 * params.footprint_width;
    const auto sq = grid.occupied_count() > 0
                        ? compute_squared_distance_map(grid)
                        : std::vector<int64_t>(grid.cells.size(),
                                               std::numeric_limits<int64_t>::max());
    const double inflate_cells_sq = (inflate / grid.resolution) * (inflate / grid.resolution);
    auto blocked = [&](int ix, int iy) {
        return static_cast<double>(sq[grid.index(ix, iy)]) <= inflate_cells_sq;
    };

    int sx, sy, gx, gy;
    grid.world_to_cell(start.x, start.y, sx, sy);
    grid.world_to_cell(goal.x, goal.y, gx, gy);
    if (!grid.in_bounds(sx, sy) || !grid.in_bounds(gx, gy) || blocked(sx, sy) ||
        blocked(gx, gy))
        throw NoReferencePathError("start or goal blocked on the inflated grid");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(grid.cells.size(), inf);
    using Entry = std::pair<double, size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    dist[grid.index(sx, sy)] = 0.0;
    open.push({0.0, grid.index(sx, sy)});
    const double straight = grid.resolution;
    const double diagonal = M_SQRT2 * grid.resolution;

    while (!open.empty()) {
        auto [d, idx] = open.top();
        open.pop();
        if (d > dist[idx]) continue;
        if (idx == grid.index(gx, gy)) return d;
        const int cx = static_cast<int>(idx % grid.width);
        const int cy = static_cast<int>(idx / grid.width);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = cx + dx, ny = cy + dy;
                if (!grid.in_bounds(nx, ny) || blocked(nx, ny)) continue;
                const double step = (dx != 0 && dy != 0) ? diagonal : straight;
                const size_t nidx = grid.index(nx, ny);
                if (dist[idx] + step < dist[nidx]) {
                    dist[nidx] = dist[idx] + step;
                    open.push({dist[nidx], nidx});
                }
            }
        }
    }
    throw NoReferencePathError("goal unreachable on the inflated grid");
}

double path_efficiency(double actual_length, const OccupancyGrid& grid,
                       const Pose2D& start, const Pose2D& goal,
                       const VehicleParams& params) {
    if (actual_length <= 0.0)
        throw std::invalid_argument("actual_length must be > 0");
    return reference_path_length(grid, start, goal, params) / actual_length;
}

}  // namespace replan
