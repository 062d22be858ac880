// Binary occupancy grid with the text map format used by the CLI.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "replan/geometry.hpp"

namespace replan {

struct OccupancyGrid {
    int width{0};            // cells
    int height{0};           // cells
    double resolution{0.1};  // meters per cell
    double origin_x{0.0};    // world x of cell (0,0) corner
    double origin_y{0.0};    // world y of cell (0,0) corner
    std::vector<uint8_t> cells;  // row-major, 0 = free, 1 = occupied

    OccupancyGrid() = default;
    OccupancyGrid(int w, int h, double res, double ox = 0.0, double oy = 0.0)
        : width(w), height(h), resolution(res), origin_x(ox), origin_y(oy),
          cells(static_cast<size_t>(w) * h, 0) {}

    size_t index(int ix, int iy) const { return static_cast<size_t>(iy) * width + ix; }
    bool in_bounds(int ix, int iy) const {
        return ix >= 0 && ix < width && iy >= 0 && iy < height;
    }
    bool occupied(int ix, int iy) const { return cells[index(ix, iy)] != 0; }
    void set_occupied(int ix, int iy, bool value = true) {
        cells[index(ix, iy)] = value ? 1 : 0;
    }

    /// World coordinate of a cell center.
    Point2 cell_center(int ix, int iy) const {
        return {origin_x + (ix + 0.5) * resolution, origin_y + (iy + 0.5) * resolution};
    }
    /// Cell containing a world point (no bounds check).
    void world_to_cell(double wx, double wy, int& ix, int& iy) const {
        ix = static_cast<int>(std::floor((wx - origin_x) / resolution));
        iy = static_cast<int>(std::floor((wy - origin_y) / resolution));
    }
    bool world_in_bounds(double wx, double wy) const {
        int ix, iy;
        world_to_cell(wx, wy, ix, iy);
        return in_bounds(ix, iy);
    }
    /// True when the world point lies in an occupied cell; out-of-bounds
    /// points count as occupied.
    bool occupied_at(double wx, double wy) const {
        int ix, iy;
        world_to_cell(wx, wy, ix, iy);
        if (!in_bounds(ix, iy)) return true;
        return occupied(ix, iy);
    }

    size_t occupied_count() const;
    size_t free_count() const { return cells.size() - occupied_count(); }

    double world_width() const { return width * resolution; }
    double world_height() const { return height * resolution; }

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;
};

// Text format, one grid per file:
//   line 1:            "width height resolution origin_x origin_y"
//   lines 2..height+1: width characters each, '.' free / '#' occupied,
//                      line 2 being the minimum-y row.
// Every line newline-terminated, no trailing whitespace. The loader
// rejects any other character (GridParseError).
OccupancyGrid load_grid(std::istream& in);
OccupancyGrid load_grid_file(const std::string& path);
void save_grid(const OccupancyGrid& grid, std::ostream& out);
void save_grid_file(const OccupancyGrid& grid, const std::string& path);

}  // namespace replan
