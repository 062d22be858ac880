#include "replan/grid_map.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "replan/errors.hpp"

namespace replan {

size_t OccupancyGrid::occupied_count() const {
    return static_cast<size_t>(std::count(cells.begin(), cells.end(), uint8_t{1}));
}

namespace {

// Shortest round-trip decimal representation.
std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

OccupancyGrid load_grid(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw GridParseError("missing header line");

    OccupancyGrid grid;
    std::istringstream hs(header);
    if (!(hs >> grid.width >> grid.height >> grid.resolution >> grid.origin_x >>
          grid.origin_y))
        throw GridParseError("malformed header: expected 'width height resolution origin_x origin_y'");
    std::string extra;
    if (hs >> extra) throw GridParseError("trailing tokens in header");
    if (grid.width <= 0 || grid.height <= 0 || grid.resolution <= 0.0)
        throw GridParseError("width, height, and resolution must be positive");

    grid.cells.assign(static_cast<size_t>(grid.width) * grid.height, 0);
    for (int iy = 0; iy < grid.height; ++iy) {
        std::string row;
        if (!std::getline(in, row))
            throw GridParseError("unexpected end of file at row " + std::to_string(iy));
        if (static_cast<int>(row.size()) != grid.width)
            throw GridParseError("row " + std::to_string(iy) + " has " +
                                 std::to_string(row.size()) + " characters, expected " +
                                 std::to_string(grid.width));
        for (int ix = 0; ix < grid.width; ++ix) {
            char c = row[ix];
            if (c == '#')
                grid.set_occupied(ix, iy);
            else if (c != '.')
                throw GridParseError(std::string("invalid character '") + c + "' in row " +
                                     std::to_string(iy));
        }
    }
    return grid;
}

OccupancyGrid load_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open grid file: " + path);
    return load_grid(in);
}

void save_grid(const OccupancyGrid& grid, std::ostream& out) {
    out << grid.width << ' ' << grid.height << ' ' << format_double(grid.resolution)
        << ' ' << format_double(grid.origin_x) << ' ' << format_double(grid.origin_y)
        << '\n';
    std::string row(static_cast<size_t>(grid.width), '.');
    for (int iy = 0; iy < grid.height; ++iy) {
        for (int ix = 0; ix < grid.width; ++ix)
            row[ix] = grid.occupied(ix, iy) ? '#' : '.';
        out << row << '\n';
    }
}

void save_grid_file(const OccupancyGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    save_grid(grid, out);
}

}  // namespace replan
