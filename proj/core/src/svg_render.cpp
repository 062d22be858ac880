#include "replan/svg_render.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "replan/errors.hpp"

namespace replan {

namespace {

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf"};
constexpr int kPaletteSize = 6;

struct Mapper {
    double scale, x0, y1;
    double px(double wx) const { return (wx - x0) * scale; }
    double py(double wy) const { return (y1 - wy) * scale; }  // svg y grows down
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void open_svg(std::ostream& out, const OccupancyGrid& grid, const Mapper& m) {
    const double w = grid.world_width() * m.scale;
    const double h = grid.world_height() * m.scale;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h)
        << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
        << "\" fill=\"#ffffff\" stroke=\"#444444\"/>\n";
}

// Occupied cells merged into horizontal runs.
void draw_obstacles(std::ostream& out, const OccupancyGrid& grid, const Mapper& m,
                    const char* fill) {
    for (int iy = 0; iy < grid.height; ++iy) {
        int run = -1;
        for (int ix = 0; ix <= grid.width; ++ix) {
            const bool occ = ix < grid.width && grid.occupied(ix, iy);
            if (occ && run < 0) run = ix;
            if (!occ && run >= 0) {
                const double wx = grid.origin_x + run * grid.resolution;
                const double wy = grid.origin_y + iy * grid.resolution;
                out << "<rect x=\"" << fmt(m.px(wx)) << "\" y=\""
                    << fmt(m.py(wy + grid.resolution)) << "\" width=\""
                    << fmt((ix - run) * grid.resolution * m.scale) << "\" height=\""
                    << fmt(grid.resolution * m.scale) << "\" fill=\"" << fill
                    << "\"/>\n";
                run = -1;
            }
        }
    }
}

void draw_marker(std::ostream& out, const Pose2D& pose, const Mapper& m,
                 const char* color) {
    out << "<circle cx=\"" << fmt(m.px(pose.x)) << "\" cy=\"" << fmt(m.py(pose.y))
        << "\" r=\"5\" fill=\"" << color << "\"/>\n";
    const double tip_x = pose.x + 0.5 * std::cos(pose.theta);
    const double tip_y = pose.y + 0.5 * std::sin(pose.theta);
    out << "<line x1=\"" << fmt(m.px(pose.x)) << "\" y1=\"" << fmt(m.py(pose.y))
        << "\" x2=\"" << fmt(m.px(tip_x)) << "\" y2=\"" << fmt(m.py(tip_y))
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
}

Mapper make_mapper(const OccupancyGrid& grid, double pixels_per_meter) {
    return {pixels_per_meter, grid.origin_x, grid.origin_y + grid.world_height()};
}

}  // namespace

void render_svg(const OccupancyGrid& grid,
                const std::vector<std::vector<Point2>>& trajectories, std::ostream& out,
                const SvgOptions& options, const Pose2D* start, const Pose2D* goal) {
    const Mapper m = make_mapper(grid, options.pixels_per_meter);
    open_svg(out, grid, m);

    if (options.field) {
        const FieldMap& f = *options.field;
        for (int iy = 0; iy < grid.height; ++iy) {
            for (int ix = 0; ix < grid.width; ++ix) {
                const double value = f.field_at(grid.cell_center(ix, iy));
                if (value <= 0.0 || grid.occupied(ix, iy)) continue;
                const double wx = grid.origin_x + ix * grid.resolution;
                const double wy = grid.origin_y + iy * grid.resolution;
                out << "<rect x=\"" << fmt(m.px(wx)) << "\" y=\""
                    << fmt(m.py(wy + grid.resolution)) << "\" width=\""
                    << fmt(grid.resolution * m.scale) << "\" height=\""
                    << fmt(grid.resolution * m.scale) << "\" fill=\"#d62728\" fill-opacity=\""
                    << fmt(0.8 * value) << "\"/>\n";
            }
        }
    }

    draw_obstacles(out, grid, m, "#333333");

    if (options.draw_voronoi_edges && options.field) {
        const FieldMap& f = *options.field;
        for (int iy = 0; iy < grid.height; ++iy) {
            for (int ix = 0; ix < grid.width; ++ix) {
                if (!f.voronoi_edge(ix, iy)) continue;
                const double wx = grid.origin_x + ix * grid.resolution;
                const double wy = grid.origin_y + iy * grid.resolution;
                out << "<rect x=\"" << fmt(m.px(wx)) << "\" y=\""
                    << fmt(m.py(wy + grid.resolution)) << "\" width=\""
                    << fmt(grid.resolution * m.scale) << "\" height=\""
                    << fmt(grid.resolution * m.scale) << "\" fill=\"#2ca02c\"/>\n";
            }
        }
    }

    for (size_t t = 0; t < trajectories.size(); ++t) {
        out << "<polyline fill=\"none\" stroke=\"" << kPalette[t % kPaletteSize]
            << "\" stroke-width=\"2\""
            << (t % kPaletteSize >= 3 ? " stroke-dasharray=\"6 3\"" : "")
            << " points=\"";
        for (size_t i = 0; i < trajectories[t].size(); ++i) {
            if (i) out << ' ';
            out << fmt(m.px(trajectories[t][i].x)) << ','
                << fmt(m.py(trajectories[t][i].y));
        }
        out << "\"/>\n";
    }

    if (start) draw_marker(out, *start, m, "#1a9850");
    if (goal) draw_marker(out, *goal, m, "#d73027");
    out << "</svg>\n";
}

void render_svg_file(const OccupancyGrid& grid,
                     const std::vector<std::vector<Point2>>& trajectories,
                     const std::string& path, const SvgOptions& options,
                     const Pose2D* start, const Pose2D* goal) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    render_svg(grid, trajectories, out, options, start, goal);
}

void render_field_svg(const FieldMap& field, std::ostream& out) {
    SvgOptions options;
    options.field = &field;
    options.draw_voronoi_edges = true;
    render_svg(field.grid(), {}, out, options);
}

void render_field_svg_file(const FieldMap& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    render_field_svg(field, out);
}

void render_plan_svg_file(const OccupancyGrid& grid, const PlanResult& plan,
                          const Pose2D& start, const Pose2D& goal,
                          const std::string& path) {
    std::vector<std::vector<Point2>> trajectories;
    if (!plan.route.points.empty()) trajectories.push_back(plan.route.points);
    render_svg_file(grid, trajectories, path, {}, &start, &goal);
}

}  // namespace replan
