#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace featalloc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned rectangle [x0, x0+L1] x [y0, y0+L2].
struct Rect {
    Point lower;
    double len_x;
    double len_y;

    Rect(Point lower_, double len_x_, double len_y_);
    static Rect unit_square() { return Rect({0.0, 0.0}, 1.0, 1.0); }

    double area() const { return len_x * len_y; }
    bool contains(const Point& p) const;
};

/// Cell-centered regular grid of ng x ng points (midpoint rule).
struct Grid {
    std::vector<Point> points;
    double cell_area;
    int ng;
};

Grid grid_discretize(const Rect& region, int ng);

}  // namespace featalloc
