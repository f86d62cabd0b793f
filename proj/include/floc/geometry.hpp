#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace floc {

// A location in the plane. The constructor is the validation boundary:
// no NaN or infinity ever enters a public operation.
struct Point {
    double x = 0.0;
    double y = 0.0;

    Point() = default;
    Point(double px, double py) : x(px), y(py) {
        if (!std::isfinite(x) || !std::isfinite(y))
            throw std::invalid_argument("non-finite coordinate");
    }

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Axis-parallel box with x_min <= x_max and y_min <= y_max.
struct BoundingBox {
    double x_min, x_max, y_min, y_max;

    BoundingBox(double xmin, double xmax, double ymin, double ymax)
        : x_min(xmin), x_max(xmax), y_min(ymin), y_max(ymax) {
        if (!std::isfinite(xmin) || !std::isfinite(xmax) ||
            !std::isfinite(ymin) || !std::isfinite(ymax))
            throw std::invalid_argument("non-finite coordinate");
        if (x_min > x_max || y_min > y_max)
            throw std::invalid_argument("inverted bounding box");
    }

    bool contains(const Point& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double diagonal() const { return std::hypot(width(), height()); }
    Point center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Smallest axis-parallel box containing every input point.
inline BoundingBox bounding_box(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("empty instance");
    double xmin = points[0].x, xmax = points[0].x;
    double ymin = points[0].y, ymax = points[0].y;
    for (const Point& p : points.subspan(1)) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return {xmin, xmax, ymin, ymax};
}

// Euclidean projection onto the box (coordinatewise clamp). Idempotent;
// the identity on points already inside.
inline Point clamp_to_box(const Point& p, const BoundingBox& b) {
    return {std::clamp(p.x, b.x_min, b.x_max), std::clamp(p.y, b.y_min, b.y_max)};
}

}  // namespace floc
