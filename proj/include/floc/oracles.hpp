#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "floc/geometry.hpp"

namespace floc {

enum class Objective { Egalitarian, Utilitarian };

inline const char* to_string(Objective obj) {
    return obj == Objective::Egalitarian ? "egalitarian" : "utilitarian";
}

// Output of smallest_enclosing_circle: the center is the optimal egalitarian
// facility and the radius is the optimal egalitarian cost.
struct Circle {
    Point center;
    double radius = 0.0;
};

inline constexpr double kDefaultOracleTol = 1e-9;

// Lower median: for even n the smaller of the two middle order statistics.
inline double median_1d(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("empty instance");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t k = (v.size() - 1) / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

namespace detail {

inline bool circle_contains(const Circle& c, const Point& p) {
    const double dx = p.x - c.center.x;
    const double dy = p.y - c.center.y;
    const double r = c.radius;
    return dx * dx + dy * dy <= r * r * (1.0 + 1e-12) + 1e-30;
}

inline Circle circle_from(const Point& a, const Point& b) {
    const Point center(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
    return {center, std::max(distance(center, a), distance(center, b))};
}

inline std::optional<Circle> circumcircle(const Point& a, const Point& b, const Point& c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    if (d == 0.0) return std::nullopt;  // collinear
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    const Point center(a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d);
    const double r = std::max({distance(center, a), distance(center, b), distance(center, c)});
    return Circle{center, r};
}

inline Circle boundary_circle(std::span<const Point> boundary) {
    switch (boundary.size()) {
        case 0:
            return {Point(), 0.0};
        case 1:
            return {boundary[0], 0.0};
        case 2:
            return circle_from(boundary[0], boundary[1]);
        default: {
            // A two-point circle that already covers the third point wins;
            // this also absorbs collinear triples.
            Circle best{Point(), -1.0};
            for (int i = 0; i < 3; ++i) {
                const Circle c = circle_from(boundary[i], boundary[(i + 1) % 3]);
                if (circle_contains(c, boundary[(i + 2) % 3]) &&
                    (best.radius < 0.0 || c.radius < best.radius))
                    best = c;
            }
            if (best.radius >= 0.0) return best;
            if (auto c = circumcircle(boundary[0], boundary[1], boundary[2])) return *c;
            return circle_from(boundary[0], boundary[1]);
        }
    }
}

inline Circle welzl(std::span<const Point> pts, std::array<Point, 3>& boundary,
                    std::size_t n_boundary) {
    if (pts.empty() || n_boundary == 3)
        return boundary_circle(std::span<const Point>(boundary.data(), n_boundary));
    const Point p = pts.back();
    const auto rest = pts.first(pts.size() - 1);
    Circle c = welzl(rest, boundary, n_boundary);
    if (circle_contains(c, p)) return c;
    boundary[n_boundary] = p;
    return welzl(rest, boundary, n_boundary + 1);
}

inline double mean_distance(const Point& facility, std::span<const Point> points) {
    double total = 0.0;
    for (const Point& p : points) total += distance(facility, p);
    return total / static_cast<double>(points.size());
}

}  // namespace detail

// Minimum-radius circle containing all points. Exact up to floating point:
// the result matches a brute-force search over circles through two and
// three input points. The returned radius is the exact maximum distance
// from the computed center, so containment holds with zero slack.
inline Circle smallest_enclosing_circle(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("empty instance");
    std::vector<Point> pts(points.begin(), points.end());
    std::mt19937_64 rng(0x5ec5eedULL);  // fixed seed keeps results reproducible
    for (std::size_t i = pts.size(); i > 1; --i)
        std::swap(pts[i - 1], pts[rng() % i]);
    std::array<Point, 3> boundary{};
    Circle c = detail::welzl(pts, boundary, 0);
    double r = 0.0;
    for (const Point& p : points) r = std::max(r, distance(c.center, p));
    return {c.center, r};
}

// Utilitarian minimizer via Weiszfeld iteration on coordinates normalized to
// unit bounding-box diagonal; tol is an absolute cost tolerance in those
// normalized units. When an iterate lands on a data point, the point is
// optimal iff the pull of the remaining points does not exceed the point's
// multiplicity; otherwise the iterate steps off along the residual direction.
// The returned location is best effort (minimizer sets can be segments); the
// cost evaluated at it is the authoritative optimum.
inline Point geometric_median(std::span<const Point> points, double tol = kDefaultOracleTol) {
    if (points.empty()) throw std::invalid_argument("empty instance");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const std::size_t n = points.size();
    if (n == 1) return points[0];

    const BoundingBox box = bounding_box(points);
    const double diag = box.diagonal();
    if (diag == 0.0) return points[0];  // all points coincide
    const Point mid = box.center();

    std::vector<double> qx(n), qy(n);
    double yx = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        qx[i] = (points[i].x - mid.x) / diag;
        qy[i] = (points[i].y - mid.y) / diag;
        yx += qx[i];
        yy += qy[i];
    }
    yx /= static_cast<double>(n);
    yy /= static_cast<double>(n);

    const double step_limit = tol / (10.0 * static_cast<double>(n));
    const double snap = 1e-12;
    for (int iter = 0; iter < 10000; ++iter) {
        double wsum = 0.0, tx = 0.0, ty = 0.0, rx = 0.0, ry = 0.0;
        std::size_t multiplicity = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = qx[i] - yx, dy = qy[i] - yy;
            const double d = std::hypot(dx, dy);
            if (d < snap) {
                ++multiplicity;
                continue;
            }
            const double w = 1.0 / d;
            wsum += w;
            tx += qx[i] * w;
            ty += qy[i] * w;
            rx += dx * w;
            ry += dy * w;
        }
        if (wsum == 0.0) break;  // every point sits at the iterate
        double nx, ny;
        if (multiplicity > 0) {
            const double pull = std::hypot(rx, ry);
            const double m = static_cast<double>(multiplicity);
            if (pull <= m * (1.0 + 1e-12)) break;  // subgradient optimality at a data point
            const double t = 1.0 - m / pull;
            nx = (1.0 - t) * yx + t * (tx / wsum);
            ny = (1.0 - t) * yy + t * (ty / wsum);
        } else {
            nx = tx / wsum;
            ny = ty / wsum;
        }
        const double step = std::hypot(nx - yx, ny - yy);
        yx = nx;
        yy = ny;
        if (step < step_limit) break;
    }
    return {yx * diag + mid.x, yy * diag + mid.y};
}

// Optimal facility and cost for the chosen objective: smallest enclosing
// circle for egalitarian, geometric median plus mean distance for utilitarian.
inline std::pair<Point, double> optimal_facility(std::span<const Point> points, Objective obj,
                                                 double tol = kDefaultOracleTol) {
    if (points.empty()) throw std::invalid_argument("empty instance");
    if (obj == Objective::Egalitarian) {
        const Circle c = smallest_enclosing_circle(points);
        return {c.center, c.radius};
    }
    const Point m = geometric_median(points, tol);
    return {m, detail::mean_distance(m, points)};
}

}  // namespace floc
