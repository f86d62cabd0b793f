#pragma once

// Test-only reference oracles, independent of the library's implementation
// paths: brute-force smallest enclosing circle over point pairs/triples,
// grid scans for cost minima, and a 1-D golden-section line search.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "floc/geometry.hpp"
#include "floc/oracles.hpp"

namespace floc::testsupport {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

inline Point random_point(std::mt19937_64& rng, double lo = -10.0, double hi = 10.0) {
    return {uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

inline std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, double lo = -10.0,
                                        double hi = 10.0) {
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(random_point(rng, lo, hi));
    return pts;
}

inline bool covers_all(const Point& center, double radius, std::span<const Point> pts,
                       double slack) {
    for (const Point& p : pts)
        if (distance(center, p) > radius + slack) return false;
    return true;
}

// Minimum enclosing circle by enumerating all circles through two points
// (as diameter) and all circumcircles through three points.
inline Circle brute_force_enclosing_circle(std::span<const Point> pts, double slack = 1e-9) {
    const std::size_t n = pts.size();
    if (n == 1) return {pts[0], 0.0};
    Circle best{Point(), std::numeric_limits<double>::infinity()};
    auto consider = [&](const Point& center, std::span<const Point> all) {
        double r = 0.0;
        for (const Point& p : all) r = std::max(r, distance(center, p));
        if (r < best.radius && covers_all(center, r, all, slack)) best = {center, r};
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point mid(0.5 * (pts[i].x + pts[j].x), 0.5 * (pts[i].y + pts[j].y));
            const double r = std::max(distance(mid, pts[i]), distance(mid, pts[j]));
            if (covers_all(mid, r, pts, slack) && r < best.radius) {
                double rmax = 0.0;
                for (const Point& p : pts) rmax = std::max(rmax, distance(mid, p));
                best = {mid, rmax};
            }
            for (std::size_t k = j + 1; k < n; ++k) {
                const double bx = pts[j].x - pts[i].x, by = pts[j].y - pts[i].y;
                const double cx = pts[k].x - pts[i].x, cy = pts[k].y - pts[i].y;
                const double d = 2.0 * (bx * cy - by * cx);
                if (d == 0.0) continue;
                const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
                const Point center(pts[i].x + (cy * b2 - by * c2) / d,
                                   pts[i].y + (bx * c2 - cx * b2) / d);
                consider(center, pts);
            }
        }
    }
    return best;
}

inline double utilitarian_cost_ref(const Point& f, std::span<const Point> pts) {
    double total = 0.0;
    for (const Point& p : pts)
        total += std::sqrt((f.x - p.x) * (f.x - p.x) + (f.y - p.y) * (f.y - p.y));
    return total / static_cast<double>(pts.size());
}

// Minimum utilitarian cost over a uniform grid covering the bounding box of
// the points expanded by its diagonal on every side.
inline double grid_min_utilitarian_cost(std::span<const Point> pts, std::size_t cells = 400) {
    const BoundingBox box = bounding_box(pts);
    const double pad = std::max(box.diagonal(), 1e-6);
    const double x_lo = box.x_min - pad, x_hi = box.x_max + pad;
    const double y_lo = box.y_min - pad, y_hi = box.y_max + pad;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cells; ++i) {
        const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) /
                                    static_cast<double>(cells - 1);
        for (std::size_t j = 0; j < cells; ++j) {
            const double y = y_lo + (y_hi - y_lo) * static_cast<double>(j) /
                                        static_cast<double>(cells - 1);
            best = std::min(best, utilitarian_cost_ref(Point(x, y), pts));
        }
    }
    return best;
}

// Golden-section minimization of a unimodal 1-D function.
template <typename F>
double golden_section_minimize(F&& f, double lo, double hi, double width = 1e-12) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > width) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace floc::testsupport
