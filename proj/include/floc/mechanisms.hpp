#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "floc/geometry.hpp"
#include "floc/oracles.hpp"

namespace floc {

// Agent reports P plus the prediction handed to the mechanism before the
// facility is placed.
struct Instance {
    std::vector<Point> points;
    Point prediction;

    Instance(std::vector<Point> pts, Point pred)
        : points(std::move(pts)), prediction(pred) {
        if (points.empty()) throw std::invalid_argument("empty instance");
    }

    std::size_t n() const { return points.size(); }
};

enum class MechanismKind { MinMaxP1D, MinimumBoundingBox, CoordinatewiseMedian, CMP };

// Which mechanism to run; confidence is read only by CMP and must lie in
// [0,1) with confidence*n an integer for the instance at hand.
struct MechanismSpec {
    MechanismKind kind = MechanismKind::MinimumBoundingBox;
    double confidence = 0.0;
};

// Prediction clamped to [min p_i, max p_i].
inline double minmaxp_1d(std::span<const double> values, double prediction) {
    if (values.empty()) throw std::invalid_argument("empty instance");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (prediction < *lo) return *lo;
    if (prediction > *hi) return *hi;
    return prediction;
}

// Per-axis MinMaxP; equivalently the projection of the prediction onto the
// minimum bounding box of the reports.
inline Point minimum_bounding_box(const Instance& inst) {
    return clamp_to_box(inst.prediction, bounding_box(inst.points));
}

inline Point coordinatewise_median(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("empty instance");
    std::vector<double> xs(points.size()), ys(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        xs[i] = points[i].x;
        ys[i] = points[i].y;
    }
    return {median_1d(xs), median_1d(ys)};
}

// Coordinatewise median over the agents plus designer-chosen phantom points.
inline Point generalized_coordinatewise_median(std::span<const Point> points,
                                               std::span<const Point> phantoms) {
    if (points.empty()) throw std::invalid_argument("empty instance");
    std::vector<Point> all(points.begin(), points.end());
    all.insert(all.end(), phantoms.begin(), phantoms.end());
    return coordinatewise_median(all);
}

namespace detail {

// Smallest n >= 1 with confidence * n integral, or 0 when none exists below
// the scan cap (irrational confidence).
inline std::size_t smallest_compatible_n(double confidence) {
    for (std::size_t n = 1; n <= 1u << 20; ++n) {
        const double cn = confidence * static_cast<double>(n);
        if (std::abs(cn - std::round(cn)) <= 1e-9) return n;
    }
    return 0;
}

// confidence * n snapped to the nearest integer when within 1e-9.
inline std::size_t phantom_count(double confidence, std::size_t n) {
    if (!(confidence >= 0.0 && confidence < 1.0))
        throw std::invalid_argument("confidence out of range");
    const double cn = confidence * static_cast<double>(n);
    const double rounded = std::round(cn);
    if (std::abs(cn - rounded) > 1e-9) {
        std::string msg = "confidence incompatible with n";
        if (const std::size_t m = smallest_compatible_n(confidence))
            msg += " (smallest compatible n is " + std::to_string(m) + ")";
        throw std::invalid_argument(msg);
    }
    return static_cast<std::size_t>(rounded);
}

}  // namespace detail

// Coordinatewise median with cn phantom copies of the prediction.
inline Point cmp(const Instance& inst, double confidence) {
    const std::size_t k = detail::phantom_count(confidence, inst.n());
    const std::vector<Point> phantoms(k, inst.prediction);
    return generalized_coordinatewise_median(inst.points, phantoms);
}

inline bool is_one_dimensional(const Instance& inst) {
    if (inst.prediction.y != 0.0) return false;
    return std::all_of(inst.points.begin(), inst.points.end(),
                       [](const Point& p) { return p.y == 0.0; });
}

// Uniform dispatch over the mechanism menu.
inline Point evaluate(const MechanismSpec& spec, const Instance& inst) {
    switch (spec.kind) {
        case MechanismKind::MinMaxP1D: {
            if (!is_one_dimensional(inst))
                throw std::invalid_argument("mechanism is one-dimensional");
            std::vector<double> xs(inst.n());
            for (std::size_t i = 0; i < inst.n(); ++i) xs[i] = inst.points[i].x;
            return {minmaxp_1d(xs, inst.prediction.x), 0.0};
        }
        case MechanismKind::MinimumBoundingBox:
            return minimum_bounding_box(inst);
        case MechanismKind::CoordinatewiseMedian:
            return coordinatewise_median(inst.points);
        case MechanismKind::CMP:
            return cmp(inst, spec.confidence);
    }
    throw std::logic_error("unknown mechanism kind");
}

inline const char* to_string(MechanismKind kind) {
    switch (kind) {
        case MechanismKind::MinMaxP1D: return "minmaxp1d";
        case MechanismKind::MinimumBoundingBox: return "mbb";
        case MechanismKind::CoordinatewiseMedian: return "cm";
        case MechanismKind::CMP: return "cmp";
    }
    return "unknown";
}

}  // namespace floc
