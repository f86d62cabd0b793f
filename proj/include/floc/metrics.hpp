#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>

#include "floc/geometry.hpp"
#include "floc/mechanisms.hpp"
#include "floc/oracles.hpp"

namespace floc {

// Maximum agent distance to the facility.
inline double egalitarian_cost(const Point& facility, std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("empty instance");
    double worst = 0.0;
    for (const Point& p : points) worst = std::max(worst, distance(facility, p));
    return worst;
}

// Mean agent distance to the facility.
inline double utilitarian_cost(const Point& facility, std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("empty instance");
    double total = 0.0;
    for (const Point& p : points) total += distance(facility, p);
    return total / static_cast<double>(points.size());
}

inline double social_cost(const Point& facility, std::span<const Point> points, Objective obj) {
    return obj == Objective::Egalitarian ? egalitarian_cost(facility, points)
                                         : utilitarian_cost(facility, points);
}

// Distance from the prediction to the true optimum, normalized by the
// optimal cost. Degenerate instances (OPT = 0) report 0 when the prediction
// hits the optimum and infinity otherwise.
inline double prediction_error(const Instance& inst, Objective obj,
                               double oracle_tol = kDefaultOracleTol) {
    const auto [opt_point, opt_cost] = optimal_facility(inst.points, obj, oracle_tol);
    const double dist = distance(inst.prediction, opt_point);
    if (opt_cost > 0.0) return dist / opt_cost;
    return dist == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

// One full mechanism-vs-optimum measurement. ratio and prediction_error are
// infinite on degenerate instances where OPT = 0 and the mechanism or the
// prediction misses it.
struct EvaluationRecord {
    Point mechanism_output;
    Point optimal_point;
    double optimal_cost = 0.0;
    double mechanism_cost = 0.0;
    double ratio = 1.0;
    double prediction_error = 0.0;
    Objective objective = Objective::Egalitarian;
};

inline EvaluationRecord approximation_ratio(const MechanismSpec& spec, const Instance& inst,
                                            Objective obj,
                                            double oracle_tol = kDefaultOracleTol) {
    EvaluationRecord rec;
    rec.objective = obj;
    rec.mechanism_output = evaluate(spec, inst);
    const auto [opt_point, opt_cost] = optimal_facility(inst.points, obj, oracle_tol);
    rec.optimal_point = opt_point;
    rec.optimal_cost = opt_cost;
    rec.mechanism_cost = social_cost(rec.mechanism_output, inst.points, obj);
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (opt_cost > 0.0)
        rec.ratio = rec.mechanism_cost / opt_cost;
    else
        rec.ratio = rec.mechanism_cost == 0.0 ? 1.0 : inf;
    const double dist = distance(inst.prediction, opt_point);
    if (opt_cost > 0.0)
        rec.prediction_error = dist / opt_cost;
    else
        rec.prediction_error = dist == 0.0 ? 0.0 : inf;
    return rec;
}

// min(1 + eta, 1 + sqrt(2)): the minimum bounding box guarantee as a
// function of the prediction error.
inline double bound_egalitarian_error(double eta) {
    return std::min(1.0 + eta, 1.0 + std::numbers::sqrt2);
}

inline double bound_cmp_consistency(double c) {
    if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("confidence out of range");
    return std::sqrt(2.0 * c * c + 2.0) / (1.0 + c);
}

inline double bound_cmp_robustness(double c) {
    if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("confidence out of range");
    return std::sqrt(2.0 * c * c + 2.0) / (1.0 - c);
}

inline double bound_cmp_error(double c, double eta) {
    return std::min(bound_cmp_consistency(c) + eta, bound_cmp_robustness(c));
}

}  // namespace floc
