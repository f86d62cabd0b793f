#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "floc/geometry.hpp"
#include "floc/mechanisms.hpp"
#include "floc/metrics.hpp"
#include "floc/oracles.hpp"

namespace floc {

enum class CoaMode { Consistency, Robustness };

inline const char* to_string(CoaMode mode) {
    return mode == CoaMode::Consistency ? "consistency" : "robustness";
}

// A clusters-and-opt-on-axes instance: two equal clusters at (+-x, 0) plus a
// cluster at (0, 1). The prediction is (0, 1) in Consistency mode and (0, 0)
// in Robustness mode.
struct CoaInstanceParams {
    double c = 0.0;
    std::size_t n = 4;
    double x = 1.0;
    double u_fraction = 0.5;  // fraction of agents at (0, 1)
    CoaMode mode = CoaMode::Consistency;
};

namespace detail {

inline bool near_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9; }

inline double coa_u_fraction(double c, CoaMode mode) {
    return mode == CoaMode::Consistency ? (1.0 - c) / 2.0 : (1.0 + c) / 2.0;
}

inline double coa_canonical_x(double c, CoaMode mode) {
    return mode == CoaMode::Consistency ? (1.0 + c) / (1.0 - c) : (1.0 - c) / (1.0 + c);
}

inline bool coa_counts_integral(double c, std::size_t n, double u_fraction) {
    const double nd = static_cast<double>(n);
    const double u = u_fraction * nd;
    const double side = (nd - u) / 2.0;
    return near_integer(c * nd) && near_integer(u) && near_integer(side);
}

// Smallest n with all cluster counts (and cn) integral; optionally
// restricted to multiples of 4.
inline std::size_t smallest_coa_n(double c, double u_fraction, bool multiple_of_four) {
    const std::size_t start = multiple_of_four ? 4 : 1;
    const std::size_t stride = multiple_of_four ? 4 : 1;
    for (std::size_t n = start; n <= 1u << 20; n += stride)
        if (coa_counts_integral(c, n, u_fraction)) return n;
    throw std::invalid_argument("n incompatible with c");
}

}  // namespace detail

inline Instance coa_instance(const CoaInstanceParams& params) {
    if (!(params.c >= 0.0 && params.c < 1.0))
        throw std::invalid_argument("confidence out of range");
    if (!(params.x >= 0.0) || !(params.u_fraction >= 0.0 && params.u_fraction <= 1.0))
        throw std::invalid_argument("invalid COA parameters");
    if (!detail::coa_counts_integral(params.c, params.n, params.u_fraction)) {
        std::string msg = "n incompatible with c (smallest compatible n is " +
                          std::to_string(detail::smallest_coa_n(params.c, params.u_fraction,
                                                                /*multiple_of_four=*/false)) +
                          ")";
        throw std::invalid_argument(msg);
    }
    const double nd = static_cast<double>(params.n);
    const auto u_count = static_cast<std::size_t>(std::round(params.u_fraction * nd));
    const auto side_count = static_cast<std::size_t>(std::round((nd - static_cast<double>(u_count)) / 2.0));
    std::vector<Point> pts;
    pts.reserve(params.n);
    pts.insert(pts.end(), side_count, Point(-params.x, 0.0));
    pts.insert(pts.end(), side_count, Point(params.x, 0.0));
    pts.insert(pts.end(), u_count, Point(0.0, 1.0));
    const Point prediction =
        params.mode == CoaMode::Consistency ? Point(0.0, 1.0) : Point(0.0, 0.0);
    return Instance(std::move(pts), prediction);
}

// Worst-case consistency instance: (1+c)n/4 agents at each of
// (+-(1+c)/(1-c), 0) and (1-c)n/2 agents at (0, 1); prediction (0, 1).
inline Instance lemma42_consistency_instance(double c, std::size_t n) {
    return coa_instance({c, n, detail::coa_canonical_x(c, CoaMode::Consistency),
                         detail::coa_u_fraction(c, CoaMode::Consistency), CoaMode::Consistency});
}

// Worst-case robustness instance: (1-c)n/4 agents at each of
// (+-(1-c)/(1+c), 0) and (1+c)n/2 agents at (0, 1); prediction (0, 0).
inline Instance lemma42_robustness_instance(double c, std::size_t n) {
    return coa_instance({c, n, detail::coa_canonical_x(c, CoaMode::Robustness),
                         detail::coa_u_fraction(c, CoaMode::Robustness), CoaMode::Robustness});
}

// Three agents on the unit circle with the prediction at (1, 1); realizes
// the 1 + sqrt(2) egalitarian ratio under the bounding-box mechanism.
inline Instance theorem33_robustness_instance() {
    const double s = 1.0 / std::numbers::sqrt2;
    return Instance({Point(0.0, 1.0), Point(1.0, 0.0), Point(-s, -s)}, Point(1.0, 1.0));
}

// 1D pair {0, 1} with prediction 0: MinMaxP pays 1 against an optimum of
// 1/2, realizing ratio 2 exactly.
inline Instance minmaxp_tightness_instance() {
    return Instance({Point(0.0, 0.0), Point(1.0, 0.0)}, Point(0.0, 0.0));
}

// Ratio achieved by CMP on the COA instance with abscissa x, as a closed
// form in x.
inline double coa_ratio_closed_form(double c, double x, CoaMode mode) {
    if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("confidence out of range");
    const double root = std::sqrt(1.0 + x * x);
    if (mode == CoaMode::Consistency)
        return (1.0 - c + (1.0 + c) * x) / ((1.0 + c) * root);
    return (1.0 + c + (1.0 - c) * x) / ((1.0 - c) * root);
}

struct CoaSearchResult {
    double x_star = 0.0;
    double max_ratio = 0.0;
    double realized_ratio = 0.0;  // measured CMP ratio on the witness instance
    std::size_t witness_n = 0;
};

// Maximize the closed-form COA ratio over x by grid scan plus golden-section
// refinement, then cross-validate by building the concrete instance at the
// maximizer and measuring the realized CMP ratio through the full
// mechanism-and-oracle path.
inline CoaSearchResult coa_search(double c, CoaMode mode, std::size_t x_grid_resolution = 4000) {
    if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("confidence out of range");
    const std::size_t res = std::max<std::size_t>(x_grid_resolution, 1000);
    const double x_hi = 10.0 * (1.0 + c) / (1.0 - c);
    const auto ratio_at = [&](double x) { return coa_ratio_closed_form(c, x, mode); };

    std::size_t best = 0;
    double best_val = ratio_at(0.0);
    for (std::size_t i = 1; i < res; ++i) {
        const double x = x_hi * static_cast<double>(i) / static_cast<double>(res - 1);
        const double v = ratio_at(x);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double cell = x_hi / static_cast<double>(res - 1);
    double lo = best == 0 ? 0.0 : (static_cast<double>(best) - 1.0) * cell;
    double hi = std::min(x_hi, (static_cast<double>(best) + 1.0) * cell);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = ratio_at(x1), f2 = ratio_at(x2);
    while (hi - lo > 1e-11) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = ratio_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = ratio_at(x1);
        }
    }

    CoaSearchResult result;
    result.x_star = 0.5 * (lo + hi);
    result.max_ratio = std::max(best_val, ratio_at(result.x_star));

    const double u_fraction = detail::coa_u_fraction(c, mode);
    result.witness_n = detail::smallest_coa_n(c, u_fraction, /*multiple_of_four=*/true);
    const Instance witness =
        coa_instance({c, result.witness_n, result.x_star, u_fraction, mode});
    result.realized_ratio =
        approximation_ratio({MechanismKind::CMP, c}, witness, Objective::Utilitarian).ratio;
    return result;
}

enum class PredictionMode {
    OracleEgalitarian,
    OracleUtilitarian,
    UniformInBox,
    AdversarialCorner
};

inline BoundingBox default_box() { return {-10.0, 10.0, -10.0, 10.0}; }

namespace detail {

// 53-bit uniform draw; identical across standard libraries, unlike
// std::uniform_real_distribution.
inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

}  // namespace detail

// n uniform agents in the box; the prediction is the chosen objective's true
// optimum, a uniform point, or a box corner pushed out by a factor of two.
// Deterministic given (n, seed, box, mode).
inline Instance random_instance(std::size_t n, std::uint64_t seed, const BoundingBox& box,
                                PredictionMode mode, double oracle_tol = kDefaultOracleTol) {
    if (n == 0) throw std::invalid_argument("empty instance");
    std::mt19937_64 rng(seed);
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = detail::uniform_in(rng, box.x_min, box.x_max);
        const double y = detail::uniform_in(rng, box.y_min, box.y_max);
        pts.emplace_back(x, y);
    }
    Point prediction;
    switch (mode) {
        case PredictionMode::OracleEgalitarian:
            prediction = optimal_facility(pts, Objective::Egalitarian).first;
            break;
        case PredictionMode::OracleUtilitarian:
            prediction = optimal_facility(pts, Objective::Utilitarian, oracle_tol).first;
            break;
        case PredictionMode::UniformInBox: {
            const double x = detail::uniform_in(rng, box.x_min, box.x_max);
            const double y = detail::uniform_in(rng, box.y_min, box.y_max);
            prediction = Point(x, y);
            break;
        }
        case PredictionMode::AdversarialCorner: {
            const std::uint64_t corner = rng() % 4;
            const Point mid = box.center();
            const double cx = (corner & 1) ? box.x_max : box.x_min;
            const double cy = (corner & 2) ? box.y_max : box.y_min;
            prediction = Point(mid.x + 2.0 * (cx - mid.x), mid.y + 2.0 * (cy - mid.y));
            break;
        }
    }
    return Instance(std::move(pts), prediction);
}

using MechanismFn = std::function<Point(const Instance&)>;

struct FuzzViolation {
    std::uint64_t trial_seed = 0;
    Instance instance;
    std::size_t agent = 0;
    Point deviation;
    double truthful_distance = 0.0;
    double deviating_distance = 0.0;
};

struct FuzzReport {
    std::uint64_t trials = 0;
    std::uint64_t triples = 0;  // (instance, agent, deviation) checks performed
    std::vector<FuzzViolation> violations;
};

struct FuzzOptions {
    std::vector<std::size_t> agent_counts = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    BoundingBox box = default_box();
    bool one_dimensional = false;
    std::size_t random_deviations = 50;
};

// Checks the dominant-strategy inequality d(p_i, f(P)) <= d(p_i, f(P_-i, p'))
// for every agent against a 9x9 grid of deviations over the instance box
// expanded by 50% plus random deviations. Violations are data, not errors:
// each carries full reproduction information.
inline FuzzReport strategyproofness_fuzz(const MechanismFn& mechanism, std::size_t trials,
                                         std::uint64_t seed, const FuzzOptions& opt = {}) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    if (opt.agent_counts.empty()) throw std::invalid_argument("no compatible agent counts");
    FuzzReport report;
    std::mt19937_64 master(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = master();
        std::mt19937_64 rng(trial_seed);
        const std::size_t n = opt.agent_counts[rng() % opt.agent_counts.size()];
        std::vector<Point> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = detail::uniform_in(rng, opt.box.x_min, opt.box.x_max);
            const double y =
                opt.one_dimensional ? 0.0 : detail::uniform_in(rng, opt.box.y_min, opt.box.y_max);
            pts.emplace_back(x, y);
        }
        const double px = detail::uniform_in(rng, opt.box.x_min, opt.box.x_max);
        const double py =
            opt.one_dimensional ? 0.0 : detail::uniform_in(rng, opt.box.y_min, opt.box.y_max);
        const Instance inst(std::move(pts), Point(px, py));
        const Point f_truth = mechanism(inst);

        const BoundingBox bb = bounding_box(inst.points);
        const double pad_x = 0.25 * bb.width(), pad_y = 0.25 * bb.height();
        const double gx_lo = bb.x_min - pad_x, gx_hi = bb.x_max + pad_x;
        const double gy_lo = bb.y_min - pad_y, gy_hi = bb.y_max + pad_y;

        std::vector<Point> grid;
        if (opt.one_dimensional) {
            for (int i = 0; i < 9; ++i)
                grid.emplace_back(gx_lo + (gx_hi - gx_lo) * i / 8.0, 0.0);
        } else {
            for (int i = 0; i < 9; ++i)
                for (int j = 0; j < 9; ++j)
                    grid.emplace_back(gx_lo + (gx_hi - gx_lo) * i / 8.0,
                                      gy_lo + (gy_hi - gy_lo) * j / 8.0);
        }

        std::vector<Point> reported = inst.points;
        for (std::size_t agent = 0; agent < n; ++agent) {
            std::vector<Point> deviations = grid;
            for (std::size_t k = 0; k < opt.random_deviations; ++k) {
                const double dx = detail::uniform_in(rng, gx_lo, gx_hi);
                const double dy = opt.one_dimensional ? 0.0 : detail::uniform_in(rng, gy_lo, gy_hi);
                deviations.emplace_back(dx, dy);
            }
            const double d_truth = distance(inst.points[agent], f_truth);
            for (const Point& dev : deviations) {
                reported[agent] = dev;
                const Point f_dev = mechanism(Instance(reported, inst.prediction));
                ++report.triples;
                const double d_dev = distance(inst.points[agent], f_dev);
                if (d_truth > d_dev + 1e-12)
                    report.violations.push_back(
                        {trial_seed, inst, agent, dev, d_truth, d_dev});
            }
            reported[agent] = inst.points[agent];
        }
        ++report.trials;
    }
    return report;
}

// Agent counts usable with the given spec (CMP needs confidence * n integral).
inline std::vector<std::size_t> compatible_agent_counts(const MechanismSpec& spec,
                                                        std::size_t lo = 1, std::size_t hi = 9) {
    std::vector<std::size_t> counts;
    for (std::size_t n = lo; n <= hi; ++n) {
        if (spec.kind == MechanismKind::CMP) {
            const double cn = spec.confidence * static_cast<double>(n);
            if (std::abs(cn - std::round(cn)) > 1e-9) continue;
        }
        counts.push_back(n);
    }
    if (counts.empty()) throw std::invalid_argument("confidence incompatible with n");
    return counts;
}

inline FuzzReport strategyproofness_fuzz(const MechanismSpec& spec, std::size_t trials,
                                         std::uint64_t seed) {
    FuzzOptions opt;
    opt.one_dimensional = spec.kind == MechanismKind::MinMaxP1D;
    opt.agent_counts = compatible_agent_counts(spec);
    return strategyproofness_fuzz(
        [spec](const Instance& inst) { return evaluate(spec, inst); }, trials, seed, opt);
}

// Deliberately manipulable reference mechanism (the mean of the reports);
// the fuzzer's negative control.
inline Point mean_point_mechanism(const Instance& inst) {
    double sx = 0.0, sy = 0.0;
    for (const Point& p : inst.points) {
        sx += p.x;
        sy += p.y;
    }
    const double nd = static_cast<double>(inst.n());
    return {sx / nd, sy / nd};
}

}  // namespace floc
