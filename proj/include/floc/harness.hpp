#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "floc/adversarial.hpp"
#include "floc/instance_io.hpp"
#include "floc/mechanisms.hpp"
#include "floc/metrics.hpp"

namespace floc {

enum class OutputFormat { Csv, Json };

// CSV floats carry exactly 9 significant digits and are never
// locale-formatted.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline nlohmann::json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    return v;
}

inline MechanismKind parse_mechanism(const std::string& name) {
    if (name == "minmaxp1d") return MechanismKind::MinMaxP1D;
    if (name == "mbb") return MechanismKind::MinimumBoundingBox;
    if (name == "cm") return MechanismKind::CoordinatewiseMedian;
    if (name == "cmp") return MechanismKind::CMP;
    throw std::invalid_argument("unknown mechanism: " + name);
}

inline Objective parse_objective(const std::string& name) {
    if (name == "egalitarian") return Objective::Egalitarian;
    if (name == "utilitarian") return Objective::Utilitarian;
    throw std::invalid_argument("unknown objective: " + name);
}

// Best stated guarantee for the mechanism/objective pair as a function of
// the prediction error; +infinity when no guarantee applies.
inline double reference_bound(MechanismKind kind, Objective obj, double confidence, double eta) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (kind) {
        case MechanismKind::MinMaxP1D:
            return obj == Objective::Egalitarian ? 2.0 : inf;
        case MechanismKind::MinimumBoundingBox:
            return obj == Objective::Egalitarian ? bound_egalitarian_error(eta) : inf;
        case MechanismKind::CoordinatewiseMedian:
            return obj == Objective::Egalitarian ? 2.0 : std::numbers::sqrt2;
        case MechanismKind::CMP:
            return obj == Objective::Utilitarian ? bound_cmp_error(confidence, eta) : inf;
    }
    return inf;
}

struct ResultRow {
    std::string mechanism;
    std::optional<double> confidence;
    std::string objective;
    std::size_t n = 0;
    std::string source;
    double mechanism_cost = 0.0;
    double optimal_cost = 0.0;
    double ratio = 0.0;
    double eta = 0.0;
    double bound = 0.0;
    bool within_bound = true;
};

inline ResultRow evaluate_instance(const MechanismSpec& spec, const Instance& inst,
                                   Objective obj, double tolerance, std::string source,
                                   double oracle_tol = kDefaultOracleTol) {
    const EvaluationRecord rec = approximation_ratio(spec, inst, obj, oracle_tol);
    ResultRow row;
    row.mechanism = to_string(spec.kind);
    if (spec.kind == MechanismKind::CMP) row.confidence = spec.confidence;
    row.objective = to_string(obj);
    row.n = inst.n();
    row.source = std::move(source);
    row.mechanism_cost = rec.mechanism_cost;
    row.optimal_cost = rec.optimal_cost;
    row.ratio = rec.ratio;
    row.eta = rec.prediction_error;
    row.bound = reference_bound(spec.kind, obj, spec.confidence, rec.prediction_error);
    row.within_bound = rec.ratio <= row.bound + tolerance;
    return row;
}

inline void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
    out << "mechanism,confidence,objective,n,source,mechanism_cost,optimal_cost,"
           "ratio,eta,bound,within_bound\n";
    for (const ResultRow& r : rows) {
        out << r.mechanism << ',' << (r.confidence ? format_double(*r.confidence) : "") << ','
            << r.objective << ',' << r.n << ',' << r.source << ','
            << format_double(r.mechanism_cost) << ',' << format_double(r.optimal_cost) << ','
            << format_double(r.ratio) << ',' << format_double(r.eta) << ','
            << format_double(r.bound) << ',' << (r.within_bound ? "true" : "false") << '\n';
    }
}

inline nlohmann::json to_json(const ResultRow& r) {
    nlohmann::json j;
    j["mechanism"] = r.mechanism;
    if (r.confidence) j["confidence"] = *r.confidence;
    j["objective"] = r.objective;
    j["n"] = r.n;
    j["source"] = r.source;
    j["mechanism_cost"] = json_number(r.mechanism_cost);
    j["optimal_cost"] = json_number(r.optimal_cost);
    j["ratio"] = json_number(r.ratio);
    j["eta"] = json_number(r.eta);
    j["bound"] = json_number(r.bound);
    j["within_bound"] = r.within_bound;
    return j;
}

// ---------------------------------------------------------------------------
// sweep-c: theoretical vs generator-achieved consistency/robustness per c.

struct SweepRow {
    double c = 0.0;
    double theoretical_consistency = 0.0;
    double theoretical_robustness = 0.0;
    double achieved_consistency = 0.0;
    double achieved_robustness = 0.0;
    std::string error;  // empty on success; other rows are still emitted
};

// n = 0 picks the smallest agent count compatible with each c.
inline std::vector<SweepRow> sweep_c(std::span<const double> cs, std::size_t n = 0,
                                     Objective obj = Objective::Utilitarian,
                                     double oracle_tol = kDefaultOracleTol) {
    if (obj != Objective::Utilitarian)
        throw std::invalid_argument("sweep-c is defined for the utilitarian objective");
    std::vector<SweepRow> rows;
    rows.reserve(cs.size());
    for (const double c : cs) {
        SweepRow row;
        row.c = c;
        try {
            row.theoretical_consistency = bound_cmp_consistency(c);
            row.theoretical_robustness = bound_cmp_robustness(c);
            std::size_t n_c = n, n_r = n;
            if (n == 0) {
                n_c = detail::smallest_coa_n(c, detail::coa_u_fraction(c, CoaMode::Consistency),
                                             false);
                n_r = detail::smallest_coa_n(c, detail::coa_u_fraction(c, CoaMode::Robustness),
                                             false);
            }
            MechanismSpec cmp_spec{MechanismKind::CMP, c};
            row.achieved_consistency =
                approximation_ratio(cmp_spec, lemma42_consistency_instance(c, n_c), obj,
                                    oracle_tol)
                    .ratio;
            row.achieved_robustness =
                approximation_ratio(cmp_spec, lemma42_robustness_instance(c, n_r), obj,
                                    oracle_tol)
                    .ratio;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline bool sweep_within_bounds(std::span<const SweepRow> rows, double tolerance = 1e-6) {
    for (const SweepRow& r : rows) {
        if (!r.error.empty()) continue;
        if (r.achieved_consistency > r.theoretical_consistency + tolerance) return false;
        if (r.achieved_robustness > r.theoretical_robustness + tolerance) return false;
    }
    return true;
}

inline void write_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "c,theoretical_consistency,theoretical_robustness,achieved_consistency,"
           "achieved_robustness,error\n";
    for (const SweepRow& r : rows) {
        out << format_double(r.c) << ',';
        if (r.error.empty())
            out << format_double(r.theoretical_consistency) << ','
                << format_double(r.theoretical_robustness) << ','
                << format_double(r.achieved_consistency) << ','
                << format_double(r.achieved_robustness) << ',';
        else
            out << format_double(r.theoretical_consistency) << ','
                << format_double(r.theoretical_robustness) << ",,,";
        out << r.error << '\n';
    }
}

inline nlohmann::json to_json(const SweepRow& r) {
    nlohmann::json j;
    j["c"] = r.c;
    j["theoretical_consistency"] = json_number(r.theoretical_consistency);
    j["theoretical_robustness"] = json_number(r.theoretical_robustness);
    if (r.error.empty()) {
        j["achieved_consistency"] = json_number(r.achieved_consistency);
        j["achieved_robustness"] = json_number(r.achieved_robustness);
    } else {
        j["error"] = r.error;
    }
    return j;
}

// ---------------------------------------------------------------------------
// error-curve: max observed ratio per prediction-error bucket.

struct ErrorCurveRow {
    double eta_bucket = 0.0;
    double max_observed_ratio = 0.0;
    double bound = 0.0;
};

// For each eta bucket, generates random instances, plants the prediction at
// distance eta * OPT from the optimum in a seeded random direction, and
// records the worst ratio. Degenerate instances (OPT = 0) are skipped.
inline std::vector<ErrorCurveRow> error_curve(const MechanismSpec& spec, Objective obj,
                                              std::span<const double> eta_grid,
                                              std::size_t trials, std::uint64_t seed,
                                              double oracle_tol = kDefaultOracleTol) {
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        if (eta_grid[i] < 0.0 || (i > 0 && eta_grid[i] < eta_grid[i - 1]))
            throw std::invalid_argument("eta grid must be ascending and nonnegative");
    }
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    const bool one_dimensional = spec.kind == MechanismKind::MinMaxP1D;
    const std::vector<std::size_t> counts = compatible_agent_counts(spec, 2, 12);
    const BoundingBox box = default_box();

    std::vector<ErrorCurveRow> rows;
    rows.reserve(eta_grid.size());
    std::mt19937_64 master(seed);
    for (const double eta : eta_grid) {
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            std::mt19937_64 rng(master());
            const std::size_t n = counts[rng() % counts.size()];
            std::vector<Point> pts;
            pts.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double x = detail::uniform_in(rng, box.x_min, box.x_max);
                const double y =
                    one_dimensional ? 0.0 : detail::uniform_in(rng, box.y_min, box.y_max);
                pts.emplace_back(x, y);
            }
            const auto [opt_point, opt_cost] = optimal_facility(pts, obj, oracle_tol);
            if (opt_cost == 0.0) continue;
            Point prediction;
            if (one_dimensional) {
                const double sign = (rng() & 1) ? 1.0 : -1.0;
                prediction = Point(opt_point.x + sign * eta * opt_cost, 0.0);
            } else {
                const double theta = detail::uniform_in(rng, 0.0, 2.0 * std::numbers::pi);
                prediction = Point(opt_point.x + eta * opt_cost * std::cos(theta),
                                   opt_point.y + eta * opt_cost * std::sin(theta));
            }
            const Instance inst(std::move(pts), prediction);
            const Point f = evaluate(spec, inst);
            worst = std::max(worst, social_cost(f, inst.points, obj) / opt_cost);
        }
        rows.push_back({eta, worst,
                        reference_bound(spec.kind, obj, spec.confidence, eta)});
    }
    return rows;
}

inline bool error_curve_within_bounds(std::span<const ErrorCurveRow> rows,
                                      double tolerance = 1e-5) {
    for (const ErrorCurveRow& r : rows)
        if (r.max_observed_ratio > r.bound + tolerance) return false;
    return true;
}

inline void write_csv(std::ostream& out, std::span<const ErrorCurveRow> rows) {
    out << "eta_bucket,max_observed_ratio,bound\n";
    for (const ErrorCurveRow& r : rows)
        out << format_double(r.eta_bucket) << ',' << format_double(r.max_observed_ratio) << ','
            << format_double(r.bound) << '\n';
}

inline nlohmann::json to_json(const ErrorCurveRow& r) {
    return {{"eta_bucket", r.eta_bucket},
            {"max_observed_ratio", json_number(r.max_observed_ratio)},
            {"bound", json_number(r.bound)}};
}

// ---------------------------------------------------------------------------
// coa-verify: worst-case search vs closed form.

struct CoaVerifyRow {
    double c = 0.0;
    CoaMode mode = CoaMode::Consistency;
    double x_star = 0.0;
    double search_max = 0.0;
    double closed_form = 0.0;
    double delta = 0.0;
};

inline std::vector<CoaVerifyRow> coa_verify(std::span<const double> cs,
                                            std::size_t resolution = 4000) {
    std::vector<CoaVerifyRow> rows;
    rows.reserve(cs.size() * 2);
    for (const double c : cs) {
        for (const CoaMode mode : {CoaMode::Consistency, CoaMode::Robustness}) {
            const CoaSearchResult r = coa_search(c, mode, resolution);
            const double closed = mode == CoaMode::Consistency ? bound_cmp_consistency(c)
                                                               : bound_cmp_robustness(c);
            rows.push_back(
                {c, mode, r.x_star, r.max_ratio, closed, std::abs(r.max_ratio - closed)});
        }
    }
    return rows;
}

inline bool coa_verify_ok(std::span<const CoaVerifyRow> rows, double tolerance = 1e-6) {
    for (const CoaVerifyRow& r : rows)
        if (!(r.delta < tolerance)) return false;
    return true;
}

inline void write_csv(std::ostream& out, std::span<const CoaVerifyRow> rows) {
    out << "c,mode,x_star,search_max,closed_form,delta\n";
    for (const CoaVerifyRow& r : rows)
        out << format_double(r.c) << ',' << to_string(r.mode) << ',' << format_double(r.x_star)
            << ',' << format_double(r.search_max) << ',' << format_double(r.closed_form) << ','
            << format_double(r.delta) << '\n';
}

inline nlohmann::json to_json(const CoaVerifyRow& r) {
    return {{"c", r.c},           {"mode", to_string(r.mode)},
            {"x_star", r.x_star}, {"search_max", json_number(r.search_max)},
            {"closed_form", json_number(r.closed_form)}, {"delta", json_number(r.delta)}};
}

// ---------------------------------------------------------------------------
// fuzz report serialization.

inline nlohmann::json to_json(const FuzzReport& report, const std::string& mechanism,
                              std::optional<double> confidence) {
    nlohmann::json j;
    j["mechanism"] = mechanism;
    if (confidence) j["confidence"] = *confidence;
    j["trials"] = report.trials;
    j["triples"] = report.triples;
    j["violation_count"] = report.violations.size();
    auto& violations = j["violations"] = nlohmann::json::array();
    for (const FuzzViolation& v : report.violations) {
        nlohmann::json jv;
        jv["trial_seed"] = v.trial_seed;
        jv["agent"] = v.agent;
        jv["deviation"] = {v.deviation.x, v.deviation.y};
        jv["truthful_distance"] = v.truthful_distance;
        jv["deviating_distance"] = v.deviating_distance;
        InstanceFile file{v.instance.points, v.instance.prediction, {}};
        jv["instance"] = to_json(file);
        violations.push_back(std::move(jv));
    }
    return j;
}

// ---------------------------------------------------------------------------
// gen: named instance generators behind one entry point.

struct GenParams {
    double c = 0.5;
    std::size_t n = 8;
    std::uint64_t seed = 0;
    BoundingBox box = default_box();
    PredictionMode prediction_mode = PredictionMode::UniformInBox;
};

inline PredictionMode parse_prediction_mode(const std::string& name) {
    if (name == "oracle-egalitarian") return PredictionMode::OracleEgalitarian;
    if (name == "oracle-utilitarian") return PredictionMode::OracleUtilitarian;
    if (name == "uniform") return PredictionMode::UniformInBox;
    if (name == "corner") return PredictionMode::AdversarialCorner;
    throw std::invalid_argument("unknown prediction mode: " + name);
}

inline InstanceFile generate_named_instance(const std::string& generator,
                                            const GenParams& params) {
    InstanceFile file;
    auto fill = [&file](const Instance& inst) {
        file.points = inst.points;
        file.prediction = inst.prediction;
    };
    file.metadata["generator"] = generator;
    if (generator == "lemma42-consistency") {
        fill(lemma42_consistency_instance(params.c, params.n));
        file.metadata["c"] = format_double(params.c);
        file.metadata["n"] = std::to_string(params.n);
    } else if (generator == "lemma42-robustness") {
        fill(lemma42_robustness_instance(params.c, params.n));
        file.metadata["c"] = format_double(params.c);
        file.metadata["n"] = std::to_string(params.n);
    } else if (generator == "theorem33") {
        fill(theorem33_robustness_instance());
    } else if (generator == "minmaxp-tight") {
        fill(minmaxp_tightness_instance());
        file.metadata["dimension"] = "1";
    } else if (generator == "random") {
        fill(random_instance(params.n, params.seed, params.box, params.prediction_mode));
        file.metadata["n"] = std::to_string(params.n);
        file.metadata["seed"] = std::to_string(params.seed);
    } else {
        throw std::invalid_argument("unknown generator: " + generator);
    }
    return file;
}

}  // namespace floc
