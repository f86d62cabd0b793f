// Command-line harness: instance evaluation, trade-off sweeps, error curves,
// strategyproofness fuzzing, worst-case search verification, and instance
// generation. Exit codes: 0 = all checks hold, 1 = usage or I/O error,
// 2 = mathematical discrepancy (bound or strategyproofness violation).

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floc/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDiscrepancy = 2;

struct OutputTarget {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit OutputTarget(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::runtime_error("cannot open output file: " + path);
        stream = &file;
    }
};

floc::OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return floc::OutputFormat::Csv;
    if (name == "json") return floc::OutputFormat::Json;
    throw std::runtime_error("unknown format: " + name);
}

template <typename Row>
void emit(std::ostream& out, floc::OutputFormat format, std::span<const Row> rows) {
    if (format == floc::OutputFormat::Csv) {
        floc::write_csv(out, rows);
        return;
    }
    nlohmann::json j = nlohmann::json::array();
    for (const Row& row : rows) j.push_back(floc::to_json(row));
    out << j.dump(2) << '\n';
}

floc::Objective default_objective(floc::MechanismKind kind) {
    switch (kind) {
        case floc::MechanismKind::MinMaxP1D:
        case floc::MechanismKind::MinimumBoundingBox:
            return floc::Objective::Egalitarian;
        case floc::MechanismKind::CoordinatewiseMedian:
        case floc::MechanismKind::CMP:
            return floc::Objective::Utilitarian;
    }
    return floc::Objective::Egalitarian;
}

floc::Objective resolve_objective(const std::string& flag, floc::MechanismKind kind) {
    return flag.empty() ? default_objective(kind) : floc::parse_objective(flag);
}

floc::BoundingBox parse_box(const std::vector<double>& values) {
    if (values.empty()) return floc::default_box();
    if (values.size() != 4)
        throw std::runtime_error("--box expects x_min,x_max,y_min,y_max");
    return {values[0], values[1], values[2], values[3]};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strategyproof facility location with predictions"};
    app.require_subcommand(1);

    std::string mechanism = "mbb";
    std::string objective_flag;
    std::string format_name = "csv";
    std::string out_path;
    double confidence = 0.0;
    double tolerance = 1e-6;
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* cmd, bool with_mechanism) {
        cmd->add_option("--format", format_name, "Output format (csv or json)")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "Write output to this path instead of stdout");
        if (with_mechanism) {
            cmd->add_option("--mechanism", mechanism,
                            "Mechanism (minmaxp1d, mbb, cm, cmp)");
            cmd->add_option("--confidence", confidence, "CMP confidence in [0,1)");
            cmd->add_option("--objective", objective_flag,
                            "Objective (egalitarian or utilitarian)");
        }
    };

    // evaluate
    auto* cmd_evaluate = app.add_subcommand("evaluate", "Evaluate a mechanism on an instance file");
    std::string instance_path;
    cmd_evaluate->add_option("instance", instance_path, "Instance JSON file")->required();
    cmd_evaluate->add_option("--tolerance", tolerance, "Bound-check tolerance");
    add_common(cmd_evaluate, true);

    // sweep-c
    auto* cmd_sweep = app.add_subcommand("sweep-c", "Consistency/robustness trade-off per c");
    std::vector<double> c_list;
    std::size_t sweep_n = 0;
    cmd_sweep->add_option("--c-list", c_list, "Confidence values")->delimiter(',')->required();
    cmd_sweep->add_option("--n", sweep_n, "Agent count (0 = smallest compatible per c)");
    cmd_sweep->add_option("--objective", objective_flag, "Objective (must be utilitarian)");
    add_common(cmd_sweep, false);

    // error-curve
    auto* cmd_curve = app.add_subcommand("error-curve", "Max observed ratio per eta bucket");
    std::vector<double> eta_grid{0.0, 0.25, 0.5, 1.0, std::numbers::sqrt2, 3.0};
    std::size_t trials = 2000;
    cmd_curve->add_option("--eta-grid", eta_grid, "Ascending prediction-error buckets")
        ->delimiter(',');
    cmd_curve->add_option("--trials", trials, "Instances per bucket");
    cmd_curve->add_option("--seed", seed, "RNG seed");
    cmd_curve->add_option("--tolerance", tolerance, "Bound-check tolerance");
    add_common(cmd_curve, true);

    // fuzz
    auto* cmd_fuzz = app.add_subcommand("fuzz", "Strategyproofness fuzzing");
    std::string fuzz_mechanism = "mbb";
    std::size_t fuzz_trials = 200;
    cmd_fuzz->add_option("--mechanism", fuzz_mechanism,
                         "Mechanism (minmaxp1d, mbb, cm, cmp, or mean for the negative control)");
    cmd_fuzz->add_option("--confidence", confidence, "CMP confidence in [0,1)");
    cmd_fuzz->add_option("--trials", fuzz_trials, "Trial instances");
    cmd_fuzz->add_option("--seed", seed, "RNG seed");
    cmd_fuzz->add_option("--out", out_path, "Write the JSON report to this path");

    // coa-verify
    auto* cmd_coa = app.add_subcommand("coa-verify",
                                       "Worst-case search vs closed form per (c, mode)");
    std::vector<double> coa_c_list{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t resolution = 4000;
    cmd_coa->add_option("--c-list", coa_c_list, "Confidence values")->delimiter(',');
    cmd_coa->add_option("--resolution", resolution, "Grid points for the x search");
    add_common(cmd_coa, false);

    // gen
    auto* cmd_gen = app.add_subcommand("gen", "Write a named instance file");
    std::string generator;
    std::string prediction_mode = "uniform";
    std::vector<double> box_values;
    floc::GenParams gen_params;
    cmd_gen->add_option("generator", generator,
                        "lemma42-consistency, lemma42-robustness, theorem33, minmaxp-tight, random")
        ->required();
    cmd_gen->add_option("--c", gen_params.c, "Confidence for the lemma42 generators");
    cmd_gen->add_option("--n", gen_params.n, "Agent count");
    cmd_gen->add_option("--seed", gen_params.seed, "RNG seed for the random generator");
    cmd_gen->add_option("--prediction-mode", prediction_mode,
                        "oracle-egalitarian, oracle-utilitarian, uniform, corner");
    cmd_gen->add_option("--box", box_values, "Sampling box x_min,x_max,y_min,y_max")
        ->delimiter(',');
    cmd_gen->add_option("--out", out_path, "Output instance path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*cmd_evaluate) {
            const floc::MechanismKind kind = floc::parse_mechanism(mechanism);
            const floc::Objective objective = resolve_objective(objective_flag, kind);
            const floc::InstanceFile file = floc::read_instance_file(instance_path);
            const floc::ResultRow row =
                floc::evaluate_instance({kind, confidence}, floc::to_instance(file), objective,
                                        tolerance, instance_path);
            OutputTarget target(out_path);
            const std::vector<floc::ResultRow> rows{row};
            emit<floc::ResultRow>(*target.stream, parse_format(format_name), rows);
            return row.within_bound ? kExitOk : kExitDiscrepancy;
        }

        if (*cmd_sweep) {
            if (!objective_flag.empty() &&
                floc::parse_objective(objective_flag) != floc::Objective::Utilitarian)
                throw std::runtime_error("sweep-c is defined for the utilitarian objective");
            const auto rows = floc::sweep_c(c_list, sweep_n);
            OutputTarget target(out_path);
            emit<floc::SweepRow>(*target.stream, parse_format(format_name), rows);
            return floc::sweep_within_bounds(rows) ? kExitOk : kExitDiscrepancy;
        }

        if (*cmd_curve) {
            const floc::MechanismKind kind = floc::parse_mechanism(mechanism);
            const floc::Objective objective = resolve_objective(objective_flag, kind);
            const auto rows =
                floc::error_curve({kind, confidence}, objective, eta_grid, trials, seed);
            OutputTarget target(out_path);
            emit<floc::ErrorCurveRow>(*target.stream, parse_format(format_name), rows);
            return floc::error_curve_within_bounds(rows, tolerance) ? kExitOk
                                                                    : kExitDiscrepancy;
        }

        if (*cmd_fuzz) {
            floc::FuzzReport report;
            std::optional<double> reported_confidence;
            if (fuzz_mechanism == "mean") {
                report = floc::strategyproofness_fuzz(floc::mean_point_mechanism, fuzz_trials,
                                                      seed, floc::FuzzOptions{});
            } else {
                const floc::MechanismKind kind = floc::parse_mechanism(fuzz_mechanism);
                if (kind == floc::MechanismKind::CMP) reported_confidence = confidence;
                report = floc::strategyproofness_fuzz(floc::MechanismSpec{kind, confidence},
                                                      fuzz_trials, seed);
            }
            OutputTarget target(out_path);
            *target.stream << floc::to_json(report, fuzz_mechanism, reported_confidence).dump(2)
                           << '\n';
            return report.violations.empty() ? kExitOk : kExitDiscrepancy;
        }

        if (*cmd_coa) {
            const auto rows = floc::coa_verify(coa_c_list, resolution);
            OutputTarget target(out_path);
            emit<floc::CoaVerifyRow>(*target.stream, parse_format(format_name), rows);
            return floc::coa_verify_ok(rows) ? kExitOk : kExitDiscrepancy;
        }

        if (*cmd_gen) {
            gen_params.box = parse_box(box_values);
            gen_params.prediction_mode = floc::parse_prediction_mode(prediction_mode);
            const floc::InstanceFile file = floc::generate_named_instance(generator, gen_params);
            floc::write_instance_file(out_path, file);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
