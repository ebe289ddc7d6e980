// gelkit command-line driver: estimation, inference and replication studies
// for moment-condition models. Exit codes: 0 ok, 1 I/O or argument errors,
// 2 no convergence, 3 too many discarded replications.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gelkit/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitTooManyDiscards = 3;

struct OutputTarget {
    std::string path; // empty: standard output carries the data

    int write(const std::string& payload) const {
        if (path.empty()) {
            std::cout << payload;
            return kExitOk;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << path << "'\n";
            return kExitIo;
        }
        out << payload;
        return out ? kExitOk : kExitIo;
    }
};

std::vector<gelkit::FamilySpec> parse_family_list(const std::string& csv) {
    std::vector<gelkit::FamilySpec> families;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) families.push_back(gelkit::FamilySpec::parse(item));
    if (families.empty()) throw gelkit::BadDesign("no families given");
    return families;
}

int run_estimate(const std::string& model_id, const std::string& family_name,
                 const std::string& data_path, const OutputTarget& target,
                 const gelkit::EstimateOptions& options) {
    const gelkit::BuiltinDesign design = gelkit::parse_design(model_id);
    const gelkit::FamilySpec family = gelkit::FamilySpec::parse(family_name);
    const gelkit::Dataset data = gelkit::Dataset::from_csv(data_path);

    gelkit::EstimateReport report;
    report.estimate = gelkit::estimate(family, design.model, data, options);
    if (report.estimate.status != gelkit::EstimateStatus::Converged) {
        std::ostringstream payload;
        gelkit::write_estimate_json(payload, report);
        target.write(payload.str());
        std::cerr << "estimate did not converge (status "
                  << gelkit::to_string(report.estimate.status) << ")\n";
        return kExitNoConvergence;
    }

    report.classical =
        gelkit::classical_covariance(design.model, data, report.estimate.theta_hat);
    try {
        report.bias = gelkit::bias_o1(design.model, data, report.estimate.theta_hat);
    } catch (const gelkit::Error& err) {
        std::cerr << "warning: bias estimate unavailable: " << err.what() << "\n";
    }
    if (family.kind == gelkit::FamilyKind::ETEL) {
        // the sandwich is built on the ETEL estimating equations; for other
        // families the stacked system is not zero at theta_hat
        try {
            report.robust = gelkit::robust_covariance(design.model, data,
                                                      report.estimate.theta_hat,
                                                      report.estimate.lambda_hat);
        } catch (const gelkit::Error& err) {
            std::cerr << "warning: robust covariance unavailable: " << err.what() << "\n";
        }
    }

    std::ostringstream payload;
    gelkit::write_estimate_json(payload, report);
    return target.write(payload.str());
}

int run_mc(const std::string& design_id, int n, int reps, std::uint64_t seed,
           const std::string& families_csv, const std::string& out_dir, int workers,
           int max_attempts) {
    gelkit::StudyConfig config;
    config.design = gelkit::parse_design(design_id);
    config.n = n;
    config.replications = reps;
    config.base_seed = seed;
    config.families = parse_family_list(families_csv);
    config.workers = workers;
    config.max_attempts = max_attempts;

    const gelkit::StudySummary summary = gelkit::run_study(config);

    const auto write_file = [&](const std::string& name, auto writer) -> bool {
        std::ofstream out(out_dir + "/" + name, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << out_dir << "/" << name << "'\n";
            return false;
        }
        writer(out);
        return static_cast<bool>(out);
    };
    const bool ok =
        write_file("summary.json",
                   [&](std::ostream& o) { gelkit::write_summary_json(o, config, summary); }) &&
        write_file("replications.csv",
                   [&](std::ostream& o) { gelkit::write_replications_csv(o, config, summary); }) &&
        write_file("ecdf.csv", [&](std::ostream& o) { gelkit::write_ecdf_csv(o, summary); });
    if (!ok) return kExitIo;
    if (summary.too_many_discards) {
        std::cerr << "too many discarded samples: " << summary.n_valid << " of "
                  << config.replications << " valid after " << summary.n_attempted
                  << " attempts\n";
        return kExitTooManyDiscards;
    }
    return kExitOk;
}

int run_weights(const std::string& model_id, const std::string& family_name,
                const std::string& data_path, bool have_theta, double theta_value,
                const OutputTarget& target, const gelkit::EstimateOptions& options,
                const std::string& format) {
    const gelkit::BuiltinDesign design = gelkit::parse_design(model_id);
    const gelkit::FamilySpec family = gelkit::FamilySpec::parse(family_name);
    const gelkit::Dataset data = gelkit::Dataset::from_csv(data_path);

    gelkit::Vector theta(design.model.n_theta);
    if (have_theta) {
        theta.setConstant(theta_value);
    } else {
        const gelkit::EstimateResult est = gelkit::estimate(family, design.model, data, options);
        if (est.status != gelkit::EstimateStatus::Converged) {
            std::cerr << "estimate did not converge (status " << gelkit::to_string(est.status)
                      << ")\n";
            return kExitNoConvergence;
        }
        theta = est.theta_hat;
    }

    const auto rows = gelkit::weights_dump(family, design.model, data, theta);
    std::ostringstream payload;
    if (format == "json")
        gelkit::write_weights_json(payload, rows);
    else
        gelkit::write_weights_csv(payload, rows);
    return target.write(payload.str());
}

int run_test(const std::string& model_id, const std::string& data_path, double theta0_value,
             const OutputTarget& target, const gelkit::EstimateOptions& options) {
    const gelkit::BuiltinDesign design = gelkit::parse_design(model_id);
    const gelkit::Dataset data = gelkit::Dataset::from_csv(data_path);

    // the likelihood-ratio statistic is defined through the ETEL objective
    const gelkit::EstimateResult est =
        gelkit::estimate(gelkit::FamilySpec::etel(), design.model, data, options);
    if (est.status != gelkit::EstimateStatus::Converged) {
        std::cerr << "estimate did not converge (status " << gelkit::to_string(est.status)
                  << ")\n";
        return kExitNoConvergence;
    }
    gelkit::Vector theta0 = gelkit::Vector::Constant(design.model.n_theta, theta0_value);
    if (design.model.n_g == design.model.n_theta)
        std::cerr << "note: model is just identified (df 0 for overidentification)\n";

    const gelkit::LrTest lr = gelkit::lr_statistic(design.model, data, theta0, est.theta_hat);
    std::ostringstream payload;
    gelkit::write_lr_json(payload, lr, theta0, est.theta_hat);
    return target.write(payload.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"empirical-discrepancy estimators for moment condition models"};
    app.require_subcommand(1);

    std::string model_id, family_name = "etel", data_path, out_path, out_dir = ".";
    std::string families_csv, format = "csv";
    int n = 200, reps = 100, workers = 1, max_attempts = 0;
    std::uint64_t seed = 0;
    double theta0 = 0.0, theta_value = 0.0;
    gelkit::EstimateOptions options;

    auto add_estimate_flags = [&](CLI::App* cmd) {
        cmd->add_option("--starts", options.starts, "multistart grid size");
        cmd->add_option("--tol", options.tol, "outer convergence tolerance");
        cmd->add_option("--max-iter", options.max_iter, "outer iteration cap");
    };

    CLI::App* est = app.add_subcommand("estimate", "point estimate with inference report");
    est->add_option("--model", model_id, "model id, e.g. mean_known_variance:1.0")->required();
    est->add_option("--family", family_name, "el|et|cu|etel|ecr:<gamma>");
    est->add_option("--data", data_path, "CSV dataset")->required();
    est->add_option("--out", out_path, "output path (default: stdout)");
    add_estimate_flags(est);

    CLI::App* mc = app.add_subcommand("mc", "replication study");
    mc->add_option("--design", model_id, "design id, e.g. hall_horowitz:4")->required();
    mc->add_option("--n", n, "sample size")->required();
    mc->add_option("--reps", reps, "valid replications to accumulate")->required();
    mc->add_option("--seed", seed, "base seed (mandatory for reproducibility)")->required();
    mc->add_option("--families", families_csv, "comma-separated family list")->required();
    mc->add_option("--out-dir", out_dir, "directory for summary.json / CSVs");
    mc->add_option("--workers", workers, "worker threads");
    mc->add_option("--max-attempts", max_attempts, "total draw cap (default 3x reps)");
    add_estimate_flags(mc);

    CLI::App* weights = app.add_subcommand("weights", "implied probability dump");
    weights->add_option("--model", model_id)->required();
    weights->add_option("--family", family_name);
    weights->add_option("--data", data_path)->required();
    CLI::Option* theta_opt = weights->add_option("--theta", theta_value,
                                                 "evaluate at this theta (default: estimate)");
    weights->add_option("--out", out_path);
    weights->add_option("--format", format, "csv|json");
    add_estimate_flags(weights);

    CLI::App* lr = app.add_subcommand("test", "likelihood-ratio test of theta0");
    lr->add_option("--model", model_id)->required();
    lr->add_option("--data", data_path)->required();
    lr->add_option("--theta0", theta0, "null value")->required();
    lr->add_option("--out", out_path);
    add_estimate_flags(lr);

    CLI11_PARSE(app, argc, argv);

    try {
        OutputTarget target{out_path};
        if (est->parsed())
            return run_estimate(model_id, family_name, data_path, target, options);
        if (mc->parsed())
            return run_mc(model_id, n, reps, seed, families_csv, out_dir, workers, max_attempts);
        if (weights->parsed())
            return run_weights(model_id, family_name, data_path, theta_opt->count() > 0,
                               theta_value, target, options, format);
        if (lr->parsed()) return run_test(model_id, data_path, theta0, target, options);
    } catch (const gelkit::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitIo;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitIo;
    }
    return kExitIo;
}
