#include "gelkit/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace gelkit {

namespace {

std::string json_number(double value) {
    if (!std::isfinite(value)) return "null";
    return format_double(value);
}

std::string json_vector(const Vector& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += json_number(v(i));
    }
    return out + "]";
}

// vector theta component for CSV cells, semicolon-joined when Ntheta > 1
std::string csv_vector(const Vector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ";";
        out += format_double(v(i));
    }
    return out;
}

} // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_estimate_json(std::ostream& out, const EstimateReport& report) {
    const EstimateResult& est = report.estimate;
    out << "{\n";
    out << "  \"family\": \"" << est.family.name() << "\",\n";
    out << "  \"status\": \"" << to_string(est.status) << "\",\n";
    out << "  \"theta_hat\": " << json_vector(est.theta_hat) << ",\n";
    out << "  \"log_like\": " << json_number(est.log_like) << ",\n";
    if (report.classical) {
        out << "  \"std_classical\": " << json_vector(report.classical->std_errors) << ",\n";
        out << "  \"lr_overid\": " << json_number(report.classical->lr_overid) << ",\n";
        out << "  \"p_overid\": " << json_number(report.classical->p_overid) << ",\n";
        out << "  \"df_overid\": " << report.classical->df_overid << ",\n";
    } else {
        out << "  \"std_classical\": null,\n  \"lr_overid\": null,\n"
               "  \"p_overid\": null,\n  \"df_overid\": null,\n";
    }
    if (report.robust) {
        Vector robust_std = report.robust->theta_block.diagonal().cwiseSqrt();
        out << "  \"std_robust\": " << json_vector(robust_std) << ",\n";
    } else {
        out << "  \"std_robust\": null,\n";
    }
    if (report.bias) {
        out << "  \"bias\": " << json_vector(report.bias->bias) << ",\n";
        out << "  \"theta_bc\": " << json_vector(report.bias->theta_bc) << "\n";
    } else {
        out << "  \"bias\": null,\n  \"theta_bc\": null\n";
    }
    out << "}\n";
}

void write_lr_json(std::ostream& out, const LrTest& test, const Vector& theta0,
                   const Vector& theta_hat) {
    out << "{\n";
    out << "  \"theta0\": " << json_vector(theta0) << ",\n";
    out << "  \"theta_hat\": " << json_vector(theta_hat) << ",\n";
    out << "  \"stat\": " << json_number(test.stat) << ",\n";
    out << "  \"p\": " << json_number(test.p) << ",\n";
    out << "  \"df\": " << test.df << "\n";
    out << "}\n";
}

void write_summary_json(std::ostream& out, const StudyConfig& config,
                        const StudySummary& summary) {
    out << "{\n";
    out << "  \"design\": \"" << config.design.id << "\",\n";
    out << "  \"n\": " << config.n << ",\n";
    out << "  \"replications\": " << config.replications << ",\n";
    out << "  \"base_seed\": " << config.base_seed << ",\n";
    out << "  \"theta_star\": " << json_vector(config.design.theta_star) << ",\n";
    out << "  \"n_valid\": " << summary.n_valid << ",\n";
    out << "  \"n_discarded\": " << summary.n_discarded << ",\n";
    out << "  \"n_attempted\": " << summary.n_attempted << ",\n";
    out << "  \"too_many_discards\": " << (summary.too_many_discards ? "true" : "false") << ",\n";
    out << "  \"families\": [\n";
    for (std::size_t f = 0; f < summary.families.size(); ++f) {
        const FamilySummary& fs = summary.families[f];
        out << "    {\"family\": \"" << fs.family.name() << "\", \"n_valid\": " << fs.n_valid;
        if (fs.mean_bias.size() > 0)
            out << ", \"mean_bias\": " << json_vector(fs.mean_bias);
        else
            out << ", \"mean_bias\": null";
        if (fs.std_dev.size() > 0)
            out << ", \"std_dev\": " << json_vector(fs.std_dev);
        else
            out << ", \"std_dev\": null";
        out << "}" << (f + 1 < summary.families.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

void write_replications_csv(std::ostream& out, const StudyConfig& config,
                            const StudySummary& summary) {
    out << "rep_index,seed,family,theta_hat,status\n";
    for (const RepRecord& rec : summary.records) {
        for (std::size_t f = 0; f < config.families.size(); ++f) {
            const FamilyRepResult& fr = rec.results[f];
            out << rec.rep_index << ',' << rec.seed << ',' << config.families[f].name() << ',';
            if (fr.theta_hat.size() > 0) out << csv_vector(fr.theta_hat);
            out << ',' << to_string(fr.status) << '\n';
        }
    }
}

void write_ecdf_csv(std::ostream& out, const StudySummary& summary) {
    out << "family,theta_hat\n";
    for (const FamilySummary& fs : summary.families)
        for (const double value : fs.ecdf)
            out << fs.family.name() << ',' << format_double(value) << '\n';
}

void write_weights_csv(std::ostream& out, const std::vector<WeightRow>& rows) {
    out << "x,n_w\n";
    for (const WeightRow& row : rows)
        out << format_double(row.x_key) << ',' << format_double(row.n_w) << '\n';
}

void write_weights_json(std::ostream& out, const std::vector<WeightRow>& rows) {
    out << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        out << "  {\"x\": " << json_number(rows[i].x_key)
            << ", \"n_w\": " << json_number(rows[i].n_w) << "}"
            << (i + 1 < rows.size() ? "," : "") << "\n";
    out << "]\n";
}

} // namespace gelkit
