#ifndef GELKIT_SERIALIZE_HPP
#define GELKIT_SERIALIZE_HPP

#include <optional>
#include <ostream>
#include <string>

#include "gelkit/inference.hpp"
#include "gelkit/montecarlo.hpp"

namespace gelkit {

/// Shortest exact form capped at 17 significant digits ("%.17g").
std::string format_double(double value);

/// Combined inference report for one estimate. Robust and bias blocks are
/// optional because they are not defined (or may fail) for every family.
struct EstimateReport {
    EstimateResult estimate;
    std::optional<ClassicalInference> classical;
    std::optional<BiasEstimate> bias;
    std::optional<RobustBeta> robust;
};

void write_estimate_json(std::ostream& out, const EstimateReport& report);
void write_lr_json(std::ostream& out, const LrTest& test, const Vector& theta0,
                   const Vector& theta_hat);

void write_summary_json(std::ostream& out, const StudyConfig& config,
                        const StudySummary& summary);
void write_replications_csv(std::ostream& out, const StudyConfig& config,
                            const StudySummary& summary);
void write_ecdf_csv(std::ostream& out, const StudySummary& summary);
void write_weights_csv(std::ostream& out, const std::vector<WeightRow>& rows);
void write_weights_json(std::ostream& out, const std::vector<WeightRow>& rows);

} // namespace gelkit

#endif
