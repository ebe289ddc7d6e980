#ifndef GELKIT_MONTECARLO_HPP
#define GELKIT_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include "gelkit/builtin_models.hpp"
#include "gelkit/estimator.hpp"
#include "gelkit/rng.hpp"

namespace gelkit {

struct StudyConfig {
    BuiltinDesign design;
    int n = 200;
    int replications = 1000;       // target count of valid replications
    std::vector<FamilySpec> families;
    std::uint64_t base_seed = 0;
    int max_attempts = 0;          // 0 means 3 * replications
    int workers = 1;
    EstimateOptions estimate_options;

    void validate() const;
};

struct FamilyRepResult {
    EstimateStatus status = EstimateStatus::MaxIter;
    Vector theta_hat;              // empty unless Converged
};

struct RepRecord {
    int rep_index = 0;
    std::uint64_t seed = 0;
    std::vector<FamilyRepResult> results; // one per config family
    bool valid = false;                   // every family Converged
};

struct FamilySummary {
    FamilySpec family;
    Vector mean_bias;              // mean(theta_hat) - theta_star
    Vector std_dev;                // R-1 denominator; empty when R < 2
    std::vector<double> ecdf;      // sorted first components of theta_hat
    int n_valid = 0;
};

struct StudySummary {
    std::vector<FamilySummary> families;
    std::vector<RepRecord> records; // all attempts, in rep_index order
    int n_valid = 0;
    int n_discarded = 0;
    int n_attempted = 0;
    bool too_many_discards = false;
};

/// Draw one sample of the design. Normals via Box-Muller, chi2_1 as the
/// square of a standard normal; Hall-Horowitz scales (x1, x2) by 0.4.
Dataset sample_design(const BuiltinDesign& design, int n, RngStream& stream);

/// Replication engine: attempt k draws sample_design with stream
/// (base_seed, k); every family runs on the same sample; a replication is
/// valid only when all families converge (joint discard), and sampling
/// continues until `replications` valid ones or max_attempts. Fully
/// deterministic given the config, regardless of worker count.
StudySummary run_study(const StudyConfig& config);

struct WeightRow {
    double x_key; // first coordinate of the observation
    double n_w;   // normalized weight n * w_i
};

/// Per-observation normalized implied probabilities at theta, keyed and
/// sorted by the first coordinate of x. Throws ConvexHullError when the
/// inner solve fails.
std::vector<WeightRow> weights_dump(const FamilySpec& family, const MomentModel& model,
                                    const Dataset& data, const Vector& theta);

} // namespace gelkit

#endif
