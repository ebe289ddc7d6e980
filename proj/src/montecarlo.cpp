#include "gelkit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace gelkit {

void StudyConfig::validate() const {
    if (replications < 1) throw BadDesign("study needs replications >= 1");
    if (families.empty()) throw BadDesign("study needs at least one family");
    if (n < 1) throw BadDesign("study needs n >= 1");
}

Dataset sample_design(const BuiltinDesign& design, int n, RngStream& stream) {
    NormalSource normals(stream);
    Matrix rows(n, design.model.n_x);
    switch (design.kind) {
    case DesignKind::HallHorowitz: {
        const int K = static_cast<int>(design.param);
        for (int i = 0; i < n; ++i) {
            rows(i, 0) = 0.4 * normals.next();
            rows(i, 1) = 0.4 * normals.next();
            for (int k = 2; k < K; ++k) {
                const double z = normals.next();
                rows(i, k) = z * z; // chi-square with one degree of freedom
            }
        }
        break;
    }
    case DesignKind::MeanKnownVariance:
        for (int i = 0; i < n; ++i) rows(i, 0) = design.param * normals.next();
        break;
    }
    return Dataset(std::move(rows));
}

namespace {

RepRecord run_attempt(const StudyConfig& config, int attempt) {
    RepRecord rec;
    rec.rep_index = attempt;
    rec.seed = RngStream::rep_seed(config.base_seed, static_cast<std::uint64_t>(attempt));
    RngStream stream(config.base_seed, static_cast<std::uint64_t>(attempt));
    const Dataset sample = sample_design(config.design, config.n, stream);

    rec.valid = true;
    rec.results.reserve(config.families.size());
    for (const FamilySpec& family : config.families) {
        FamilyRepResult fr;
        try {
            const EstimateResult est =
                estimate(family, config.design.model, sample, config.estimate_options);
            fr.status = est.status;
            if (est.status == EstimateStatus::Converged) fr.theta_hat = est.theta_hat;
        } catch (const Error&) {
            fr.status = EstimateStatus::MaxIter;
        }
        rec.valid = rec.valid && fr.status == EstimateStatus::Converged;
        rec.results.push_back(std::move(fr));
    }
    return rec;
}

FamilySummary summarize_family(const StudyConfig& config, const std::vector<RepRecord>& records,
                               std::size_t family_index) {
    FamilySummary out;
    out.family = config.families[family_index];
    const int ntheta = config.design.model.n_theta;

    Vector sum = Vector::Zero(ntheta);
    for (const RepRecord& rec : records) {
        if (!rec.valid) continue;
        sum += rec.results[family_index].theta_hat;
        out.ecdf.push_back(rec.results[family_index].theta_hat(0));
        ++out.n_valid;
    }
    if (out.n_valid == 0) return out;

    const Vector mean = sum / out.n_valid;
    out.mean_bias = mean - config.design.theta_star;
    if (out.n_valid >= 2) {
        Vector ss = Vector::Zero(ntheta);
        for (const RepRecord& rec : records) {
            if (!rec.valid) continue;
            const Vector d = rec.results[family_index].theta_hat - mean;
            ss += d.cwiseProduct(d);
        }
        out.std_dev = (ss / (out.n_valid - 1)).cwiseSqrt();
    }
    std::sort(out.ecdf.begin(), out.ecdf.end());
    return out;
}

} // namespace

StudySummary run_study(const StudyConfig& config) {
    config.validate();
    const int target = config.replications;
    const int max_attempts =
        config.max_attempts > 0 ? config.max_attempts : 3 * config.replications;
    const int workers = std::max(1, config.workers);

    // Attempts are evaluated in blocks, possibly in parallel, but merged in
    // attempt order, so the summary depends only on the config.
    std::vector<RepRecord> records;
    records.reserve(max_attempts);
    int valid_count = 0;
    int next_attempt = 0;
    while (next_attempt < max_attempts && valid_count < target) {
        const int batch =
            std::min(std::max(4 * workers, 8), max_attempts - next_attempt);
        std::vector<RepRecord> block(batch);
        if (workers == 1) {
            for (int b = 0; b < batch; ++b) block[b] = run_attempt(config, next_attempt + b);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int t = 0; t < workers; ++t)
                pool.emplace_back([&, t]() {
                    for (int b = t; b < batch; b += workers)
                        block[b] = run_attempt(config, next_attempt + b);
                });
            for (auto& th : pool) th.join();
        }
        for (auto& rec : block) {
            valid_count += rec.valid ? 1 : 0;
            records.push_back(std::move(rec));
            if (valid_count == target) break; // later attempts never happened
        }
        next_attempt += batch;
    }

    StudySummary summary;
    summary.records = std::move(records);
    summary.n_attempted = static_cast<int>(summary.records.size());
    summary.n_valid = valid_count;
    summary.n_discarded = summary.n_attempted - summary.n_valid;
    summary.too_many_discards = valid_count < target;
    for (std::size_t f = 0; f < config.families.size(); ++f)
        summary.families.push_back(summarize_family(config, summary.records, f));
    return summary;
}

std::vector<WeightRow> weights_dump(const FamilySpec& family, const MomentModel& model,
                                    const Dataset& data, const Vector& theta) {
    const Matrix gmat = eval_moments(model, data, theta);
    const TiltSolution tilt = solve_lambda(family.inner(), gmat);
    if (tilt.status != TiltStatus::Converged)
        throw ConvexHullError("weights_dump: inner solve failed (status " +
                              std::string(to_string(tilt.status)) + ")");

    std::vector<WeightRow> rows(data.n());
    for (int i = 0; i < data.n(); ++i)
        rows[i] = {data.rows()(i, 0), data.n() * tilt.weights(i)};
    std::stable_sort(rows.begin(), rows.end(),
                     [](const WeightRow& a, const WeightRow& b) { return a.x_key < b.x_key; });
    return rows;
}

} // namespace gelkit
