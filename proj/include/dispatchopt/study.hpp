#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dispatchopt/config_io.hpp"
#include "dispatchopt/domain.hpp"
#include "dispatchopt/simulation.hpp"
#include "dispatchopt/ssga.hpp"
#include "dispatchopt/stats.hpp"

namespace dispatchopt {

struct GaRunRecord {
    int run = 0;
    std::uint64_t seed = 0;
    FitnessRecord best;
    PolicyParams policy;
    std::vector<GenerationLog> log;
    long evaluations = 0;
};

struct MetricSummary {
    double mean = 0.0;
    double ci_half_width = 0.0;
};

/// 95% summary of a sample; half-width 0 for fewer than two values.
MetricSummary summarize(const std::vector<double>& values);

struct ScenarioStudy {
    Scenario scenario;
    ReplicateSummary fitness_replicates;  // best F across whole-GA runs
    std::vector<GaRunRecord> runs;
    MetricSummary fitness;
    MetricSummary total_cost;
    MetricSummary fill_rate;
    MetricSummary reorder_point;
    MetricSummary reorder_quantity;
    std::size_t best_run = 0;  // lowest total cost across runs

    const GaRunRecord& best() const { return runs.at(best_run); }
};

struct StudyReport {
    std::vector<ScenarioStudy> scenarios;
};

/// Seed for scenario `id` in a study started from `base_seed`.
std::uint64_t scenario_seed(std::uint64_t base_seed, int scenario_id);

/// Repeats whole GA runs until the best fitness is precise to ga_precision.
ScenarioStudy study_scenario(const Scenario& scenario, const NetworkConfig& config,
                             const GaParams& ga, const PrecisionPolicy& precision,
                             const PrecisionPolicy& ga_precision, std::uint64_t seed);

using StudyProgress = std::function<void(const ScenarioStudy&)>;

/// Runs every scenario in the manifest and writes artifacts into the output
/// directory as each scenario finishes, so an interrupted study keeps what it
/// completed.
StudyReport run_study(const RunManifest& manifest, const NetworkConfig& config,
                      const StudyProgress& progress = {});

void write_summary_csv(std::ostream& out, const StudyReport& report);
void write_best_solutions_csv(std::ostream& out, const StudyReport& report);
void write_rq_summary_csv(std::ostream& out, const StudyReport& report);
std::string study_json(const StudyReport& report);

/// summary.csv, best_solutions.csv, rq_summary.csv, study.json and one
/// convergence_s<id>_run<k>.csv per GA run.
void write_study_artifacts(const StudyReport& report, const std::filesystem::path& dir);

}  // namespace dispatchopt
