#include "dispatchopt/study.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace dispatchopt {

MetricSummary summarize(const std::vector<double>& values) {
    if (values.empty()) return {};
    if (values.size() == 1) return {values.front(), 0.0};
    const auto ci = mean_and_ci(values, 0.95);
    return {ci.mean, ci.half_width()};
}

std::uint64_t scenario_seed(std::uint64_t base_seed, int scenario_id) {
    return derive_seed(base_seed, static_cast<std::uint64_t>(scenario_id));
}

ScenarioStudy study_scenario(const Scenario& scenario, const NetworkConfig& config,
                             const GaParams& ga, const PrecisionPolicy& precision,
                             const PrecisionPolicy& ga_precision, std::uint64_t seed) {
    ScenarioStudy study;
    study.scenario = scenario;
    const auto bounds = bounds_for_scenario(scenario, config);
    const auto fitness = simulation_fitness(config, scenario, precision);

    study.fitness_replicates = run_until_precise(
        [&](std::uint64_t run_seed) {
            auto result = run_ssga(bounds, ga, fitness, run_seed);
            GaRunRecord record;
            record.run = static_cast<int>(study.runs.size());
            record.seed = run_seed;
            record.best = result.best.record;
            record.policy = policy_from_genes(result.best.chromosome.genes, scenario, config);
            record.log = std::move(result.log);
            record.evaluations = result.evaluations;
            study.runs.push_back(std::move(record));
            return study.runs.back().best.fitness;
        },
        ga_precision, seed);

    std::vector<double> f, tc, fr, r, q;
    for (const auto& run : study.runs) {
        f.push_back(run.best.fitness);
        tc.push_back(run.best.total_cost);
        fr.push_back(run.best.fill_rate);
        r.push_back(run.policy.reorder_point);
        q.push_back(run.policy.reorder_quantity);
    }
    study.fitness = summarize(f);
    study.total_cost = summarize(tc);
    study.fill_rate = summarize(fr);
    study.reorder_point = summarize(r);
    study.reorder_quantity = summarize(q);
    for (std::size_t i = 1; i < study.runs.size(); ++i) {
        if (study.runs[i].best.total_cost < study.runs[study.best_run].best.total_cost) {
            study.best_run = i;
        }
    }
    return study;
}

StudyReport run_study(const RunManifest& manifest, const NetworkConfig& config,
                      const StudyProgress& progress) {
    StudyReport report;
    for (int id : manifest.scenario_ids) {
        const auto scenario = scenario_from_id(id);
        report.scenarios.push_back(study_scenario(scenario, config, manifest.ga,
                                                  manifest.precision, manifest.ga_precision,
                                                  scenario_seed(manifest.base_seed, id)));
        if (!manifest.output_dir.empty()) write_study_artifacts(report, manifest.output_dir);
        if (progress) progress(report.scenarios.back());
    }
    return report;
}

void write_summary_csv(std::ostream& out, const StudyReport& report) {
    out << std::setprecision(12) << "scenario,metric,mean,ci_halfwidth\n";
    for (const auto& s : report.scenarios) {
        const std::pair<const char*, const MetricSummary*> rows[] = {
            {"F", &s.fitness}, {"TC", &s.total_cost}, {"FR", &s.fill_rate}};
        for (const auto& [name, metric] : rows) {
            out << s.scenario.id << ',' << name << ',' << metric->mean << ','
                << metric->ci_half_width << '\n';
        }
    }
}

void write_best_solutions_csv(std::ostream& out, const StudyReport& report) {
    out << std::setprecision(12) << "scenario,TC,r,Q,dispatch_params\n";
    for (const auto& s : report.scenarios) {
        const auto& best = s.best();
        out << s.scenario.id << ',' << best.best.total_cost << ',' << best.policy.reorder_point
            << ',' << best.policy.reorder_quantity << ',' << format_dispatch(best.policy.dispatch)
            << '\n';
    }
}

void write_rq_summary_csv(std::ostream& out, const StudyReport& report) {
    out << std::setprecision(12) << "scenario,variable,mean,ci_halfwidth\n";
    for (const auto& s : report.scenarios) {
        out << s.scenario.id << ",r," << s.reorder_point.mean << ','
            << s.reorder_point.ci_half_width << '\n';
        out << s.scenario.id << ",Q," << s.reorder_quantity.mean << ','
            << s.reorder_quantity.ci_half_width << '\n';
    }
}

namespace {

nlohmann::json metric_json(const MetricSummary& m) {
    return {{"mean", m.mean}, {"ci_halfwidth", m.ci_half_width}};
}

nlohmann::json policy_json(const PolicyParams& p) {
    nlohmann::json doc = {{"r", p.reorder_point}, {"Q", p.reorder_quantity}};
    if (const auto* m = std::get_if<QuantityThresholds>(&p.dispatch)) {
        doc["M"] = m->values;
    } else {
        doc["S"] = std::get<ScheduleIntervals>(p.dispatch).days;
    }
    doc["dispatch_params"] = format_dispatch(p.dispatch);
    return doc;
}

std::string convergence_file(int scenario_id, int run) {
    return "convergence_s" + std::to_string(scenario_id) + "_run" + std::to_string(run) + ".csv";
}

}  // namespace

std::string study_json(const StudyReport& report) {
    nlohmann::json scenarios = nlohmann::json::array();
    for (const auto& s : report.scenarios) {
        nlohmann::json runs = nlohmann::json::array();
        for (const auto& run : s.runs) {
            runs.push_back({{"run", run.run},
                            {"seed", run.seed},
                            {"F", run.best.fitness},
                            {"TC", run.best.total_cost},
                            {"FR", run.best.fill_rate},
                            {"replicates", run.best.replicates},
                            {"evaluations", run.evaluations},
                            {"policy", policy_json(run.policy)},
                            {"convergence", convergence_file(s.scenario.id, run.run)}});
        }
        const auto& best = s.best();
        scenarios.push_back({
            {"scenario", s.scenario.id},
            {"description", describe(s.scenario)},
            {"ga_replicates", s.fitness_replicates.n},
            {"ga_replicates_precise", s.fitness_replicates.precise},
            {"summary",
             {{"F", metric_json(s.fitness)},
              {"TC", metric_json(s.total_cost)},
              {"FR", metric_json(s.fill_rate)}}},
            {"rq_summary",
             {{"r", metric_json(s.reorder_point)}, {"Q", metric_json(s.reorder_quantity)}}},
            {"best_solution", {{"TC", best.best.total_cost}, {"policy", policy_json(best.policy)}}},
            {"runs", runs},
        });
    }
    return nlohmann::json{{"scenarios", scenarios}}.dump(2) + "\n";
}

void write_study_artifacts(const StudyReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&dir](const std::string& name, const auto& writer) {
        std::ofstream out(dir / name);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        writer(out);
    };
    write("summary.csv", [&](std::ostream& o) { write_summary_csv(o, report); });
    write("best_solutions.csv", [&](std::ostream& o) { write_best_solutions_csv(o, report); });
    write("rq_summary.csv", [&](std::ostream& o) { write_rq_summary_csv(o, report); });
    write("study.json", [&](std::ostream& o) { o << study_json(report); });
    for (const auto& s : report.scenarios) {
        for (const auto& run : s.runs) {
            write(convergence_file(s.scenario.id, run.run),
                  [&](std::ostream& o) { write_convergence_csv(o, run.log); });
        }
    }
}

}  // namespace dispatchopt
