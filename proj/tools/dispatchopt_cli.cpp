// dispatchopt: simulate one policy, optimize one scenario, or run the
// six-scenario study and write plot-ready CSVs.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dispatchopt/config_io.hpp"
#include "dispatchopt/simulation.hpp"
#include "dispatchopt/ssga.hpp"
#include "dispatchopt/study.hpp"

using namespace dispatchopt;

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<int> scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<double> horizon;
    std::optional<int> generations;
    std::optional<int> population;
    std::optional<double> delta;
    bool trace = false;
    bool fast = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--scenario", o.scenario, "Scenario id 1..6")->check(CLI::Range(1, 6));
    cmd->add_option("--seed", o.seed, "Base seed (default: $DISPATCHOPT_SEED or config)");
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--horizon", o.horizon, "Simulation horizon in days");
    cmd->add_option("--generations", o.generations, "GA generations");
    cmd->add_option("--population", o.population, "GA population size");
    cmd->add_option("--delta", o.delta, "Relative precision target W/mean");
    cmd->add_flag("--trace", o.trace, "Write the inventory trace");
    cmd->add_flag("--fast", o.fast, "Reduced profile: N=20, G=100, max_n=10");
}

LoadedRun resolve(const CommonOptions& o, RunMode mode) {
    LoadedRun run = o.config_path.empty() ? parse_manifest("{}") : load_manifest(o.config_path);
    auto& m = run.manifest;
    m.mode = mode;
    if (const char* env = std::getenv("DISPATCHOPT_SEED"); env && *env) {
        m.base_seed = std::stoull(env);
    }
    if (o.seed) m.base_seed = *o.seed;
    if (o.fast) apply_fast_profile(m);
    if (o.scenario) m.scenario_ids = {*o.scenario};
    if (o.out_dir) m.output_dir = *o.out_dir;
    if (o.horizon) {
        run.config.horizon_days = *o.horizon;
        run.config = validate_config(run.config);
    }
    if (o.generations) m.ga.generations = *o.generations;
    if (o.population) m.ga.population_size = *o.population;
    if (o.delta) {
        m.precision.delta = *o.delta;
        m.ga_precision.delta = *o.delta;
    }
    validate_ga_params(m.ga);
    validate_precision_policy(m.precision);
    return run;
}

std::vector<int> parse_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) values.push_back(std::stoi(item));
    return values;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

void print_result(const SimResult& result) {
    const auto& b = result.breakdown;
    std::cout << std::fixed << std::setprecision(2)
              << "holding   " << b.holding << '\n'
              << "ordering  " << b.ordering << '\n'
              << "delivery  " << b.delivery << '\n'
              << "penalty   " << b.penalty << "  (backorder " << b.backorder_penalty
              << ", window " << b.window_penalty << ")\n"
              << "total     " << result.total_cost << '\n'
              << std::setprecision(4) << "fill rate " << result.fill_rate << "  ("
              << b.orders_filled_immediately << '/' << b.orders_received << " orders)\n";
}

int simulate(const CommonOptions& o, int r, int q, const std::string& dispatch,
             bool replicate) {
    auto [manifest, config] = resolve(o, RunMode::Simulate);
    const auto scenario = scenario_from_id(manifest.scenario_ids.front());
    std::vector<int> genes{r, q};
    for (int v : parse_list(dispatch)) genes.push_back(v);
    const auto policy = policy_from_genes(genes, scenario, config);

    ReplicationOptions options;
    options.record_trace = true;
    const auto result = run_replication(config, policy, scenario, manifest.base_seed,
                                        config.horizon_days, options);
    std::cout << "scenario " << scenario.id << ": " << describe(scenario) << '\n'
              << "policy r=" << r << " Q=" << q << ' ' << format_dispatch(policy.dispatch)
              << ", horizon " << config.horizon_days << " days, seed " << manifest.base_seed
              << "\n\n";
    print_result(result);

    auto trace = open_output(manifest.output_dir, "trace.csv");
    write_trace_csv(trace, result.trace);
    auto ledger = open_output(manifest.output_dir, "ledger.csv");
    write_ledger_csv(ledger, result);

    if (replicate) {
        const auto record = evaluate_policy(config, scenario, policy, manifest.precision,
                                            manifest.base_seed);
        std::cout << "\nreplicated until W/mean <= " << manifest.precision.delta << ": n="
                  << record.replicates << (record.precise ? "" : " (max_n reached)")
                  << std::setprecision(2) << " mean TC=" << record.total_cost
                  << std::setprecision(4) << " mean FR=" << record.fill_rate
                  << std::setprecision(2) << " F=" << record.fitness << '\n';
    }
    std::cout << "\nwrote " << (manifest.output_dir / "trace.csv").string() << " and "
              << (manifest.output_dir / "ledger.csv").string() << '\n';
    return 0;
}

int optimize(const CommonOptions& o) {
    auto [manifest, config] = resolve(o, RunMode::Optimize);
    const auto scenario = scenario_from_id(manifest.scenario_ids.front());
    std::cout << "optimizing scenario " << scenario.id << " (" << describe(scenario) << "), N="
              << manifest.ga.population_size << " G=" << manifest.ga.generations << std::endl;
    const auto result = run_ssga(scenario, config, manifest.ga, manifest.precision,
                                 scenario_seed(manifest.base_seed, scenario.id));
    const auto policy = policy_from_genes(result.best.chromosome.genes, scenario, config);
    const auto& best = result.best.record;
    std::cout << std::fixed << std::setprecision(2) << "best F=" << best.fitness
              << " TC=" << best.total_cost << std::setprecision(4) << " FR=" << best.fill_rate
              << " r=" << policy.reorder_point << " Q=" << policy.reorder_quantity << ' '
              << format_dispatch(policy.dispatch) << " (" << result.evaluations
              << " evaluations)\n";

    auto log = open_output(manifest.output_dir, "convergence.csv");
    write_convergence_csv(log, result.log);
    if (o.trace) {
        ReplicationOptions options;
        options.record_trace = true;
        const auto sim = run_replication(config, policy, scenario, manifest.base_seed,
                                         config.horizon_days, options);
        auto trace = open_output(manifest.output_dir, "trace.csv");
        write_trace_csv(trace, sim.trace);
    }
    std::cout << "wrote " << (manifest.output_dir / "convergence.csv").string() << '\n';
    return 0;
}

int study(const CommonOptions& o) {
    auto [manifest, config] = resolve(o, RunMode::Study);
    std::cout << "study over " << manifest.scenario_ids.size() << " scenario(s), N="
              << manifest.ga.population_size << " G=" << manifest.ga.generations
              << ", output " << manifest.output_dir.string() << std::endl;
    run_study(manifest, config, [](const ScenarioStudy& s) {
        const auto& best = s.best();
        std::cout << std::fixed << std::setprecision(1) << "scenario " << s.scenario.id
                  << ": runs=" << s.runs.size() << " F=" << s.fitness.mean << "+-"
                  << s.fitness.ci_half_width << " TC=" << s.total_cost.mean << "+-"
                  << s.total_cost.ci_half_width << std::setprecision(3)
                  << " FR=" << s.fill_rate.mean << " | best r=" << best.policy.reorder_point
                  << " Q=" << best.policy.reorder_quantity << ' '
                  << format_dispatch(best.policy.dispatch) << std::endl;
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Warehouse dispatch simulation and steady-state GA optimizer"};
    app.require_subcommand(1);

    CommonOptions sim_opts, opt_opts, study_opts;
    int r = 0, q = 0;
    std::string dispatch;
    bool replicate = false;
    auto* sim = app.add_subcommand("simulate", "Run one seeded replication of a fixed policy");
    add_common(sim, sim_opts);
    sim->add_option("--r", r, "Reorder point")->required();
    sim->add_option("--Q", q, "Reorder quantity")->required();
    sim->add_option("--dispatch", dispatch, "M or S values, comma separated per retailer")
        ->required();
    sim->add_flag("--replicate", replicate, "Also replicate until the precision target");

    auto* opt = app.add_subcommand("optimize", "Run one ssGA on one scenario");
    add_common(opt, opt_opts);

    auto* stu = app.add_subcommand("study", "Replicated ssGA over the selected scenarios");
    add_common(stu, study_opts);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sim) return simulate(sim_opts, r, q, dispatch, replicate);
        if (*opt) return optimize(opt_opts);
        if (*stu) return study(study_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
