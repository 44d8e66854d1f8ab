// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.
// Usage: acceptance [criterion ...]   (default: all nine)

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dispatchopt/config_io.hpp"
#include "dispatchopt/simulation.hpp"
#include "dispatchopt/ssga.hpp"
#include "dispatchopt/stats.hpp"
#include "dispatchopt/study.hpp"
#include "ga_fixtures.hpp"
#include "scripted_trace.hpp"

using namespace dispatchopt;
using namespace dispatchopt::testing;

namespace {

const std::filesystem::path kSourceDir = DISPATCHOPT_SOURCE_DIR;
const std::filesystem::path kBinaryDir = DISPATCHOPT_BINARY_DIR;

struct Outcome {
    bool pass = true;
    std::vector<std::string> failures;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (failures.size() < 5) failures.push_back(what);
        }
    }
};

bool close_rel(double actual, double expected, double tol) {
    return std::abs(actual - expected) <= tol * std::max(1.0, std::abs(expected));
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

// 1. Hand-scripted instance --------------------------------------------------
void scripted_oracle(Outcome& out) {
    const auto config = scripted_config();
    const auto result = run_replication(config, scripted_policy(), scenario_from_id(2), 1,
                                        config.horizon_days, scripted_options());
    const ExpectedLedger e;
    const auto& b = result.breakdown;
    const std::pair<const char*, std::pair<double, double>> rows[] = {
        {"holding", {b.holding, e.holding}},
        {"ordering", {b.ordering, e.ordering}},
        {"delivery", {b.delivery, e.delivery}},
        {"backorder_penalty", {b.backorder_penalty, e.backorder_penalty}},
        {"window_penalty", {b.window_penalty, e.window_penalty}},
        {"penalty", {b.penalty, e.penalty}},
        {"total", {result.total_cost, e.total}},
    };
    for (const auto& [name, values] : rows) {
        out.require(std::abs(values.first - values.second) <= 1e-9 * std::abs(values.second),
                    std::string(name) + " " + fmt(values.first) + " vs " + fmt(values.second));
    }
    out.require(b.orders_received == e.orders_received, "orders received");
    out.require(b.orders_filled_immediately == e.orders_filled_immediately, "orders filled");
    out.detail << "TC " << result.total_cost << " (expected " << e.total << ")";
}

// 2. Fuzzed invariants -------------------------------------------------------
NetworkConfig random_config(RandomStream& rng) {
    NetworkConfig config;
    config.transport.truck_capacity = static_cast<int>(rng.uniform_int(200, 800));
    const auto m = rng.uniform_int(1, 4);
    for (std::int64_t i = 0; i < m; ++i) {
        RetailerSpec r;
        r.order_quantity = static_cast<int>(rng.uniform_int(1, 20)) * 10;
        const bool silent = rng.uniform01() < 0.1;
        r.arrival_rate = silent ? 0.0 : rng.uniform(0.05, 1.5);
        config.retailers.push_back(r);
    }
    config.costs = {rng.uniform(0, 1000), rng.uniform(0, 500), rng.uniform(0, 10),
                    rng.uniform(0, 10)};
    auto range = [&rng](double lo, double hi) {
        const double a = rng.uniform(lo, hi);
        return UniformRange{a, rng.coin() ? a : rng.uniform(a, hi)};
    };
    config.transport.supplier_lead_time = range(0.0, 6.0);
    config.transport.direct_trip_time = range(0.5, 5.0);
    config.transport.leg_time = range(0.1, 3.0);
    config.transport.min_dispatch_gap = rng.uniform(0.25, 2.0);
    const double c1 = rng.uniform(0.0, 5.0);
    config.window = {c1, c1 + rng.uniform(0.5, 5.0)};
    config.horizon_days = rng.uniform(5.0, 150.0);
    config.reorder_at_start = rng.coin();
    config.search = {1, 600, 10, 1200, 1, 8};
    return validate_config(config);
}

void fuzz_invariants(Outcome& out) {
    RandomStream rng(20'251'016);
    ReplicationOptions options;
    options.record_shipments = true;
    options.record_orders = true;
    long trucks = 0;
    long orders = 0;
    constexpr int kCases = 1000;
    for (int c = 0; c < kCases; ++c) {
        const auto config = random_config(rng);
        const auto scenario = scenario_from_id(static_cast<int>(rng.uniform_int(1, 6)));
        const auto genes = random_chromosome(bounds_for_scenario(scenario, config), rng).genes;
        const auto policy = policy_from_genes(genes, scenario, config);
        const auto seed = rng.next_u64();
        const auto tag = "case " + std::to_string(c) + ": ";

        const auto result =
            run_replication(config, policy, scenario, seed, config.horizon_days, options);
        const auto& b = result.breakdown;
        const double parts = b.holding + b.ordering + b.delivery + b.penalty;
        out.require(std::abs(result.total_cost - parts) <= 1e-9 * std::max(1.0, std::abs(parts)),
                    tag + "cost identity");
        out.require(std::abs(b.penalty - b.backorder_penalty - b.window_penalty) <=
                        1e-9 * std::max(1.0, b.penalty),
                    tag + "penalty split");
        const auto& f = result.flows;
        out.require(f.initial_stock + f.received == f.on_hand_at_end + f.dispatched + f.queued_at_end,
                    tag + "conservation");
        out.require(result.fill_rate >= 0.0 && result.fill_rate <= 1.0, tag + "fill rate range");

        std::set<int> shipped;
        long shipped_items = 0;
        for (std::size_t k = 0; k < result.shipments.size(); ++k) {
            const auto& s = result.shipments[k];
            int load = 0;
            for (int id : s.order_ids) {
                out.require(shipped.insert(id).second, tag + "order shipped twice");
                load += result.orders[static_cast<std::size_t>(id)].quantity;
            }
            out.require(load == s.load && load <= config.transport.truck_capacity,
                        tag + "truck load");
            if (k > 0) {
                out.require(s.departure - result.shipments[k - 1].departure >=
                                config.transport.min_dispatch_gap - 1e-9,
                            tag + "dispatch gap");
            }
            shipped_items += load;
        }
        out.require(shipped_items == f.dispatched, tag + "dispatched items");
        trucks += b.trucks_dispatched;
        orders += b.orders_received;
    }
    out.detail << kCases << " cases, " << orders << " orders, " << trucks << " trucks";
}

// 3. Sequential stopping rule ------------------------------------------------
struct IndependentCi {
    double mean;
    double width;
};

IndependentCi reference_ci(const std::vector<double>& x, double confidence) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double s = std::sqrt(ss / (n - 1));
    const double t =
        boost::math::quantile(boost::math::students_t(n - 1), (1.0 + confidence) / 2.0);
    return {mean, 2.0 * t * s / std::sqrt(n)};
}

void precision_rule(Outcome& out) {
    const PrecisionPolicy policy{};
    const auto constant = run_until_precise([](std::uint64_t) { return 42.0; }, policy, 1);
    out.require(constant.n == 3 && constant.width == 0.0 && constant.precise,
                "constant evaluator stopped at n=" + std::to_string(constant.n));

    int runs = 0;
    int cap_hits = 0;
    std::vector<int> ns;
    const double cv_levels[] = {0.01, 0.03, 0.05, 0.08, 0.12};
    for (double cv : cv_levels) {
        for (std::uint64_t stream = 1; stream <= 20; ++stream) {
            RandomStream noise(stream, 77);
            const double mu = 1000.0 * static_cast<double>(stream);
            const auto s = run_until_precise(
                [&](std::uint64_t) { return noise.normal(mu, cv * mu); }, policy, stream);
            ++runs;
            out.require(s.n >= 3, "n < 3");
            if (!s.precise) {
                ++cap_hits;
                out.require(s.n == policy.max_n, "imprecise without reaching max_n");
                continue;
            }
            const auto ref = reference_ci(s.samples, policy.confidence);
            out.require(ref.width / std::abs(ref.mean) <= policy.delta,
                        "W/mu " + fmt(ref.width / ref.mean) + " above delta");
            out.require(close_rel(s.width, ref.width, 1e-9) && close_rel(s.mean, ref.mean, 1e-12),
                        "summary disagrees with recomputation");
            if (s.n > 3) {
                const std::vector<double> shorter(s.samples.begin(), s.samples.end() - 1);
                const auto prev = reference_ci(shorter, policy.confidence);
                out.require(prev.width / std::abs(prev.mean) > policy.delta,
                            "did not stop at the first precise n");
            }
            ns.push_back(s.n);
        }
    }
    std::sort(ns.begin(), ns.end());
    out.detail << runs << " synthetic runs, n from " << (ns.empty() ? 0 : ns.front()) << " to "
               << (ns.empty() ? 0 : ns.back()) << ", " << cap_hits << " capped; constant stops at n="
               << constant.n;
}

// 4. t quantile --------------------------------------------------------------
void t_quantiles(Outcome& out) {
    double worst = 0.0;
    for (double p : {0.9, 0.95, 0.975, 0.995}) {
        for (double df : {1.0, 2.0, 5.0, 10.0, 30.0, 120.0}) {
            const double ours = t_quantile(p, df);
            const double ref = boost::math::quantile(boost::math::students_t(df), p);
            const double err = std::abs(ours - ref);
            worst = std::max(worst, err);
            out.require(err <= 1e-6, "t(" + fmt(p) + ", " + fmt(df) + ") = " + fmt(ours, 12) +
                                         " vs " + fmt(ref, 12));
        }
    }
    out.detail << "24 points, max abs error " << fmt(worst, 3);
}

// 5. GA operators ------------------------------------------------------------
void ga_operators(Outcome& out) {
    const auto config = study_instance();
    RandomStream rng(555);

    long offspring = 0;
    for (int id = 1; id <= 6; ++id) {
        const auto bounds = bounds_for_scenario(scenario_from_id(id), config);
        auto pool = init_population(bounds, 50, rng);
        for (const auto& c : pool) out.require(within_bounds(c.genes, bounds), "init out of bounds");
        for (int i = 0; i < 5000; ++i) {
            const auto& a = pool[static_cast<std::size_t>(rng.uniform_int(0, 49))];
            const auto& b = pool[static_cast<std::size_t>(rng.uniform_int(0, 49))];
            auto child = crossover(a, b, bounds, 1.0, rng);
            for (std::size_t g = 0; g < bounds.size(); ++g) {
                if (bounds[g].kind == VariableKind::Threshold) {
                    out.require(child.genes[g] == a.genes[g] || child.genes[g] == b.genes[g],
                                "uniform crossover invented a threshold");
                } else {
                    const int lo = std::min(a.genes[g], b.genes[g]);
                    const int hi = std::max(a.genes[g], b.genes[g]);
                    out.require(child.genes[g] >= lo && child.genes[g] <= hi,
                                "linear crossover left [min, max]");
                }
            }
            mutate(child, 0.5, 25.0, bounds, rng);
            out.require(within_bounds(child.genes, bounds), "offspring out of bounds");
            for (std::size_t g = 0; g < bounds.size(); ++g) {
                if (bounds[g].kind == VariableKind::Threshold) {
                    out.require(child.genes[g] % bounds[g].step == 0, "threshold not a multiple");
                }
            }
            pool[static_cast<std::size_t>(rng.uniform_int(0, 49))] = child;
            ++offspring;
        }
    }

    // Convexity before clamping, on unconstrained bounds.
    const VariableBounds open{"x", VariableKind::ReorderPoint, -100000, 100000, 1};
    for (int i = 0; i < 10000; ++i) {
        const int v1 = static_cast<int>(rng.uniform_int(-5000, 5000));
        const int v2 = static_cast<int>(rng.uniform_int(-5000, 5000));
        const int c = linear_crossover(v1, v2, rng.uniform01(), open);
        out.require(c >= std::min(v1, v2) && c <= std::max(v1, v2), "convexity");
    }

    constexpr int n = 10;
    constexpr int trials = 10'000;
    std::vector<double> values;
    for (int i = 0; i < n; ++i) values.push_back(10.0 * (n - i));  // best member last
    const auto members = population_with_fitness(values);
    std::vector<int> wins(n, 0);
    RandomStream picker(2718);
    for (int t = 0; t < trials; ++t) ++wins[tournament_select(members, 3, picker)];
    double worst_z = 0.0;
    for (int i = 0; i < n; ++i) {
        const int rank = n - 1 - i;
        const double p = tournament_win_probability(rank, n);
        const double se = std::sqrt(p * (1 - p) / trials);
        const double diff = std::abs(double(wins[i]) / trials - p);
        if (se > 0) worst_z = std::max(worst_z, diff / se);
        out.require(se > 0 ? diff <= 3 * se : wins[i] == 0,
                    "member " + std::to_string(i) + " won " + std::to_string(wins[i]));
    }
    out.detail << offspring << " offspring checked; tournament max |z| = " << fmt(worst_z, 3)
               << " over " << trials << " trials";
}

// 6. Quadratic bowl ----------------------------------------------------------
void optimizer_sanity(Outcome& out) {
    const auto optimum = quadratic_grid_minimum();
    const GaParams table_settings{};
    int hits = 0;
    std::ostringstream found;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto result = run_ssga(rq_bounds(), table_settings, quadratic_fitness, seed);
        const auto& g = result.best.chromosome.genes;
        const bool hit = std::abs(g[0] - optimum[0]) <= 0.01 * optimum[0] &&
                         std::abs(g[1] - optimum[1]) <= 0.01 * optimum[1];
        hits += hit;
        found << (seed > 1 ? " " : "") << "(" << g[0] << "," << g[1] << ")";
    }
    out.require(hits >= 4, std::to_string(hits) + "/5 runs within 1%");
    out.detail << hits << "/5 runs within 1% of (" << optimum[0] << "," << optimum[1]
               << "): " << found.str();
}

// 7. Fixed policy on the study instance ---------------------------------------
void fixed_policy_band(Outcome& out) {
    constexpr double kReference = 157'486.5;
    const auto config = study_instance();
    const auto scenario = scenario_from_id(2);
    const auto policy = policy_from_genes({303, 261, 300}, scenario, config);
    const PrecisionPolicy precision{};
    std::vector<double> fill;
    const auto summary = run_until_precise(
        [&](std::uint64_t seed) {
            const auto r = run_replication(config, policy, scenario, seed);
            fill.push_back(r.fill_rate);
            return r.total_cost;
        },
        precision, 20240101);
    double fr = 0.0;
    for (double v : fill) fr += v;
    fr /= static_cast<double>(fill.size());
    const double rel = summary.mean / kReference - 1.0;
    out.require(summary.precise, "precision not reached");
    out.require(std::abs(rel) <= 0.25, "TC off by " + fmt(100 * rel, 3) + "%");
    out.detail << "mean TC " << fmt(summary.mean, 8) << " (" << (rel >= 0 ? "+" : "")
               << fmt(100 * rel, 3) << "% vs " << kReference << "), n=" << summary.n
               << ", W/mu=" << fmt(summary.relative_precision(), 3) << ", FR " << fmt(fr, 3);
}

// 8. Full study --------------------------------------------------------------
void full_study(Outcome& out) {
    auto loaded = load_manifest(kSourceDir / "configs" / "study_instance.json");
    loaded.manifest.output_dir = kBinaryDir / "acceptance_study";
    std::filesystem::remove_all(loaded.manifest.output_dir);
    const auto report = run_study(loaded.manifest, loaded.config, [](const ScenarioStudy& s) {
        std::cerr << "  scenario " << s.scenario.id << ": " << s.runs.size()
                  << " GA runs, mean TC " << s.total_cost.mean << ", mean FR "
                  << s.fill_rate.mean << "\n";
    });

    std::vector<double> tc(7, 0.0), fr(7, 0.0), half(7, 0.0);
    for (const auto& s : report.scenarios) {
        tc[s.scenario.id] = s.total_cost.mean;
        half[s.scenario.id] = s.total_cost.ci_half_width;
        fr[s.scenario.id] = s.fill_rate.mean;
    }
    out.require(report.scenarios.size() == 6, "expected six scenarios");

    int lowest = 1;
    for (int id = 2; id <= 6; ++id) {
        if (tc[id] < tc[lowest]) lowest = id;
    }
    out.require(lowest == 2, "(a) lowest mean TC is scenario " + std::to_string(lowest));
    for (int fifo : {2, 5}) {
        for (int other : {3, 6, 1, 4}) {
            out.require(tc[fifo] < tc[other], "(b) scenario " + std::to_string(fifo) +
                                                  " does not beat " + std::to_string(other));
        }
    }
    for (int id = 1; id <= 6; ++id) {
        out.require(fr[id] >= 0.70 && fr[id] <= 0.85,
                    "(c) scenario " + std::to_string(id) + " FR " + fmt(fr[id], 4));
    }
    for (int id = 1; id <= 6; ++id) {
        out.detail << (id > 1 ? "; " : "") << "s" << id << " TC " << fmt(tc[id], 7) << "±"
                   << fmt(half[id], 4) << " FR " << fmt(fr[id], 3);
    }
    const bool overlap = std::abs(tc[2] - tc[5]) <= half[2] + half[5];
    out.detail << "; s2/s5 CIs " << (overlap ? "overlap" : "disjoint") << " (either allowed)";
}

// 9. Convergence -------------------------------------------------------------
void convergence(Outcome& out) {
    const auto config = study_instance();
    const auto scenario = scenario_from_id(2);
    const GaParams table_settings{};
    const PrecisionPolicy precision{};
    int converged = 0;
    std::ostringstream ratios;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto result = run_ssga(scenario, config, table_settings, precision, seed);
        const auto& log = result.log;
        out.require(log.size() == 1001, "log length");
        for (std::size_t g = 1; g < log.size(); ++g) {
            out.require(log[g].best_fitness <= log[g - 1].best_fitness,
                        "best F rose at generation " + std::to_string(g));
        }
        const double ratio = log.back().spread / log.front().spread;
        converged += ratio < 0.10;
        ratios << (seed > 1 ? " " : "") << fmt(ratio, 3);
    }
    out.require(converged >= 4, std::to_string(converged) + "/5 runs below 10%");
    out.detail << "best F monotone in 5 runs; spread(1000)/spread(0): " << ratios.str() << " -> "
               << converged << "/5 below 0.10";
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "scripted instance ledger matches the hand-computed table", scripted_oracle},
        {2, "cost identity and conservation on 1000 fuzz cases", fuzz_invariants},
        {3, "sequential replication stops exactly at the precision target", precision_rule},
        {4, "t quantile agrees with an independent oracle to 1e-6", t_quantiles},
        {5, "GA operators: bounds, multiples, convexity, tournament frequencies", ga_operators},
        {6, "ssGA reaches the quadratic optimum in >= 4 of 5 runs", optimizer_sanity},
        {7, "scenario-2 reference policy within 25% of the reported TC", fixed_policy_band},
        {8, "full study ranks and fill rates", full_study},
        {9, "best F monotone, spread shrinks below 10% in >= 4 of 5 runs", convergence},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        Outcome outcome;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(outcome);
        } catch (const std::exception& e) {
            outcome.require(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !outcome.pass;
        std::cout << "criterion " << c.id << ": " << (outcome.pass ? "PASS" : "FAIL") << " - "
                  << c.name << " [" << fmt(secs, 3) << "s] " << outcome.detail.str();
        for (const auto& f : outcome.failures) std::cout << " | " << f;
        std::cout << std::endl;
    }
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
