#include "dispatchopt/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dispatchopt {

using nlohmann::json;

namespace {

// Reads an optional member into `out`; the path is used in error messages.
template <typename T>
void read(const json& object, const char* key, T& out, const std::string& path) {
    const auto it = object.find(key);
    if (it == object.end() || it->is_null()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception& e) {
        throw ManifestError(path + "." + key + ": " + e.what());
    }
}

const json& object_at(const json& root, const char* key, const json& fallback) {
    const auto it = root.find(key);
    if (it == root.end() || it->is_null()) return fallback;
    if (!it->is_object()) throw ManifestError(std::string(key) + ": expected an object");
    return *it;
}

void read_range(const json& object, const char* key, UniformRange& out, const std::string& path) {
    const auto it = object.find(key);
    if (it == object.end() || it->is_null()) return;
    const auto field = path + "." + key;
    if (it->is_array() && it->size() == 2 && (*it)[0].is_number() && (*it)[1].is_number()) {
        out = {(*it)[0].get<double>(), (*it)[1].get<double>()};
    } else if (it->is_object()) {
        read(*it, "lo", out.lo, field);
        read(*it, "hi", out.hi, field);
    } else {
        throw ManifestError(field + ": expected [lo, hi] or {\"lo\": .., \"hi\": ..}");
    }
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

void read_precision(const json& object, PrecisionPolicy& out, const std::string& path) {
    read(object, "confidence", out.confidence, path);
    read(object, "delta", out.delta, path);
    read(object, "max_n", out.max_n, path);
}

}  // namespace

LoadedRun parse_manifest(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::istringstream lines(text);
        std::string context;
        for (std::size_t i = 0; i < line && std::getline(lines, context); ++i) {
        }
        throw ManifestError("parse error at line " + std::to_string(line) + ", column " +
                            std::to_string(column) + ": " + context);
    }
    if (!root.is_object()) throw ManifestError("top level must be a JSON object");

    LoadedRun run;
    NetworkConfig& config = run.config;
    config = study_instance();
    const json empty = json::object();

    if (const auto it = root.find("retailers"); it != root.end()) {
        if (!it->is_array()) throw ManifestError("retailers: expected an array");
        config.retailers.clear();
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& entry = (*it)[i];
            const auto path = "retailers[" + std::to_string(i) + "]";
            if (!entry.is_object()) throw ManifestError(path + ": expected an object");
            RetailerSpec retailer{static_cast<int>(i + 1), 0, 0.0};
            read(entry, "order_quantity", retailer.order_quantity, path);
            read(entry, "arrival_rate", retailer.arrival_rate, path);
            if (!entry.contains("order_quantity")) {
                throw ManifestError(path + ".order_quantity: required");
            }
            config.retailers.push_back(retailer);
        }
    }

    const auto& costs = object_at(root, "costs", empty);
    read(costs, "delivery_cost", config.costs.delivery_cost, "costs");
    read(costs, "ordering_cost", config.costs.ordering_cost, "costs");
    read(costs, "holding_rate", config.costs.holding_rate, "costs");
    read(costs, "penalty_rate", config.costs.penalty_rate, "costs");

    const auto& transport = object_at(root, "transport", empty);
    read(transport, "truck_capacity", config.transport.truck_capacity, "transport");
    read_range(transport, "supplier_lead_time", config.transport.supplier_lead_time, "transport");
    read_range(transport, "direct_trip_time", config.transport.direct_trip_time, "transport");
    read_range(transport, "leg_time", config.transport.leg_time, "transport");
    read(transport, "min_dispatch_gap", config.transport.min_dispatch_gap, "transport");

    const auto& window = object_at(root, "window", empty);
    read(window, "earliest", config.window.earliest, "window");
    read(window, "latest", config.window.latest, "window");

    read(root, "horizon_days", config.horizon_days, "");
    read(root, "reorder_at_start", config.reorder_at_start, "");

    const auto& search = object_at(root, "search", empty);
    read(search, "reorder_point_lo", config.search.reorder_point_lo, "search");
    read(search, "reorder_point_hi", config.search.reorder_point_hi, "search");
    read(search, "reorder_quantity_lo", config.search.reorder_quantity_lo, "search");
    read(search, "reorder_quantity_hi", config.search.reorder_quantity_hi, "search");
    read(search, "interval_lo", config.search.interval_lo, "search");
    read(search, "interval_hi", config.search.interval_hi, "search");

    RunManifest& manifest = run.manifest;
    const auto& scenario = object_at(root, "scenario", empty);
    if (scenario.contains("id") && scenario.contains("ids")) {
        throw ManifestError("scenario: give either id or ids, not both");
    }
    if (scenario.contains("id")) {
        int id = 0;
        read(scenario, "id", id, "scenario");
        manifest.scenario_ids = {id};
    }
    read(scenario, "ids", manifest.scenario_ids, "scenario");
    for (int id : manifest.scenario_ids) scenario_from_id(id);

    const auto& ga = object_at(root, "ga", empty);
    read(ga, "population_size", manifest.ga.population_size, "ga");
    read(ga, "generations", manifest.ga.generations, "ga");
    read(ga, "crossover_probability", manifest.ga.crossover_probability, "ga");
    read(ga, "mutation_probability", manifest.ga.mutation_probability, "ga");
    read(ga, "tournament_size", manifest.ga.tournament_size, "ga");
    read(ga, "gaussian_sigma", manifest.ga.gaussian_sigma, "ga");
    try {
        validate_ga_params(manifest.ga);
    } catch (const std::invalid_argument& e) {
        throw ManifestError(std::string("ga: ") + e.what());
    }

    const auto& stats = object_at(root, "stats", empty);
    read_precision(stats, manifest.precision, "stats");
    manifest.ga_precision = manifest.precision;
    read_precision(object_at(stats, "ga_replicates", empty), manifest.ga_precision,
                   "stats.ga_replicates");
    try {
        validate_precision_policy(manifest.precision);
        validate_precision_policy(manifest.ga_precision);
    } catch (const std::invalid_argument& e) {
        throw ManifestError(std::string("stats: ") + e.what());
    }

    read(root, "seed", manifest.base_seed, "");
    std::string output_dir;
    read(root, "output_dir", output_dir, "");
    if (!output_dir.empty()) manifest.output_dir = output_dir;

    config = validate_config(std::move(config));
    return run;
}

LoadedRun load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    auto run = parse_manifest(buffer.str());
    run.manifest.config_path = path;
    return run;
}

std::string study_manifest_json() {
    const auto config = study_instance();
    const RunManifest manifest;
    json retailers = json::array();
    for (const auto& r : config.retailers) {
        retailers.push_back({{"order_quantity", r.order_quantity},
                             {"arrival_rate", r.arrival_rate}});
    }
    const auto& t = config.transport;
    json doc = {
        {"retailers", retailers},
        {"costs",
         {{"delivery_cost", config.costs.delivery_cost},
          {"ordering_cost", config.costs.ordering_cost},
          {"holding_rate", config.costs.holding_rate},
          {"penalty_rate", config.costs.penalty_rate}}},
        {"transport",
         {{"truck_capacity", t.truck_capacity},
          {"supplier_lead_time", {t.supplier_lead_time.lo, t.supplier_lead_time.hi}},
          {"direct_trip_time", {t.direct_trip_time.lo, t.direct_trip_time.hi}},
          {"leg_time", {t.leg_time.lo, t.leg_time.hi}},
          {"min_dispatch_gap", t.min_dispatch_gap}}},
        {"window", {{"earliest", config.window.earliest}, {"latest", config.window.latest}}},
        {"horizon_days", config.horizon_days},
        {"scenario", {{"ids", manifest.scenario_ids}}},
        {"ga",
         {{"population_size", manifest.ga.population_size},
          {"generations", manifest.ga.generations},
          {"crossover_probability", manifest.ga.crossover_probability},
          {"mutation_probability", manifest.ga.mutation_probability},
          {"tournament_size", manifest.ga.tournament_size},
          {"gaussian_sigma", manifest.ga.gaussian_sigma}}},
        {"stats",
         {{"confidence", manifest.precision.confidence},
          {"delta", manifest.precision.delta},
          {"max_n", manifest.precision.max_n}}},
    };
    return doc.dump(2) + "\n";
}

void apply_fast_profile(RunManifest& manifest) {
    manifest.ga.population_size = 20;
    manifest.ga.generations = 100;
    manifest.precision.max_n = 10;
    manifest.ga_precision.max_n = 10;
}

}  // namespace dispatchopt
