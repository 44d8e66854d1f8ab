#include "dispatchopt/domain.hpp"

#include <algorithm>
#include <sstream>

namespace dispatchopt {

int NetworkConfig::smallest_order() const {
    int smallest = 0;
    for (const auto& r : retailers) {
        if (smallest == 0 || r.order_quantity < smallest) smallest = r.order_quantity;
    }
    return smallest;
}

NetworkConfig study_instance() {
    NetworkConfig config;
    config.retailers = {
        {1, 50, 1.0 / 3.0},
        {2, 100, 1.0 / 3.0},
        {3, 150, 1.0 / 3.0},
    };
    return config;
}

Scenario make_scenario(int id, DispatchKind kind, QueueTopology topology, PriorityRule priority) {
    if (topology == QueueTopology::MultiQueue && priority == PriorityRule::SOF) {
        throw std::invalid_argument("SOF priority requires a single dispatch queue");
    }
    return Scenario{id, kind, topology, priority};
}

Scenario scenario_from_id(int id) {
    using enum DispatchKind;
    using enum QueueTopology;
    using enum PriorityRule;
    switch (id) {
    case 1: return make_scenario(1, QuantityBased, MultiQueue, FIFO);
    case 2: return make_scenario(2, QuantityBased, SingleQueue, FIFO);
    case 3: return make_scenario(3, QuantityBased, SingleQueue, SOF);
    case 4: return make_scenario(4, ScheduleBased, MultiQueue, FIFO);
    case 5: return make_scenario(5, ScheduleBased, SingleQueue, FIFO);
    case 6: return make_scenario(6, ScheduleBased, SingleQueue, SOF);
    default: break;
    }
    throw std::invalid_argument("unknown scenario " + std::to_string(id) + " (expected 1..6)");
}

std::string describe(const Scenario& scenario) {
    std::string text = scenario.quantity_based() ? "Quantity-based" : "Schedule-based";
    if (!scenario.single_queue()) return text + " multi-queue dispatch";
    text += " single-queue dispatch with ";
    text += scenario.priority == PriorityRule::FIFO ? "FIFO" : "SOF";
    return text + " priority";
}

bool VariableBounds::on_grid(int value) const {
    return value >= lower && value <= upper && (value - lower) % step == 0;
}

int VariableBounds::clamp(int value) const {
    if (value <= lower) return lower;
    const int top = grid_max();
    if (value >= top) return top;
    return lower + ((value - lower) / step) * step;
}

DecisionBounds bounds_for_scenario(const Scenario& scenario, const NetworkConfig& config) {
    const auto& search = config.search;
    DecisionBounds bounds;
    bounds.push_back({"r", VariableKind::ReorderPoint, search.reorder_point_lo,
                      search.reorder_point_hi, 1});
    bounds.push_back({"Q", VariableKind::ReorderQuantity, search.reorder_quantity_lo,
                      search.reorder_quantity_hi, 1});

    const int capacity = config.transport.truck_capacity;
    if (scenario.single_queue()) {
        if (scenario.quantity_based()) {
            const int q_min = config.smallest_order();
            bounds.push_back({"M", VariableKind::Threshold, q_min, capacity, q_min});
        } else {
            bounds.push_back(
                {"S", VariableKind::Interval, search.interval_lo, search.interval_hi, 1});
        }
        return bounds;
    }

    for (const auto& retailer : config.retailers) {
        const auto suffix = "_" + std::to_string(retailer.id);
        if (scenario.quantity_based()) {
            bounds.push_back({"M" + suffix, VariableKind::Threshold, retailer.order_quantity,
                              capacity, retailer.order_quantity});
        } else {
            bounds.push_back({"S" + suffix, VariableKind::Interval, search.interval_lo,
                              search.interval_hi, 1});
        }
    }
    return bounds;
}

std::string format_dispatch(const DispatchParams& dispatch) {
    std::ostringstream out;
    auto write = [&out](const char* symbol, const std::vector<int>& values) {
        if (values.size() == 1) {
            out << symbol << '=' << values.front();
            return;
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i > 0) out << ';';
            out << symbol << '_' << (i + 1) << '=' << values[i];
        }
    };
    if (const auto* m = std::get_if<QuantityThresholds>(&dispatch)) {
        write("M", m->values);
    } else {
        write("S", std::get<ScheduleIntervals>(dispatch).days);
    }
    return out.str();
}

namespace {

std::size_t dispatch_arity(const Scenario& scenario, const NetworkConfig& config) {
    return scenario.single_queue() ? 1 : config.retailers.size();
}

}  // namespace

PolicyParams policy_from_genes(const std::vector<int>& genes, const Scenario& scenario,
                               const NetworkConfig& config) {
    const std::size_t expected = 2 + dispatch_arity(scenario, config);
    if (genes.size() != expected) {
        throw DecodeError("length mismatch: scenario " + std::to_string(scenario.id) +
                          " needs " + std::to_string(expected) + " genes, got " +
                          std::to_string(genes.size()));
    }
    if (genes[0] <= 0) throw DecodeError("reorder point must be positive");
    if (genes[1] <= 0) throw DecodeError("reorder quantity must be positive");

    PolicyParams policy;
    policy.reorder_point = genes[0];
    policy.reorder_quantity = genes[1];
    std::vector<int> tail(genes.begin() + 2, genes.end());

    if (scenario.quantity_based()) {
        const int capacity = config.transport.truck_capacity;
        for (std::size_t i = 0; i < tail.size(); ++i) {
            const int q = scenario.single_queue() ? config.smallest_order()
                                                  : config.retailers[i].order_quantity;
            if (tail[i] <= 0 || tail[i] % q != 0) {
                throw DecodeError("threshold " + std::to_string(tail[i]) +
                                  " is not a positive multiple of " + std::to_string(q));
            }
            if (tail[i] > capacity) {
                throw DecodeError("threshold " + std::to_string(tail[i]) +
                                  " exceeds truck capacity");
            }
        }
        policy.dispatch = QuantityThresholds{std::move(tail)};
    } else {
        for (int s : tail) {
            if (s < 1) throw DecodeError("dispatch interval must be at least one day");
        }
        policy.dispatch = ScheduleIntervals{std::move(tail)};
    }
    return policy;
}

PolicyParams decode_chromosome(const Chromosome& chromosome, const Scenario& scenario,
                               const NetworkConfig& config) {
    auto policy = policy_from_genes(chromosome.genes, scenario, config);
    const auto bounds = bounds_for_scenario(scenario, config);
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (!bounds[i].on_grid(chromosome.genes[i])) {
            throw DecodeError("out-of-bounds gene " + bounds[i].name + "=" +
                              std::to_string(chromosome.genes[i]));
        }
    }
    return policy;
}

Chromosome encode_policy(const PolicyParams& policy) {
    Chromosome chromosome;
    chromosome.genes = {policy.reorder_point, policy.reorder_quantity};
    const auto& tail = std::holds_alternative<QuantityThresholds>(policy.dispatch)
                           ? std::get<QuantityThresholds>(policy.dispatch).values
                           : std::get<ScheduleIntervals>(policy.dispatch).days;
    chromosome.genes.insert(chromosome.genes.end(), tail.begin(), tail.end());
    return chromosome;
}

bool within_bounds(const std::vector<int>& genes, const DecisionBounds& bounds) {
    if (genes.size() != bounds.size()) return false;
    for (std::size_t i = 0; i < genes.size(); ++i) {
        if (!bounds[i].on_grid(genes[i])) return false;
    }
    return true;
}

ConfigError::ConfigError(std::vector<ConfigViolation> violations)
    : std::runtime_error([&] {
          std::string what = "invalid configuration:";
          for (const auto& v : violations) what += "\n  " + v.field + ": " + v.message;
          return what;
      }()),
      violations_(std::move(violations)) {}

std::vector<ConfigViolation> check_config(const NetworkConfig& config) {
    std::vector<ConfigViolation> out;
    auto fail = [&out](std::string field, std::string message) {
        out.push_back({std::move(field), std::move(message)});
    };

    const auto& transport = config.transport;
    if (config.retailers.empty()) fail("retailers", "at least one retailer required");
    for (std::size_t i = 0; i < config.retailers.size(); ++i) {
        const auto& r = config.retailers[i];
        const auto q_name = "q_" + std::to_string(i + 1);
        if (r.order_quantity <= 0) fail(q_name, "order quantity must be positive");
        if (r.order_quantity > transport.truck_capacity) {
            fail(q_name, "order exceeds truck capacity (" + std::to_string(r.order_quantity) +
                             " > " + std::to_string(transport.truck_capacity) + ")");
        }
        if (!(r.arrival_rate >= 0.0)) {
            fail("lambda_" + std::to_string(i + 1), "arrival rate must be non-negative");
        }
    }

    const auto& c = config.costs;
    if (!(c.delivery_cost >= 0)) fail("costs.delivery_cost", "must be >= 0");
    if (!(c.ordering_cost >= 0)) fail("costs.ordering_cost", "must be >= 0");
    if (!(c.holding_rate >= 0)) fail("costs.holding_rate", "must be >= 0");
    if (!(c.penalty_rate >= 0)) fail("costs.penalty_rate", "must be >= 0");

    if (!(config.window.earliest >= 0)) fail("window.earliest", "C1 must be >= 0");
    if (!(config.window.earliest < config.window.latest)) {
        fail("window", "C1 < C2 violated");
    }

    if (transport.truck_capacity <= 0) fail("transport.truck_capacity", "must be positive");
    auto check_range = [&fail](const std::string& field, const UniformRange& range) {
        if (!(range.lo >= 0)) fail(field, "lower end must be >= 0");
        if (!(range.lo <= range.hi)) fail(field, "lo <= hi violated");
    };
    check_range("transport.supplier_lead_time", transport.supplier_lead_time);
    check_range("transport.direct_trip_time", transport.direct_trip_time);
    check_range("transport.leg_time", transport.leg_time);
    if (!(transport.min_dispatch_gap > 0)) {
        fail("transport.min_dispatch_gap", "must be positive");
    }

    if (!(config.horizon_days > 0)) fail("horizon_days", "must be positive");

    const auto& s = config.search;
    if (s.reorder_point_lo > s.reorder_point_hi) fail("search.r", "lower > upper");
    if (s.reorder_quantity_lo <= 0 || s.reorder_quantity_lo > s.reorder_quantity_hi) {
        fail("search.Q", "bounds must satisfy 0 < lower <= upper");
    }
    if (s.interval_lo < 1 || s.interval_lo > s.interval_hi) {
        fail("search.S", "bounds must satisfy 1 <= lower <= upper");
    }
    return out;
}

NetworkConfig validate_config(NetworkConfig config) {
    auto violations = check_config(config);
    if (!violations.empty()) throw ConfigError(std::move(violations));
    for (std::size_t i = 0; i < config.retailers.size(); ++i) {
        config.retailers[i].id = static_cast<int>(i + 1);
    }
    return config;
}

}  // namespace dispatchopt
