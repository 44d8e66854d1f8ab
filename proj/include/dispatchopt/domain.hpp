#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dispatchopt {

/// A retailer that places fixed-size orders at the warehouse.
/// Interarrival times are exponential with mean 1 / arrival_rate.
/// A rate of zero marks a retailer that never orders.
struct RetailerSpec {
    int id = 0;
    int order_quantity = 0;
    double arrival_rate = 0.0;
};

struct CostParams {
    double delivery_cost = 500.0;  // per truck trip
    double ordering_cost = 200.0;  // per replenishment order
    double holding_rate = 5.0;     // per item per day on hand
    double penalty_rate = 5.0;     // per item per day late, early or backordered
};

/// Delivery must land in [earliest, latest] days after the order was placed.
struct DeliveryWindow {
    double earliest = 3.0;
    double latest = 6.0;

    double width() const { return latest - earliest; }
};

struct UniformRange {
    double lo = 0.0;
    double hi = 0.0;
};

struct TransportSpec {
    int truck_capacity = 500;
    UniformRange supplier_lead_time{2.0, 4.0};
    UniformRange direct_trip_time{2.0, 4.0};  // single-destination truck
    UniformRange leg_time{1.0, 2.0};          // each leg of a multi-stop truck
    double min_dispatch_gap = 1.0;            // days between truck departures
};

/// Search ranges for the non-threshold decision variables. Threshold ranges
/// derive from order sizes and truck capacity.
struct SearchRanges {
    int reorder_point_lo = 50;
    int reorder_point_hi = 300;
    int reorder_quantity_lo = 200;
    int reorder_quantity_hi = 1000;
    int interval_lo = 1;
    int interval_hi = 6;
};

struct NetworkConfig {
    std::vector<RetailerSpec> retailers;
    CostParams costs;
    TransportSpec transport;
    DeliveryWindow window;
    double horizon_days = 100.0;
    SearchRanges search;
    // When set, the reorder rule is also evaluated at t = 0 (position = r triggers it).
    bool reorder_at_start = true;

    int retailer_count() const { return static_cast<int>(retailers.size()); }
    int smallest_order() const;
};

/// Instance used in the numerical study: three retailers, q = 50/100/150,
/// combined arrival rate one order per day.
NetworkConfig study_instance();

enum class DispatchKind { QuantityBased, ScheduleBased };
enum class QueueTopology { SingleQueue, MultiQueue };
enum class PriorityRule { FIFO, SOF };

struct Scenario {
    int id = 0;
    DispatchKind dispatch_kind = DispatchKind::QuantityBased;
    QueueTopology topology = QueueTopology::SingleQueue;
    PriorityRule priority = PriorityRule::FIFO;

    bool single_queue() const { return topology == QueueTopology::SingleQueue; }
    bool quantity_based() const { return dispatch_kind == DispatchKind::QuantityBased; }
};

/// One of the six studied dispatch designs:
///   1 quantity/multi-queue, 2 quantity/single/FIFO, 3 quantity/single/SOF,
///   4 schedule/multi-queue, 5 schedule/single/FIFO, 6 schedule/single/SOF.
/// Throws std::invalid_argument("unknown scenario ...") outside 1..6.
Scenario scenario_from_id(int id);

/// Builds a scenario from its parts; SOF with a multi-queue topology is rejected.
Scenario make_scenario(int id, DispatchKind kind, QueueTopology topology, PriorityRule priority);

std::string describe(const Scenario& scenario);

enum class VariableKind { ReorderPoint, ReorderQuantity, Threshold, Interval };

struct VariableBounds {
    std::string name;
    VariableKind kind = VariableKind::ReorderPoint;
    int lower = 0;
    int upper = 0;
    int step = 1;

    /// Largest grid point lower + k*step that does not exceed upper.
    int grid_max() const { return lower + ((upper - lower) / step) * step; }
    int grid_size() const { return (upper - lower) / step + 1; }
    bool on_grid(int value) const;
    /// Brings a value back onto the grid: out-of-range values go to the nearest
    /// extreme, in-range values snap down to a grid point.
    int clamp(int value) const;
};

using DecisionBounds = std::vector<VariableBounds>;

DecisionBounds bounds_for_scenario(const Scenario& scenario, const NetworkConfig& config);

struct QuantityThresholds {
    std::vector<int> values;  // M (one entry) or M_1..M_m
    bool operator==(const QuantityThresholds&) const = default;
};

struct ScheduleIntervals {
    std::vector<int> days;  // S (one entry) or S_1..S_m
    bool operator==(const ScheduleIntervals&) const = default;
};

using DispatchParams = std::variant<QuantityThresholds, ScheduleIntervals>;

struct PolicyParams {
    int reorder_point = 0;
    int reorder_quantity = 0;
    DispatchParams dispatch;

    bool operator==(const PolicyParams&) const = default;
};

/// "M=300" or "S_1=3;S_2=3;S_3=3".
std::string format_dispatch(const DispatchParams& dispatch);

struct Chromosome {
    std::vector<int> genes;
    std::optional<double> fitness;
};

class DecodeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Maps genes (r, Q, dispatch variables by retailer index) to a policy and checks
/// that the result is structurally usable by the simulator for this scenario:
/// arity, positive r and Q, thresholds that are positive multiples of their
/// order size and fit a truck, intervals of at least one day. Search bounds are
/// not enforced, so hand-picked policies outside the GA ranges still decode.
PolicyParams policy_from_genes(const std::vector<int>& genes, const Scenario& scenario,
                               const NetworkConfig& config);

/// policy_from_genes plus a check that every gene lies on its search grid.
PolicyParams decode_chromosome(const Chromosome& chromosome, const Scenario& scenario,
                               const NetworkConfig& config);

Chromosome encode_policy(const PolicyParams& policy);

bool within_bounds(const std::vector<int>& genes, const DecisionBounds& bounds);

struct ConfigViolation {
    std::string field;
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigViolation> violations);
    const std::vector<ConfigViolation>& violations() const { return violations_; }

private:
    std::vector<ConfigViolation> violations_;
};

/// Every invariant the instance breaks, with a field path; empty when valid.
std::vector<ConfigViolation> check_config(const NetworkConfig& config);

/// Returns the config with retailer ids normalized to their index, or throws
/// ConfigError listing every violation.
NetworkConfig validate_config(NetworkConfig config);

}  // namespace dispatchopt
