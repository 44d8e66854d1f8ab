#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dispatchopt/domain.hpp"
#include "dispatchopt/random.hpp"

namespace dispatchopt {

struct Order {
    int id = 0;
    int retailer = 0;  // zero-based retailer index
    int quantity = 0;
    double placement_time = 0.0;
    std::optional<double> fulfillment_time;
    std::optional<double> delivery_time;
};

struct CostLedger {
    double holding = 0.0;
    double ordering = 0.0;
    double delivery = 0.0;
    double penalty = 0.0;
    // Split of `penalty`; the two always sum to it.
    double backorder_penalty = 0.0;
    double window_penalty = 0.0;

    long orders_received = 0;
    long orders_filled_immediately = 0;
    long replenishment_orders = 0;
    long trucks_dispatched = 0;

    double total() const { return holding + ordering + delivery + penalty; }
};

struct TracePoint {
    double time = 0.0;
    int on_hand = 0;
    int inventory_position = 0;
};

struct Shipment {
    double departure = 0.0;
    int queue = 0;
    std::vector<int> order_ids;  // loading order
    int load = 0;
};

/// Item bookkeeping at the end of a run; initial_stock + received equals
/// on_hand_at_end + dispatched + queued_at_end.
struct InventoryFlows {
    long initial_stock = 0;
    long received = 0;
    long dispatched = 0;
    long queued_at_end = 0;
    long on_hand_at_end = 0;
    long on_order_at_end = 0;
    long backordered_at_end = 0;
};

struct SimResult {
    double total_cost = 0.0;
    double fill_rate = 1.0;
    CostLedger breakdown;
    InventoryFlows flows;
    std::vector<TracePoint> trace;       // only with ReplicationOptions::record_trace
    std::vector<Shipment> shipments;     // only with ReplicationOptions::record_shipments
    std::vector<Order> orders;           // only with ReplicationOptions::record_orders
};

struct ScriptedArrival {
    double time = 0.0;
    int retailer = 0;  // zero-based
};

struct ReplicationOptions {
    bool record_trace = false;
    bool record_shipments = false;
    bool record_orders = false;
    /// Replaces the exponential arrival processes with a fixed arrival list.
    std::optional<std::vector<ScriptedArrival>> scripted_arrivals;
};

struct WarehouseState {
    double clock = 0.0;
    int on_hand = 0;
    int on_order = 0;
    int backordered = 0;
    std::deque<int> backorders;                 // order ids, FIFO by placement
    std::vector<std::deque<int>> dispatch_queues;
    std::vector<int> queue_totals;
    std::vector<bool> queue_due;                // schedule-based: a tick found orders waiting
    std::optional<double> last_dispatch_time;
    std::vector<Order> orders;                  // every order seen, indexed by id

    WarehouseState() = default;
    WarehouseState(int initial_stock, std::size_t queue_count);

    int inventory_position() const { return on_hand + on_order - backordered; }
    std::size_t queue_for(const Order& order) const {
        return dispatch_queues.size() == 1 ? 0 : static_cast<std::size_t>(order.retailer);
    }
    /// Registers a new order stamped with the current clock and returns its id.
    int place_order(int retailer, int quantity);
    /// Appends a fulfilled order to its dispatch queue.
    void enqueue_for_dispatch(int order_id);
};

enum class FillOutcome { FilledNow, Backordered };

/// Whole-order rule: filled from stock when on_hand covers it, otherwise queued
/// as a backorder. Filled orders move straight into their dispatch queue.
FillOutcome fulfill_or_backorder(WarehouseState& state, CostLedger& ledger, int order_id);

/// Queues that currently want a truck: quantity-based when the queued total
/// reaches its threshold, schedule-based when a tick marked it due.
std::vector<std::size_t> ready_queues(const WarehouseState& state, const PolicyParams& policy);

/// When a dispatch should fire: the current clock when a queue is ready and the
/// truck is free, the next truck-eligible time when a queue is ready but the
/// truck left less than min_gap ago, nothing when no queue is ready.
std::optional<double> maybe_trigger_dispatch(const WarehouseState& state,
                                             const PolicyParams& policy, double min_gap);

/// Among ready queues, the one whose head order was placed first.
std::size_t select_dispatch_queue(const WarehouseState& state,
                                  const std::vector<std::size_t>& ready);

/// Loads whole orders from the queue head while they fit, stopping at the first
/// order that does not. SOF re-sorts the queue by (quantity, placement) first.
/// Loaded ids are removed from the queue and returned in loading order.
std::vector<int> build_truckload(std::deque<int>& queue, const std::vector<Order>& orders,
                                 PriorityRule priority, int capacity);

/// Delivery time for each loaded order (parallel to `retailers`). Multi-queue
/// trucks make one direct trip; single-queue trucks visit retailers in order
/// of first appearance and each leg adds an independent draw.
std::vector<double> route_legs(const std::vector<int>& retailers, QueueTopology topology,
                               double departure, const std::function<double()>& draw_direct,
                               const std::function<double()>& draw_leg);

/// p * q * (days early + days late) for a delivered order.
double settle_delivery(const Order& order, const DeliveryWindow& window, double penalty_rate);

/// Throws std::invalid_argument when t_to < t_from.
void accrue_holding(CostLedger& ledger, double t_from, double t_to, int on_hand,
                    double holding_rate);
void accrue_backorder_penalty(CostLedger& ledger, int quantity, double wait,
                              double penalty_rate);

/// One replication over [0, horizon). Throws std::logic_error if an internal
/// invariant breaks and std::invalid_argument for a policy that does not
/// match the scenario.
SimResult run_replication(const NetworkConfig& config, const PolicyParams& policy,
                          const Scenario& scenario, std::uint64_t seed, double horizon,
                          const ReplicationOptions& options = {});

inline SimResult run_replication(const NetworkConfig& config, const PolicyParams& policy,
                                 const Scenario& scenario, std::uint64_t seed) {
    return run_replication(config, policy, scenario, seed, config.horizon_days);
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);
void write_ledger_csv(std::ostream& out, const SimResult& result);

}  // namespace dispatchopt
