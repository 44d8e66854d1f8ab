#include "dispatchopt/simulation.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "dispatchopt/event_calendar.hpp"

namespace dispatchopt {

WarehouseState::WarehouseState(int initial_stock, std::size_t queue_count)
    : on_hand(initial_stock),
      dispatch_queues(queue_count),
      queue_totals(queue_count, 0),
      queue_due(queue_count, false) {}

int WarehouseState::place_order(int retailer, int quantity) {
    const int id = static_cast<int>(orders.size());
    orders.push_back(Order{id, retailer, quantity, clock, std::nullopt, std::nullopt});
    return id;
}

void WarehouseState::enqueue_for_dispatch(int order_id) {
    const auto& order = orders[static_cast<std::size_t>(order_id)];
    const auto q = queue_for(order);
    dispatch_queues[q].push_back(order_id);
    queue_totals[q] += order.quantity;
}

FillOutcome fulfill_or_backorder(WarehouseState& state, CostLedger& ledger, int order_id) {
    auto& order = state.orders.at(static_cast<std::size_t>(order_id));
    ++ledger.orders_received;
    if (state.on_hand >= order.quantity) {
        state.on_hand -= order.quantity;
        order.fulfillment_time = state.clock;
        ++ledger.orders_filled_immediately;
        state.enqueue_for_dispatch(order_id);
        return FillOutcome::FilledNow;
    }
    state.backorders.push_back(order_id);
    state.backordered += order.quantity;
    return FillOutcome::Backordered;
}

std::vector<std::size_t> ready_queues(const WarehouseState& state, const PolicyParams& policy) {
    std::vector<std::size_t> ready;
    const auto* thresholds = std::get_if<QuantityThresholds>(&policy.dispatch);
    for (std::size_t q = 0; q < state.dispatch_queues.size(); ++q) {
        if (state.dispatch_queues[q].empty()) continue;
        const bool wants_truck = thresholds ? state.queue_totals[q] >= thresholds->values.at(q)
                                            : static_cast<bool>(state.queue_due[q]);
        if (wants_truck) ready.push_back(q);
    }
    return ready;
}

std::optional<double> maybe_trigger_dispatch(const WarehouseState& state,
                                             const PolicyParams& policy, double min_gap) {
    if (ready_queues(state, policy).empty()) return std::nullopt;
    if (!state.last_dispatch_time) return state.clock;
    const double eligible = *state.last_dispatch_time + min_gap;
    return std::max(eligible, state.clock);
}

std::size_t select_dispatch_queue(const WarehouseState& state,
                                  const std::vector<std::size_t>& ready) {
    if (ready.empty()) throw std::logic_error("select_dispatch_queue: no ready queue");
    std::size_t best = ready.front();
    auto head_time = [&state](std::size_t q) {
        return state.orders[static_cast<std::size_t>(state.dispatch_queues[q].front())]
            .placement_time;
    };
    for (std::size_t q : ready) {
        if (head_time(q) < head_time(best)) best = q;
    }
    return best;
}

std::vector<int> build_truckload(std::deque<int>& queue, const std::vector<Order>& orders,
                                 PriorityRule priority, int capacity) {
    auto order_of = [&orders](int id) -> const Order& {
        return orders[static_cast<std::size_t>(id)];
    };
    if (priority == PriorityRule::SOF) {
        std::stable_sort(queue.begin(), queue.end(), [&](int a, int b) {
            const auto& oa = order_of(a);
            const auto& ob = order_of(b);
            if (oa.quantity != ob.quantity) return oa.quantity < ob.quantity;
            return oa.placement_time < ob.placement_time;
        });
    }
    std::vector<int> loaded;
    int load = 0;
    while (!queue.empty()) {
        const int q = order_of(queue.front()).quantity;
        if (load + q > capacity) break;
        load += q;
        loaded.push_back(queue.front());
        queue.pop_front();
    }
    return loaded;
}

std::vector<double> route_legs(const std::vector<int>& retailers, QueueTopology topology,
                               double departure, const std::function<double()>& draw_direct,
                               const std::function<double()>& draw_leg) {
    std::vector<double> arrival(retailers.size(), departure);
    if (retailers.empty()) return arrival;
    if (topology == QueueTopology::MultiQueue) {
        std::fill(arrival.begin(), arrival.end(), departure + draw_direct());
        return arrival;
    }
    // Stops in first-appearance order; each distinct retailer adds one leg.
    std::vector<std::pair<int, double>> stops;
    double clock = departure;
    for (std::size_t i = 0; i < retailers.size(); ++i) {
        auto stop = std::find_if(stops.begin(), stops.end(),
                                 [&](const auto& s) { return s.first == retailers[i]; });
        if (stop == stops.end()) {
            clock += draw_leg();
            stops.emplace_back(retailers[i], clock);
            arrival[i] = clock;
        } else {
            arrival[i] = stop->second;
        }
    }
    return arrival;
}

double settle_delivery(const Order& order, const DeliveryWindow& window, double penalty_rate) {
    if (!order.delivery_time) throw std::logic_error("settle_delivery: order not delivered");
    const double lead = *order.delivery_time - order.placement_time;
    const double early = std::max(0.0, window.earliest - lead);
    const double late = std::max(0.0, lead - window.latest);
    return penalty_rate * order.quantity * (early + late);
}

void accrue_holding(CostLedger& ledger, double t_from, double t_to, int on_hand,
                    double holding_rate) {
    if (t_to < t_from) throw std::invalid_argument("accrue_holding: negative interval");
    ledger.holding += holding_rate * on_hand * (t_to - t_from);
}

void accrue_backorder_penalty(CostLedger& ledger, int quantity, double wait,
                              double penalty_rate) {
    if (wait < 0) throw std::invalid_argument("accrue_backorder_penalty: negative wait");
    const double amount = penalty_rate * quantity * wait;
    ledger.backorder_penalty += amount;
    ledger.penalty += amount;
}

namespace {

// Substream ids; retailer arrival streams use kArrivalStream + retailer index.
constexpr std::uint64_t kArrivalStream = 1;
constexpr std::uint64_t kSupplierStream = 1000;
constexpr std::uint64_t kRouteStream = 2000;

class Replication {
public:
    Replication(const NetworkConfig& config, const PolicyParams& policy, const Scenario& scenario,
                std::uint64_t seed, double horizon, const ReplicationOptions& options)
        : config_(config),
          policy_(policy),
          scenario_(scenario),
          horizon_(horizon),
          options_(options),
          state_(policy.reorder_point,
                 scenario.single_queue() ? 1 : config.retailers.size()),
          supplier_rng_(seed, kSupplierStream),
          route_rng_(seed, kRouteStream) {
        for (std::size_t i = 0; i < config.retailers.size(); ++i) {
            arrival_rngs_.emplace_back(seed, kArrivalStream + i);
        }
        check_policy_shape();
    }

    SimResult run() {
        start();
        while (!calendar_.empty() && calendar_.peek().time < horizon_) {
            const Event event = calendar_.pop();
            advance_to(event.time);
            handle(event);
            record_trace();
        }
        advance_to(horizon_);
        return finish();
    }

private:
    void check_policy_shape() const {
        const std::size_t queues = state_.dispatch_queues.size();
        const bool quantity = std::holds_alternative<QuantityThresholds>(policy_.dispatch);
        if (quantity != scenario_.quantity_based()) {
            throw std::invalid_argument("dispatch parameters do not match the scenario's policy");
        }
        const std::size_t n = quantity ? std::get<QuantityThresholds>(policy_.dispatch).values.size()
                                       : std::get<ScheduleIntervals>(policy_.dispatch).days.size();
        if (n != queues) {
            throw std::invalid_argument("expected " + std::to_string(queues) +
                                        " dispatch parameters, got " + std::to_string(n));
        }
        if (!quantity) {
            for (int s : std::get<ScheduleIntervals>(policy_.dispatch).days) {
                if (s < 1) throw std::invalid_argument("dispatch interval must be >= 1 day");
            }
        }
        if (!(horizon_ > 0)) throw std::invalid_argument("horizon must be positive");
    }

    void start() {
        initial_stock_ = state_.on_hand;
        if (options_.scripted_arrivals) {
            for (const auto& a : *options_.scripted_arrivals) {
                if (a.retailer < 0 || a.retailer >= config_.retailer_count()) {
                    throw std::invalid_argument("scripted arrival for unknown retailer");
                }
                calendar_.schedule(a.time, EventKind::OrderArrival, a.retailer);
            }
        } else {
            for (std::size_t i = 0; i < config_.retailers.size(); ++i) {
                schedule_next_arrival(i, 0.0);
            }
        }
        if (const auto* s = std::get_if<ScheduleIntervals>(&policy_.dispatch)) {
            for (std::size_t q = 0; q < s->days.size(); ++q) {
                calendar_.schedule(s->days[q], EventKind::ScheduledDispatch,
                                   static_cast<std::int64_t>(q));
            }
        }
        if (config_.reorder_at_start) review_inventory_position();
        record_trace(/*force=*/true);
    }

    void schedule_next_arrival(std::size_t retailer, double now) {
        const double rate = config_.retailers[retailer].arrival_rate;
        if (rate <= 0) return;
        const double next = now + arrival_rngs_[retailer].exponential(rate);
        if (next < horizon_) {
            calendar_.schedule(next, EventKind::OrderArrival, static_cast<std::int64_t>(retailer));
        }
    }

    void advance_to(double t) {
        accrue_holding(ledger_, state_.clock, t, state_.on_hand, config_.costs.holding_rate);
        state_.clock = t;
    }

    void handle(const Event& event) {
        switch (event.kind) {
        case EventKind::OrderArrival: on_order_arrival(static_cast<int>(event.payload)); break;
        case EventKind::ReplenishmentArrival:
            on_replenishment(static_cast<int>(event.payload));
            break;
        case EventKind::DeliveryArrival: on_delivery(static_cast<int>(event.payload)); break;
        case EventKind::ScheduledDispatch:
            on_scheduled_dispatch(static_cast<std::size_t>(event.payload));
            break;
        case EventKind::DispatchEligible:
            eligible_pending_ = false;
            try_dispatch();
            break;
        }
    }

    void on_order_arrival(int retailer) {
        if (!options_.scripted_arrivals) {
            schedule_next_arrival(static_cast<std::size_t>(retailer), state_.clock);
        }
        const int quantity = config_.retailers[static_cast<std::size_t>(retailer)].order_quantity;
        const int id = state_.place_order(retailer, quantity);
        fulfill_or_backorder(state_, ledger_, id);
        review_inventory_position();
        try_dispatch();
    }

    void on_replenishment(int quantity) {
        state_.on_hand += quantity;
        state_.on_order -= quantity;
        received_ += quantity;
        // Backorders first, strictly in arrival order and whole orders only.
        while (!state_.backorders.empty()) {
            auto& order = state_.orders[static_cast<std::size_t>(state_.backorders.front())];
            if (order.quantity > state_.on_hand) break;
            state_.backorders.pop_front();
            state_.backordered -= order.quantity;
            state_.on_hand -= order.quantity;
            order.fulfillment_time = state_.clock;
            accrue_backorder_penalty(ledger_, order.quantity, state_.clock - order.placement_time,
                                     config_.costs.penalty_rate);
            state_.enqueue_for_dispatch(order.id);
            review_inventory_position();
        }
        try_dispatch();
    }

    void on_delivery(int order_id) {
        const auto& order = state_.orders[static_cast<std::size_t>(order_id)];
        const double amount = settle_delivery(order, config_.window, config_.costs.penalty_rate);
        ledger_.window_penalty += amount;
        ledger_.penalty += amount;
    }

    void on_scheduled_dispatch(std::size_t queue) {
        const int interval = std::get<ScheduleIntervals>(policy_.dispatch).days[queue];
        const double next = state_.clock + interval;
        if (next < horizon_) {
            calendar_.schedule(next, EventKind::ScheduledDispatch, static_cast<std::int64_t>(queue));
        }
        if (!state_.dispatch_queues[queue].empty()) state_.queue_due[queue] = true;
        try_dispatch();
    }

    // (r, Q) rule: one order of Q whenever the position is at or below r.
    void review_inventory_position() {
        if (state_.inventory_position() > policy_.reorder_point) return;
        const auto& range = config_.transport.supplier_lead_time;
        const double lead = supplier_rng_.uniform(range.lo, range.hi);
        state_.on_order += policy_.reorder_quantity;
        ledger_.ordering += config_.costs.ordering_cost;
        ++ledger_.replenishment_orders;
        calendar_.schedule(state_.clock + lead, EventKind::ReplenishmentArrival,
                           policy_.reorder_quantity);
    }

    void try_dispatch() {
        const auto when = maybe_trigger_dispatch(state_, policy_,
                                                 config_.transport.min_dispatch_gap);
        if (!when) return;
        if (*when > state_.clock) {
            if (!eligible_pending_) {
                calendar_.schedule(*when, EventKind::DispatchEligible);
                eligible_pending_ = true;
            }
            return;
        }
        dispatch(select_dispatch_queue(state_, ready_queues(state_, policy_)));
        // The truck just left, so anything still ready waits for the next slot.
        try_dispatch();
    }

    void dispatch(std::size_t queue) {
        auto& pending = state_.dispatch_queues[queue];
        const auto loaded = build_truckload(pending, state_.orders, scenario_.priority,
                                            config_.transport.truck_capacity);
        state_.queue_due[queue] = false;
        if (loaded.empty()) return;

        Shipment shipment{state_.clock, static_cast<int>(queue), loaded, 0};
        std::vector<int> retailers;
        retailers.reserve(loaded.size());
        for (int id : loaded) {
            const auto& order = state_.orders[static_cast<std::size_t>(id)];
            shipment.load += order.quantity;
            retailers.push_back(order.retailer);
        }
        state_.queue_totals[queue] -= shipment.load;
        dispatched_ += shipment.load;
        state_.last_dispatch_time = state_.clock;
        ledger_.delivery += config_.costs.delivery_cost;
        ++ledger_.trucks_dispatched;

        const auto& transport = config_.transport;
        const auto arrivals = route_legs(
            retailers, scenario_.topology, state_.clock,
            [&] { return route_rng_.uniform(transport.direct_trip_time.lo,
                                            transport.direct_trip_time.hi); },
            [&] { return route_rng_.uniform(transport.leg_time.lo, transport.leg_time.hi); });
        for (std::size_t i = 0; i < loaded.size(); ++i) {
            auto& order = state_.orders[static_cast<std::size_t>(loaded[i])];
            order.delivery_time = arrivals[i];
            if (arrivals[i] < horizon_) {
                calendar_.schedule(arrivals[i], EventKind::DeliveryArrival, order.id);
            }
        }
        if (options_.record_shipments) shipments_.push_back(std::move(shipment));
    }

    void record_trace(bool force = false) {
        if (!options_.record_trace) return;
        const TracePoint point{state_.clock, state_.on_hand, state_.inventory_position()};
        if (!force && !trace_.empty() && trace_.back().on_hand == point.on_hand &&
            trace_.back().inventory_position == point.inventory_position) {
            return;
        }
        trace_.push_back(point);
    }

    SimResult finish() {
        for (int id : state_.backorders) {
            const auto& order = state_.orders[static_cast<std::size_t>(id)];
            accrue_backorder_penalty(ledger_, order.quantity, horizon_ - order.placement_time,
                                     config_.costs.penalty_rate);
        }
        if (state_.on_hand < 0) throw std::logic_error("negative on-hand inventory at horizon");

        SimResult result;
        result.breakdown = ledger_;
        result.total_cost = ledger_.total();
        result.fill_rate = ledger_.orders_received == 0
                               ? 1.0
                               : static_cast<double>(ledger_.orders_filled_immediately) /
                                     static_cast<double>(ledger_.orders_received);

        auto& flows = result.flows;
        flows.initial_stock = initial_stock_;
        flows.received = received_;
        flows.dispatched = dispatched_;
        for (int total : state_.queue_totals) flows.queued_at_end += total;
        flows.on_hand_at_end = state_.on_hand;
        flows.on_order_at_end = state_.on_order;
        flows.backordered_at_end = state_.backordered;
        if (flows.initial_stock + flows.received !=
            flows.on_hand_at_end + flows.dispatched + flows.queued_at_end) {
            throw std::logic_error("item conservation violated");
        }

        if (options_.record_trace) {
            trace_.push_back({horizon_, state_.on_hand, state_.inventory_position()});
            result.trace = std::move(trace_);
        }
        result.shipments = std::move(shipments_);
        if (options_.record_orders) result.orders = std::move(state_.orders);
        return result;
    }

    const NetworkConfig& config_;
    const PolicyParams& policy_;
    const Scenario& scenario_;
    double horizon_;
    const ReplicationOptions& options_;

    WarehouseState state_;
    CostLedger ledger_;
    EventCalendar calendar_;
    RandomStream supplier_rng_;
    RandomStream route_rng_;
    std::vector<RandomStream> arrival_rngs_;
    bool eligible_pending_ = false;

    long initial_stock_ = 0;
    long received_ = 0;
    long dispatched_ = 0;
    std::vector<TracePoint> trace_;
    std::vector<Shipment> shipments_;
};

}  // namespace

SimResult run_replication(const NetworkConfig& config, const PolicyParams& policy,
                          const Scenario& scenario, std::uint64_t seed, double horizon,
                          const ReplicationOptions& options) {
    return Replication(config, policy, scenario, seed, horizon, options).run();
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
    out << std::setprecision(12) << "time,on_hand,inventory_position\n";
    for (const auto& p : trace) {
        out << p.time << ',' << p.on_hand << ',' << p.inventory_position << '\n';
    }
}

void write_ledger_csv(std::ostream& out, const SimResult& result) {
    const auto& b = result.breakdown;
    out << std::setprecision(12) << "component,value\n";
    out << "holding," << b.holding << '\n';
    out << "ordering," << b.ordering << '\n';
    out << "delivery," << b.delivery << '\n';
    out << "penalty," << b.penalty << '\n';
    out << "backorder_penalty," << b.backorder_penalty << '\n';
    out << "window_penalty," << b.window_penalty << '\n';
    out << "total," << result.total_cost << '\n';
    out << "fill_rate," << result.fill_rate << '\n';
    out << "orders_received," << b.orders_received << '\n';
    out << "orders_filled_immediately," << b.orders_filled_immediately << '\n';
}

}  // namespace dispatchopt
