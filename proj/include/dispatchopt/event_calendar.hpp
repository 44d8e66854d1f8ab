#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

namespace dispatchopt {

// Declaration order is the tie-break rank at equal times: stock arriving now
// can serve demand arriving now, and dispatch decisions see every arrival.
enum class EventKind : std::uint8_t {
    ReplenishmentArrival = 0,
    DeliveryArrival = 1,
    OrderArrival = 2,
    ScheduledDispatch = 3,
    DispatchEligible = 4,
};

const char* to_string(EventKind kind);

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::OrderArrival;
    // Retailer index, replenishment quantity, queue id or order id depending on kind.
    std::int64_t payload = 0;
    std::uint64_t seq = 0;
};

/// Pending-event set ordered by (time, kind rank, insertion sequence).
class EventCalendar {
public:
    /// Throws std::logic_error when time precedes the last popped event.
    void schedule(double time, EventKind kind, std::int64_t payload = 0);

    /// Throws std::out_of_range on an empty calendar.
    Event pop();
    const Event& peek() const;

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    double now() const { return now_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const;
    };

    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    double now_ = 0.0;
};

}  // namespace dispatchopt
