#include "dispatchopt/event_calendar.hpp"

#include <string>

namespace dispatchopt {

const char* to_string(EventKind kind) {
    switch (kind) {
    case EventKind::ReplenishmentArrival: return "ReplenishmentArrival";
    case EventKind::DeliveryArrival: return "DeliveryArrival";
    case EventKind::OrderArrival: return "OrderArrival";
    case EventKind::ScheduledDispatch: return "ScheduledDispatch";
    case EventKind::DispatchEligible: return "DispatchEligible";
    }
    return "?";
}

bool EventCalendar::Later::operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.seq > b.seq;
}

void EventCalendar::schedule(double time, EventKind kind, std::int64_t payload) {
    if (time < now_) {
        throw std::logic_error("event " + std::string(to_string(kind)) + " scheduled at " +
                               std::to_string(time) + " before clock " + std::to_string(now_));
    }
    heap_.push(Event{time, kind, payload, next_seq_++});
}

Event EventCalendar::pop() {
    if (heap_.empty()) throw std::out_of_range("pop from empty event calendar");
    Event next = heap_.top();
    heap_.pop();
    now_ = next.time;
    return next;
}

const Event& EventCalendar::peek() const {
    if (heap_.empty()) throw std::out_of_range("peek into empty event calendar");
    return heap_.top();
}

}  // namespace dispatchopt
