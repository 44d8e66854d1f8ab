#include <doctest.h>

#include <stdexcept>

#include "dispatchopt/event_calendar.hpp"
#include "dispatchopt/random.hpp"

using namespace dispatchopt;

TEST_CASE("earliest time pops first") {
    EventCalendar calendar;
    calendar.schedule(5.0, EventKind::OrderArrival);
    calendar.schedule(3.2, EventKind::ReplenishmentArrival);
    const auto e = calendar.pop();
    CHECK(e.time == 3.2);
    CHECK(e.kind == EventKind::ReplenishmentArrival);
    CHECK(calendar.now() == 3.2);
}

TEST_CASE("equal times break ties by kind rank, then insertion") {
    EventCalendar calendar;
    for (int i = 0; i < 7; ++i) calendar.schedule(10.0 + i, EventKind::DispatchEligible);
    calendar.schedule(4.0, EventKind::OrderArrival, 1);          // seq 7
    calendar.schedule(4.0, EventKind::DispatchEligible);         // seq 8
    calendar.schedule(4.0, EventKind::ReplenishmentArrival, 2);  // seq 9
    calendar.schedule(4.0, EventKind::DeliveryArrival, 3);
    calendar.schedule(4.0, EventKind::ScheduledDispatch, 4);

    const auto first = calendar.pop();
    CHECK(first.kind == EventKind::ReplenishmentArrival);
    CHECK(first.seq == 9);
    CHECK(calendar.pop().kind == EventKind::DeliveryArrival);
    const auto order = calendar.pop();
    CHECK(order.kind == EventKind::OrderArrival);
    CHECK(order.seq == 7);
    CHECK(calendar.pop().kind == EventKind::ScheduledDispatch);
    CHECK(calendar.pop().kind == EventKind::DispatchEligible);
}

TEST_CASE("same time and kind pop in insertion order") {
    EventCalendar calendar;
    for (int i = 0; i < 9; ++i) calendar.schedule(2.0, EventKind::OrderArrival, i);
    std::int64_t previous = -1;
    while (!calendar.empty()) {
        const auto e = calendar.pop();
        CHECK(e.payload == previous + 1);
        previous = e.payload;
    }
}

TEST_CASE("pop order is the (time, rank, seq) minimum for random schedules") {
    RandomStream rng(3);
    EventCalendar calendar;
    for (int i = 0; i < 2000; ++i) {
        const double t = static_cast<double>(rng.uniform_int(0, 50)) / 2.0;
        calendar.schedule(t, static_cast<EventKind>(rng.uniform_int(0, 4)));
    }
    Event last = calendar.pop();
    while (!calendar.empty()) {
        const Event e = calendar.pop();
        const bool ordered = last.time < e.time ||
                             (last.time == e.time && (last.kind < e.kind ||
                                                      (last.kind == e.kind && last.seq < e.seq)));
        REQUIRE(ordered);
        last = e;
    }
}

TEST_CASE("calendar errors") {
    EventCalendar calendar;
    CHECK_THROWS_AS(calendar.pop(), std::out_of_range);
    calendar.schedule(5.0, EventKind::OrderArrival);
    calendar.pop();
    CHECK_THROWS_AS(calendar.schedule(4.0, EventKind::OrderArrival), std::logic_error);
    calendar.schedule(5.0, EventKind::OrderArrival);
    CHECK(calendar.size() == 1);
}
