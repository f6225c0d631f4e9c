#include <doctest.h>

#include <algorithm>
#include <vector>

#include "wban/event_queue.hpp"
#include "wban/rng.hpp"

using namespace wban;

TEST_SUITE("event_queue") {

TEST_CASE("earliest first")
{
    EventQueue<int> q;
    q.schedule(5.0, 1);
    q.schedule(3.0, 2);
    CHECK(q.next_event().time_s == 3.0);
    CHECK(q.now() == 3.0);
    CHECK(q.next_event().payload == 1);
    CHECK(q.empty());
}

TEST_CASE("equal times come out in insertion order")
{
    EventQueue<int> q;
    for (int k = 0; k < 10; ++k)
        q.schedule(3.0, k);
    for (int k = 0; k < 10; ++k)
        CHECK(q.next_event().payload == k);
}

TEST_CASE("scheduling in the past is an invariant violation")
{
    EventQueue<int> q;
    q.schedule(2.0, 0);
    q.next_event();
    CHECK_THROWS_AS(q.schedule(1.0, 0), InvariantViolation);
    CHECK_NOTHROW(q.schedule(2.0, 0));
}

TEST_CASE("extraction order equals a stable sort of the insertions")
{
    Rng rng(12345, Stream::fixture);
    struct Item {
        double t;
        int id;
    };
    std::vector<Item> items;
    EventQueue<int> q;
    for (int k = 0; k < 100000; ++k) {
        // coarse times force plenty of ties
        const double t = std::floor(rng.uniform(0.0, 1000.0) * 8.0) / 8.0;
        items.push_back({t, k});
        q.schedule(t, k);
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.t < b.t; });
    double last = 0.0;
    for (const auto& it : items) {
        const auto e = q.next_event();
        REQUIRE(e.payload == it.id);
        REQUIRE(e.time_s >= last);
        last = e.time_s;
    }
    CHECK(q.empty());
}

TEST_CASE("interleaved schedule and extract keeps time monotone")
{
    Rng rng(4, Stream::fixture);
    EventQueue<int> q;
    q.schedule(0.0, 0);
    double last = 0.0;
    int handled = 0;
    while (!q.empty() && handled < 50000) {
        const auto e = q.next_event();
        REQUIRE(e.time_s >= last);
        last = e.time_s;
        ++handled;
        const int children = rng.bernoulli(0.5) ? 2 : 1;
        for (int c = 0; c < children && q.size() < 1000; ++c)
            q.schedule(e.time_s + std::floor(rng.uniform(0.0, 4.0)) * 0.25, handled);
    }
    CHECK(handled == 50000);
}

}
