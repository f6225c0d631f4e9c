#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

#include "wban/rng.hpp"
#include "wban/scheduler.hpp"

using namespace wban;

TEST_SUITE("scheduler") {

QueueEntry data(std::uint64_t seq, PacketClass cls, double at, const ScenarioConfig& cfg = {})
{
    QueueEntry e;
    e.packet.seq = seq;
    e.packet.cls = cls;
    e.packet.kind = PacketKind::data;
    e.enqueued_at = at;
    e.allowed_delay_s = allowed_delay(cls, cfg);
    return e;
}

TEST_CASE("waiting score")
{
    CHECK(waiting_score(3, 0.1, 50.0) == doctest::Approx(6.667e-4).epsilon(1e-4));
    CHECK(std::abs(waiting_score(3, 0.1, 50.0) - (1.0 / 3.0) * (0.1 / 50.0)) <= 1e-9 * waiting_score(3, 0.1, 50.0));
    CHECK(waiting_score(3, 0.4, 70.0) * 3 == doctest::Approx(waiting_score(1, 0.4, 70.0)).epsilon(1e-15));
    CHECK(waiting_score(2, 0.25, 50.0) == doctest::Approx(2 * waiting_score(2, 0.25, 100.0)).epsilon(1e-15));
    CHECK(std::isinf(waiting_score(1, 1.0, 0.0)));
}

TEST_CASE("allowed delay per class")
{
    const ScenarioConfig cfg;
    CHECK(allowed_delay(PacketClass::emergency, cfg) == 0.05);
    CHECK(allowed_delay(PacketClass::on_demand, cfg) == 0.25);
    CHECK(allowed_delay(PacketClass::normal, cfg) == 1.0);
}

TEST_CASE("slot allocation")
{
    const std::vector<double> equal(5, 1.0);
    const TdmaFrame a = allocate_slots(0.1, equal, 5);
    for (double s : a.slots)
        CHECK(s == doctest::Approx(0.02));

    const std::vector<double> w{2.0, 1.0};
    const TdmaFrame b = allocate_slots(0.03, w, 2);
    REQUIRE(b.slots.size() == 2);
    CHECK(b.slots[0] == doctest::Approx(0.02));
    CHECK(b.slots[1] == doctest::Approx(0.01));

    const std::vector<double> one{1.7};
    CHECK(allocate_slots(0.1, one, 1).slots[0] == 0.1);
}

TEST_CASE("slots always sum to the frame")
{
    Rng rng(31, Stream::fixture);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 300);
        std::vector<double> w(n);
        for (auto& x : w)
            x = emergency_weight(static_cast<std::size_t>(rng.uniform() * 5), 5);
        const TdmaFrame f = allocate_slots(0.1, w, n);
        double sum = 0.0;
        for (double s : f.slots) {
            CHECK(s > 0.0);
            sum += s;
        }
        CHECK(std::abs(sum - 0.1) <= 1e-15);
    }
}

TEST_CASE("emergency weight")
{
    CHECK(emergency_weight(0, 0) == 1.0);
    CHECK(emergency_weight(0, 4) == 1.0);
    CHECK(emergency_weight(1, 4) == 1.25);
    CHECK(emergency_weight(4, 4) == 2.0);
}

TEST_CASE("emergency departs before normal with identical D and energy")
{
    // Same allowed delay for both: only the priority differs.
    for (double e_res : {5.0, 50.0, 100.0}) {
        TransmitQueue q(QueuePolicy::waiting_score);
        QueueEntry normal = data(1, PacketClass::normal, 0.0);
        QueueEntry urgent = data(2, PacketClass::emergency, 0.0);
        normal.allowed_delay_s = urgent.allowed_delay_s = 0.1;
        q.push(normal, e_res);
        q.push(urgent, e_res);
        CHECK(q.pop().packet.seq == 2);
        CHECK(q.pop().packet.seq == 1);
    }
}

TEST_CASE("priority dominance on random queues")
{
    Rng rng(8, Stream::fixture);
    for (int trial = 0; trial < 200; ++trial) {
        TransmitQueue q(QueuePolicy::waiting_score);
        const double e_res = rng.uniform(1.0, 100.0);
        const double d = rng.uniform(0.01, 2.0);
        const int n = 2 + static_cast<int>(rng.uniform() * 30);
        for (int k = 0; k < n; ++k) {
            const auto cls = static_cast<PacketClass>(1 + static_cast<int>(rng.uniform() * 3));
            QueueEntry e = data(static_cast<std::uint64_t>(k), cls, 0.0);
            e.allowed_delay_s = d;
            q.push(e, e_res);
        }
        int last = 4;
        while (!q.empty()) {
            const int p = priority(q.pop().packet.cls);
            REQUIRE(p <= last);
            last = p;
        }
    }
}

TEST_CASE("queue order matches a reference sort")
{
    Rng rng(9, Stream::fixture);
    const ScenarioConfig cfg;
    for (int trial = 0; trial < 100; ++trial) {
        TransmitQueue q(QueuePolicy::waiting_score);
        const double e_res = rng.uniform(1.0, 100.0);
        std::vector<QueueEntry> ref;
        for (int k = 0; k < 25; ++k) {
            const auto cls = static_cast<PacketClass>(1 + static_cast<int>(rng.uniform() * 3));
            QueueEntry e = data(static_cast<std::uint64_t>(k), cls, std::floor(rng.uniform(0, 5)) * 0.1, cfg);
            q.push(e, e_res);
            ref.push_back(e);
        }
        std::stable_sort(ref.begin(), ref.end(), [&](const QueueEntry& a, const QueueEntry& b) {
            const double sa = waiting_score(priority(a.packet.cls), a.allowed_delay_s, e_res);
            const double sb = waiting_score(priority(b.packet.cls), b.allowed_delay_s, e_res);
            return std::tie(sa, a.enqueued_at, a.packet.seq) < std::tie(sb, b.enqueued_at, b.packet.seq);
        });
        for (const auto& e : ref)
            CHECK(q.pop().packet.seq == e.packet.seq);
    }
}

TEST_CASE("control packets go first under every policy")
{
    for (auto policy : {QueuePolicy::waiting_score, QueuePolicy::class_priority, QueuePolicy::fifo}) {
        TransmitQueue q(policy);
        q.push(data(1, PacketClass::emergency, 0.0), 50.0);
        QueueEntry hello;
        hello.packet.seq = 2;
        hello.packet.kind = PacketKind::control;
        hello.packet.control = ControlType::hello;
        hello.enqueued_at = 1.0;
        q.push(hello, 50.0);
        CHECK(q.pop().packet.seq == 2);
    }
}

TEST_CASE("class priority and fifo policies")
{
    TransmitQueue prio(QueuePolicy::class_priority);
    TransmitQueue fifo(QueuePolicy::fifo);
    for (auto* q : {&prio, &fifo}) {
        q->push(data(1, PacketClass::normal, 0.0), 50.0);
        q->push(data(2, PacketClass::on_demand, 0.1), 50.0);
        q->push(data(3, PacketClass::emergency, 0.2), 50.0);
    }
    CHECK(prio.pop().packet.seq == 3);
    CHECK(prio.pop().packet.seq == 2);
    CHECK(prio.pop().packet.seq == 1);
    CHECK(fifo.pop().packet.seq == 1);
    CHECK(fifo.pop().packet.seq == 2);
    CHECK(fifo.pop().packet.seq == 3);
}

TEST_CASE("expired entries are removed and returned")
{
    // age counts from creation, not from arrival at this node
    TransmitQueue q;
    QueueEntry old = data(1, PacketClass::normal, 4.0);
    old.packet.created_at = 0.0;
    QueueEntry young = data(2, PacketClass::normal, 4.0);
    young.packet.created_at = 4.0;
    q.push(old, 50.0);
    q.push(young, 50.0);
    const auto gone = q.drop_expired(5.5, 5.0);
    REQUIRE(gone.size() == 1);
    CHECK(gone[0].packet.seq == 1);
    CHECK(q.size() == 1);
    CHECK(q.data_count() == 1);
}

TEST_CASE("replay rules in order")
{
    const ThermalParams tp;
    NodeState cool;
    cool.temperature_c = 37.5;
    NodeState hot;
    hot.temperature_c = tp.t_thresh + 0.5;
    const QueueEntry fresh = data(1, PacketClass::normal, 10.0);
    const RouteState fine{true, false, true};
    const RouteState congested{true, true, true};
    const RouteState congested_alone{true, true, false};

    CHECK(adaptive_replay(fresh, cool, fine, tp, 10.01) == ReplayAction::send_primary);
    CHECK(adaptive_replay(fresh, hot, congested, tp, 10.01) == ReplayAction::divert_to_stable_neighbor);
    CHECK(adaptive_replay(fresh, cool, congested, tp, 10.01) == ReplayAction::divert_to_second_route);
    // demotion never takes away the only route
    CHECK(adaptive_replay(fresh, cool, congested_alone, tp, 10.01) == ReplayAction::send_primary);
    CHECK(adaptive_replay(fresh, cool, fine, tp, 11.0) == ReplayAction::forward_immediately);
}

TEST_CASE("stable neighbour is the coolest awake one with a route")
{
    const std::vector<NeighborCandidate> two{{node_id(4), 38.0, true, true, 0.5}, {node_id(7), 37.0, true, true, 0.9}};
    CHECK(nearest_stable_neighbor(two) == node_id(7));

    const std::vector<NeighborCandidate> filtered{{node_id(1), 36.0, false, true, 0.1},
                                                  {node_id(2), 36.5, true, false, 0.1},
                                                  {node_id(3), 38.5, true, true, 2.0}};
    CHECK(nearest_stable_neighbor(filtered) == node_id(3));

    const std::vector<NeighborCandidate> tie{{node_id(5), 37.0, true, true, 0.8}, {node_id(6), 37.0, true, true, 0.4}};
    CHECK(nearest_stable_neighbor(tie) == node_id(6));

    const std::vector<NeighborCandidate> none{{node_id(1), 36.0, false, true, 0.1}};
    CHECK_FALSE(nearest_stable_neighbor(none).has_value());
}

// Three queued packets at one node; at the tick only the emergency one has
// outlived its allowed delay. Reference: overdue packets leave first through
// the bypass, then the rest in queue order.
TEST_CASE("overdue emergency packet bypasses queued normal packets")
{
    const ScenarioConfig cfg;
    const ThermalParams tp;
    NodeState node;
    node.energy_j = 80.0;
    node.temperature_c = 37.2;
    const std::vector<QueueEntry> script{data(10, PacketClass::normal, 0.000, cfg),
                                         data(11, PacketClass::emergency, 0.005, cfg),
                                         data(12, PacketClass::normal, 0.010, cfg)};
    const double tick = 0.06;

    // reference scheduler
    std::vector<std::uint64_t> expect;
    std::vector<QueueEntry> rest;
    for (const auto& e : script)
        (tick - e.enqueued_at >= e.allowed_delay_s ? expect.push_back(e.packet.seq) : rest.push_back(e));
    std::stable_sort(rest.begin(), rest.end(), [&](const QueueEntry& a, const QueueEntry& b) {
        return waiting_score(priority(a.packet.cls), a.allowed_delay_s, node.energy_j) <
               waiting_score(priority(b.packet.cls), b.allowed_delay_s, node.energy_j);
    });
    for (const auto& e : rest)
        expect.push_back(e.packet.seq);
    REQUIRE(expect == std::vector<std::uint64_t>{11, 10, 12});

    TransmitQueue q(QueuePolicy::waiting_score);
    for (const auto& e : script)
        q.push(e, node.energy_j);
    std::vector<std::uint64_t> got;
    const RouteState route{true, false, false};
    for (const auto& e : q.take_overdue(tick)) {
        CHECK(adaptive_replay(e, node, route, tp, tick) == ReplayAction::forward_immediately);
        got.push_back(e.packet.seq);
    }
    while (!q.empty()) {
        const QueueEntry e = q.pop();
        CHECK(adaptive_replay(e, node, route, tp, tick) == ReplayAction::send_primary);
        got.push_back(e.packet.seq);
    }
    CHECK(got == expect);
}

}
