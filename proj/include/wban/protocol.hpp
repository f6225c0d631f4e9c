// Routing/scheduling policy plugged into the engine. One instance per run.
#pragma once

#include <memory>
#include <optional>

#include "wban/config.hpp"
#include "wban/metrics.hpp"
#include "wban/scheduler.hpp"
#include "wban/types.hpp"

namespace wban {

class Simulation;

/// What to do with a queued data packet at a transmit opportunity.
struct Decision {
    enum class Action { send, hold, drop };
    Action action = Action::hold;
    NodeId next{};
    DropCause cause = DropCause::no_route;

    static Decision send(NodeId next) { return {Action::send, next, DropCause::no_route}; }
    static Decision hold() { return {}; }
    static Decision drop(DropCause c) { return {Action::drop, NodeId{}, c}; }
};

class Protocol {
public:
    virtual ~Protocol() = default;

    virtual ProtocolKind kind() const = 0;
    virtual QueuePolicy queue_policy() const { return QueuePolicy::fifo; }
    virtual double hello_interval(const ScenarioConfig& cfg) const { return cfg.hello_interval_s; }
    /// Overheated nodes stop relaying (and hand off their own traffic).
    virtual bool thermal_sleep() const { return false; }
    /// Packets that waited past their allowed delay skip the TDMA wait.
    virtual bool bypass_overdue() const { return false; }
    virtual double slot_weight(const TransmitQueue& /*queue*/) const { return 1.0; }

    virtual void on_start(Simulation& /*sim*/) {}
    /// Neighbour tables were just refreshed with the HELLO round that ended.
    virtual void on_hello_round(Simulation& /*sim*/) {}
    virtual void on_control_received(Simulation& /*sim*/, NodeId /*at*/, const Packet& /*p*/) {}
    virtual void on_hotspot_change(Simulation& /*sim*/, NodeId /*node*/) {}
    virtual void on_node_death(Simulation& /*sim*/, NodeId /*node*/) {}

    virtual Decision next_hop(Simulation& sim, NodeId at, QueueEntry& entry) = 0;

    /// Outcome of one data transmission attempt from `from` to `to`.
    virtual void on_data_result(Simulation& /*sim*/, NodeId /*from*/, NodeId /*to*/, const Packet& /*p*/, bool /*ok*/) {}
};

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, const ScenarioConfig& cfg);

}  // namespace wban
