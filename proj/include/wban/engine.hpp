// Discrete-event kernel: traffic, shared-medium TDMA, links, energy and heat.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "wban/compensated_sum.hpp"
#include "wban/config.hpp"
#include "wban/energy.hpp"
#include "wban/event_queue.hpp"
#include "wban/link_quality.hpp"
#include "wban/metrics.hpp"
#include "wban/protocol.hpp"
#include "wban/rng.hpp"
#include "wban/routing.hpp"
#include "wban/scheduler.hpp"
#include "wban/thermal.hpp"
#include "wban/topology.hpp"

namespace wban {

struct RunOptions {
    /// Replaces the random placement (fixtures).
    std::optional<Topology> topology;
    /// Per-sensor origination rate in packets/s; empty means cfg rate for all.
    std::vector<double> node_rates;
    /// Newline-delimited event records are written here when set.
    std::ostream* event_log = nullptr;
    bool trace_routes = false;
    bool keep_paths = false;
};

/// Invariant bookkeeping gathered while the run executes.
struct RunDiagnostics {
    double energy_ledger_j = 0.0;         // sum of per-event debits
    double max_slot_sum_error_s = 0.0;    // |sum of slots - frame| over all frames
    std::uint64_t frames = 0;
    std::uint64_t medium_overlaps = 0;    // transmissions starting before the previous ended
    std::uint64_t hot_relays = 0;         // relay transmissions by nodes above threshold or asleep
    std::uint64_t delivered_via_sleeping = 0;
    std::uint64_t causality_violations = 0;
    std::uint64_t sleep_entries = 0;
    std::uint64_t max_toggles_per_step = 0;
    std::vector<RouteTrace> route_trace;
    std::vector<std::vector<NodeId>> delivered_paths;
};

struct RunResult {
    MetricsReport metrics;
    Counters counters;
    RunDiagnostics diagnostics;
    std::uint64_t event_count = 0;
    std::vector<NodeState> final_nodes;
    std::uint64_t seed = 0;
};

/// One event-log line: `time<TAB>kind<TAB>node<TAB>seq<TAB>detail`.
struct EventRecord {
    double time_s = 0.0;
    std::string kind;
    std::uint32_t node = 0;
    std::uint64_t seq = 0;
    std::string detail;

    bool operator==(const EventRecord&) const = default;
};
std::string format_event(const EventRecord& r);
EventRecord parse_event(const std::string& line);

/// Builds the topology (unless overridden), runs the configured protocol to
/// sim_time_s, checks closure and the energy ledger, and returns the metrics.
RunResult run(const ScenarioConfig& cfg, RunOptions options = {});

/// State of one run, as seen by protocol callbacks.
class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, RunOptions options);
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    RunResult run();

    double now() const { return now_; }
    const ScenarioConfig& config() const { return cfg_; }
    const Topology& topology() const { return topo_; }
    const NodeState& node(NodeId id) const { return topo_.nodes[index(id)]; }
    std::size_t size() const { return topo_.size(); }
    bool alive(NodeId id) const { return !node(id).dead; }
    const NeighborTable& neighbors(NodeId id) const { return tables_[index(id)]; }
    const ThermalParams& thermal() const { return thermal_; }
    const TransmitQueue& queue(NodeId id) const { return queues_[index(id)]; }

    /// Queues a control packet at `from`; broadcast when `dst` is unset.
    void send_control(NodeId from, ControlType type, std::optional<NodeId> dst = std::nullopt);

    /// Stream for protocol-level randomness (flood propagation).
    Rng& control_rng() { return control_rng_; }

    void trace_route(RouteTrace t);
    bool tracing_routes() const { return options_.trace_routes; }
    void log(std::string_view kind, NodeId node, std::uint64_t seq, const std::string& detail);

private:
    enum class EventKind : std::uint8_t { packet_origin, hello_tick, tdma_frame, tdma_slot, thermal_tick, link_delivery };
    struct EventData {
        EventKind kind = EventKind::packet_origin;
        std::uint32_t node = 0;
        double value = 0.0;       // slot quantum
        std::size_t transit = 0;  // index into transits_
    };
    struct Transit {
        Packet packet;
        NodeId from{};
        std::optional<NodeId> to;
        double enqueued_at = 0.0;
        HelloPayload hello;
        bool active = false;
    };

    void schedule(double t, EventData e);
    void handle(const EventData& e);
    void on_origin(NodeId id);
    void on_hello_tick();
    void on_frame();
    void on_slot(NodeId id, double quantum);
    void on_thermal_tick();
    void on_delivery(std::size_t transit);

    void enqueue(NodeId at, Packet p);
    void transmit(NodeId from, QueueEntry entry, std::optional<NodeId> to);
    double charge(NodeId id, double joules);
    void kill(NodeId id);
    void drop(const Packet& p, DropCause cause, NodeId at);
    void notify_hotspot(NodeId id);
    HelloPayload payload_of(NodeId id) const;
    double tx_time(const Packet& p) const;
    void finish(RunResult& out);

    ScenarioConfig cfg_;
    RunOptions options_;
    EnergyParams energy_;
    ThermalParams thermal_;
    Topology topo_;
    std::unique_ptr<Protocol> protocol_;
    EventQueue<EventData> events_;
    Rng traffic_rng_;
    Rng class_rng_;
    Rng link_rng_;
    Rng hello_rng_;
    Rng control_rng_;

    std::vector<NeighborTable> tables_;
    std::vector<TransmitQueue> queues_;
    std::vector<double> deficit_;
    std::vector<double> window_energy_;
    std::vector<CompensatedSum> spent_;  // per node, node balance = initial - spent
    CompensatedSum ledger_;
    std::vector<double> rates_;
    std::vector<std::vector<std::pair<NodeId, HelloPayload>>> heard_;  // HELLOs received this round
    std::vector<Transit> transits_;
    std::vector<std::size_t> free_transits_;
    std::unordered_set<std::uint64_t> slept_relayed_;  // packets forwarded by a sleeping relay

    Counters counters_;
    RunDiagnostics diag_;
    double now_ = 0.0;
    double busy_until_ = 0.0;
    double hello_interval_ = 1.0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t frame_index_ = 0;
    std::uint64_t event_count_ = 0;
};

}  // namespace wban
