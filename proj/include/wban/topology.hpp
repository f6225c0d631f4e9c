// Node placement, adjacency, and per-link ground-truth channel quality.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "wban/config.hpp"
#include "wban/rng.hpp"
#include "wban/types.hpp"

namespace wban {

class TopologyUnreachable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Link {
    NodeId to{};
    double distance_m = 0.0;
    double true_prr = 1.0;
};

struct Topology {
    std::vector<NodeState> nodes;
    std::vector<std::vector<Link>> adjacency;  // sorted by neighbour id
    double area_m = 0.0;
    double range_m = 0.0;

    std::size_t size() const { return nodes.size(); }
    std::size_t sensor_count() const;
    bool linked(NodeId a, NodeId b) const;
    const Link* link(NodeId from, NodeId to) const;
    std::vector<NodeId> sinks() const;
};

inline constexpr int kMaxPlacementRetries = 1000;

/// Ground-truth PRR for a link of length d: clamp(1 - 0.6 (d/range)^2, 0.5, 1)
/// plus a uniform jitter of +/-0.05, re-clamped to [0, 1].
double ground_truth_prr(double d, double range, double jitter);

/// Sink positions on opposite mid-edges of the square (left, right, bottom, top).
std::vector<Position> sink_positions(int n_sinks, double area);

/// Random uniform placement, rejection-sampled until every sensor reaches a sink.
Topology build_topology(const ScenarioConfig& cfg, Rng& rng);

/// Fixed placement: `positions` for sensors, then `sink_positions` for sinks.
/// Link PRRs come from `rng` unless `fixed_prr` is positive. No connectivity check.
Topology build_topology(std::span<const Position> positions, std::span<const Position> sinks, const ScenarioConfig& cfg,
                        Rng& rng, double fixed_prr = 0.0);

/// Sensors that can reach at least one sink over the adjacency (BFS).
std::vector<bool> sink_reachable(const Topology& topo);

}  // namespace wban
