// Multi-criteria path selection, hotspot exclusion, and route congestion index.
#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "wban/config.hpp"
#include "wban/link_quality.hpp"
#include "wban/types.hpp"

namespace wban {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

/// Weights for temperature, inverse PRR, inverse energy and delay.
struct CostWeights {
    double w1 = 0.3;
    double w2 = 0.3;
    double w3 = 0.2;
    double w4 = 0.2;

    /// Scales the weights to sum to one. Throws ValidationError if all are zero or any is negative.
    static CostWeights normalized(double w1, double w2, double w3, double w4);
    static CostWeights from(const ScenarioConfig& cfg);
};

/// Turns the raw link metrics into comparable dimensionless terms:
/// T^ = max(0, (T - T_b) / (T_thresh - T_b)), E^ = E / E_initial, D^ = D / D_ref.
struct CostNorms {
    double t_body = 37.0;
    double t_thresh = 39.0;
    double e_initial = 100.0;
    double d_ref = 0.1;
    bool raw = false;  // use degC, joules and seconds unscaled

    static CostNorms from(const ScenarioConfig& cfg);
};

/// Cost of forwarding over the link described by `entry` (the next hop's last
/// report). Hotspot, depleted, or zero-PRR next hops cost kInfiniteCost.
double link_cost(const NeighborEntry& entry, const CostWeights& w, const CostNorms& norms);

struct Edge {
    NodeId to{};
    double cost = 0.0;
};

/// Directed, cost-annotated adjacency. Edges are kept sorted by target id.
struct Graph {
    std::vector<std::vector<Edge>> out;
    std::vector<bool> sink;

    explicit Graph(std::size_t n = 0) : out(n), sink(n, false) {}
    std::size_t size() const { return out.size(); }
    void add_edge(NodeId from, NodeId to, double cost);
    std::optional<double> edge_cost(NodeId from, NodeId to) const;
};

struct Route {
    std::vector<NodeId> hops;  // source first, sink last
    double cost = 0.0;
    double rci = 0.0;
    std::optional<double> demoted_until;

    std::size_t hop_count() const { return hops.empty() ? 0 : hops.size() - 1; }
    bool demoted(double now) const { return demoted_until && now < *demoted_until; }
    bool contains(NodeId id) const;
    bool operator==(const Route& o) const { return hops == o.hops; }
};

using NodeSet = std::unordered_set<NodeId>;

/// Minimum-cost path from `src` to the cheapest reachable sink, never passing
/// through a node in `excluded` (the source itself may be excluded). Ties go to
/// fewer hops, then the lower maximum node id on the path.
std::optional<Route> find_route(NodeId src, const Graph& graph, const NodeSet& excluded = {});

/// Best route to a sink for every node at once (one reverse search rooted at
/// the sinks). Same cost and tie-breaking as find_route.
std::vector<std::optional<Route>> route_tree(const Graph& graph, const NodeSet& excluded = {});

/// Removes every edge incident to a hotspot node. Sinks and `source` keep
/// their edges.
Graph exclude_hotspots(const Graph& graph, const NodeSet& hotspots, std::optional<NodeId> source = std::nullopt);

/// Path cost recomputed from the graph; kInfiniteCost if an edge is missing.
double path_cost(const Graph& graph, const std::vector<NodeId>& hops);

/// rci = packets / tau
Route update_rci(Route route, double packets_sent_in_window, double tau_s);

/// lambda * mean_rci
double congestion_threshold(double mean_rci, double lambda);

/// One route decision for the route-trace log.
struct RouteTrace {
    double time_s = 0.0;
    NodeId src{};
    std::vector<NodeId> hops;
    double cost = 0.0;
    std::string trigger;
};

/// `time<TAB>src<TAB>h0-h1-...<TAB>cost<TAB>trigger`
std::string format_route_trace(const RouteTrace& t);
RouteTrace parse_route_trace(const std::string& line);

}  // namespace wban
