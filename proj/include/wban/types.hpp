// Core domain types shared by every module of the WBAN simulator.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wban {

/// Node identifier. Sensors occupy [0, n_sensors), sinks the highest ids.
enum class NodeId : std::uint32_t {};

constexpr std::size_t index(NodeId id) { return static_cast<std::size_t>(id); }
constexpr NodeId node_id(std::size_t i) { return static_cast<NodeId>(static_cast<std::uint32_t>(i)); }

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Position& a, const Position& b);

enum class Role : std::uint8_t { sensor, sink };

/// Traffic class. The underlying value is the priority P used by the waiting score.
enum class PacketClass : std::uint8_t { normal = 1, on_demand = 2, emergency = 3 };

constexpr int priority(PacketClass c) { return static_cast<int>(c); }
std::string_view to_string(PacketClass c);

enum class PacketKind : std::uint8_t { data, control };

enum class ControlType : std::uint8_t { none, hello, hotspot_notice, route_request, route_reply, route_error, stability_probe };
std::string_view to_string(ControlType c);

struct NodeState {
    NodeId id{};
    Position position;
    Role role = Role::sensor;
    double energy_j = 0.0;
    double temperature_c = 37.0;
    bool asleep = false;
    bool dead = false;
    double tx_bits_window = 0.0;
    double rx_bits_window = 0.0;

    bool is_sink() const { return role == Role::sink; }
    /// Eligible to relay traffic for other nodes.
    bool can_relay() const { return !dead && !asleep; }
};

struct Packet {
    std::uint64_t seq = 0;
    PacketClass cls = PacketClass::normal;
    PacketKind kind = PacketKind::data;
    ControlType control = ControlType::none;
    std::uint32_t size_bits = 0;
    NodeId src{};
    std::optional<NodeId> dst;  // unset for broadcasts and "any sink" data
    double created_at = 0.0;
    std::optional<double> delivered_at;
    std::vector<NodeId> hops;
    std::vector<double> hop_times;  // arrival time at each entry of hops
    std::vector<NodeId> route;      // source route; empty for hop-by-hop forwarding
};

}  // namespace wban

template <>
struct std::hash<wban::NodeId> {
    std::size_t operator()(wban::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(static_cast<std::uint32_t>(id)); }
};
