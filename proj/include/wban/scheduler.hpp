// Transmit queue ordering, TDMA slot allocation, and adaptive replay.
#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "wban/config.hpp"
#include "wban/thermal.hpp"
#include "wban/types.hpp"

namespace wban {

/// (1/P) * (D / E_res). Lower is sent earlier. A depleted node (E_res <= 0)
/// never schedules and gets +infinity.
double waiting_score(int priority, double allowed_delay_s, double e_res_j);

/// Allowed delay D for a traffic class.
double allowed_delay(PacketClass cls, const ScenarioConfig& cfg);

struct TdmaFrame {
    double frame_len_s = 0.0;
    std::vector<double> slots;  // one share per active node, in input order
};

/// s_i = (frame_len / N) * w_i, rescaled so the shares sum to frame_len.
TdmaFrame allocate_slots(double frame_len_s, std::span<const double> weights, std::size_t n_active);

/// Slot weight of a node: 1 + fraction of its queued data packets that are emergency class.
double emergency_weight(std::size_t emergency_count, std::size_t data_count);

/// How a node orders its transmit queue.
enum class QueuePolicy { waiting_score, class_priority, fifo };

struct QueueEntry {
    Packet packet;
    double enqueued_at = 0.0;
    double allowed_delay_s = 0.0;
    double t_w = 0.0;  // score at enqueue time; refreshed by TransmitQueue::score
};

/// Per-node transmit queue. Control packets always go first. Data packets are
/// ordered by the policy key, then enqueue time, then sequence number.
class TransmitQueue {
public:
    explicit TransmitQueue(QueuePolicy policy = QueuePolicy::waiting_score) : policy_(policy) {}

    void push(QueueEntry entry, double e_res_j);
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    const QueueEntry& top() const { return items_.begin()->entry; }
    QueueEntry pop();

    /// Score of an entry at the node's current residual energy.
    static double score(const QueueEntry& e, double e_res_j);

    /// Removes and returns entries older than `max_age_s`.
    std::vector<QueueEntry> drop_expired(double now, double max_age_s);

    /// Removes and returns data entries that have waited at least their allowed delay.
    std::vector<QueueEntry> take_overdue(double now);

    /// Removes everything (node died).
    std::vector<QueueEntry> clear();

    /// Removes and returns the entries matching `pred`, in queue order.
    std::vector<QueueEntry> take_if(const std::function<bool(const QueueEntry&)>& pred);

    template <class F>
    void for_each(F&& f) const
    {
        for (const auto& item : items_)
            f(item.entry);
    }

    std::size_t data_count() const { return data_count_; }
    std::size_t emergency_count() const { return emergency_count_; }
    QueuePolicy policy() const { return policy_; }

private:
    struct Item {
        double key;
        double enqueued_at;
        std::uint64_t seq;
        QueueEntry entry;
        bool operator<(const Item& o) const;
    };
    void account(const QueueEntry& e, int sign);

    QueuePolicy policy_;
    std::multiset<Item> items_;
    std::size_t data_count_ = 0;
    std::size_t emergency_count_ = 0;
};

enum class ReplayAction { send_primary, divert_to_stable_neighbor, divert_to_second_route, forward_immediately };

struct RouteState {
    bool primary_available = false;
    bool primary_congested = false;  // demoted by the congestion index
    bool second_available = false;
};

/// Replay rule for the packet at the head of a node's queue: an overheated node
/// hands off to a stable neighbour, a congested primary yields to the second
/// route, an overdue packet skips the TDMA wait.
ReplayAction adaptive_replay(const QueueEntry& entry, const NodeState& node, const RouteState& route,
                             const ThermalParams& tp, double now);

struct NeighborCandidate {
    NodeId id{};
    double temperature_c = 0.0;
    bool awake = true;
    bool has_sink_route = false;
    double link_cost = 0.0;
};

/// Coolest awake neighbour that has a sink route; ties go to lower link cost,
/// then lower id. nullopt when none qualifies.
std::optional<NodeId> nearest_stable_neighbor(std::span<const NeighborCandidate> candidates);

}  // namespace wban
