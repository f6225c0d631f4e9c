#include "wban/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

namespace wban {

double waiting_score(int priority, double allowed_delay_s, double e_res_j)
{
    if (e_res_j <= 0.0)
        return std::numeric_limits<double>::infinity();
    return (1.0 / priority) * (allowed_delay_s / e_res_j);
}

double allowed_delay(PacketClass cls, const ScenarioConfig& cfg)
{
    switch (cls) {
    case PacketClass::emergency: return cfg.d_emergency_s;
    case PacketClass::on_demand: return cfg.d_on_demand_s;
    case PacketClass::normal: return cfg.d_normal_s;
    }
    return cfg.d_normal_s;
}

TdmaFrame allocate_slots(double frame_len_s, std::span<const double> weights, std::size_t n_active)
{
    TdmaFrame frame{frame_len_s, {}};
    if (n_active == 0 || weights.empty())
        return frame;
    const double base = frame_len_s / static_cast<double>(n_active);
    frame.slots.reserve(weights.size());
    for (double w : weights)
        frame.slots.push_back(base * w);
    const double total = std::accumulate(frame.slots.begin(), frame.slots.end(), 0.0);
    for (auto& s : frame.slots)
        s *= frame_len_s / total;
    // Put the rounding residue on the last slot so the shares sum to the frame exactly.
    const double head = std::accumulate(frame.slots.begin(), frame.slots.end() - 1, 0.0);
    frame.slots.back() = frame_len_s - head;
    return frame;
}

double emergency_weight(std::size_t emergency_count, std::size_t data_count)
{
    return data_count == 0 ? 1.0 : 1.0 + static_cast<double>(emergency_count) / static_cast<double>(data_count);
}

bool TransmitQueue::Item::operator<(const Item& o) const
{
    return std::tie(key, enqueued_at, seq) < std::tie(o.key, o.enqueued_at, o.seq);
}

double TransmitQueue::score(const QueueEntry& e, double e_res_j)
{
    return waiting_score(priority(e.packet.cls), e.allowed_delay_s, e_res_j);
}

void TransmitQueue::account(const QueueEntry& e, int sign)
{
    if (e.packet.kind != PacketKind::data)
        return;
    data_count_ = static_cast<std::size_t>(static_cast<long>(data_count_) + sign);
    if (e.packet.cls == PacketClass::emergency)
        emergency_count_ = static_cast<std::size_t>(static_cast<long>(emergency_count_) + sign);
}

void TransmitQueue::push(QueueEntry entry, double e_res_j)
{
    // Within one node every entry shares E_res, so ordering by D/P is the same
    // as ordering by the waiting score at any energy level.
    double key = -1.0;
    if (entry.packet.kind == PacketKind::data) {
        switch (policy_) {
        case QueuePolicy::waiting_score: key = entry.allowed_delay_s / priority(entry.packet.cls); break;
        case QueuePolicy::class_priority: key = 1.0 / priority(entry.packet.cls); break;
        case QueuePolicy::fifo: key = 0.0; break;
        }
    }
    entry.t_w = score(entry, e_res_j);
    account(entry, +1);
    const auto seq = entry.packet.seq;
    const auto at = entry.enqueued_at;
    items_.insert(Item{key, at, seq, std::move(entry)});
}

QueueEntry TransmitQueue::pop()
{
    auto node = items_.extract(items_.begin());
    account(node.value().entry, -1);
    return std::move(node.value().entry);
}

std::vector<QueueEntry> TransmitQueue::drop_expired(double now, double max_age_s)
{
    std::vector<QueueEntry> out;
    for (auto it = items_.begin(); it != items_.end();) {
        const auto& e = it->entry;
        const double age = now - (e.packet.kind == PacketKind::data ? e.packet.created_at : e.enqueued_at);
        if (age > max_age_s) {
            auto node = items_.extract(it++);
            account(node.value().entry, -1);
            out.push_back(std::move(node.value().entry));
        } else {
            ++it;
        }
    }
    return out;
}

std::vector<QueueEntry> TransmitQueue::take_overdue(double now)
{
    std::vector<QueueEntry> out;
    for (auto it = items_.begin(); it != items_.end();) {
        const auto& e = it->entry;
        if (e.packet.kind == PacketKind::data && now - e.enqueued_at >= e.allowed_delay_s) {
            auto node = items_.extract(it++);
            account(node.value().entry, -1);
            out.push_back(std::move(node.value().entry));
        } else {
            ++it;
        }
    }
    return out;
}

std::vector<QueueEntry> TransmitQueue::take_if(const std::function<bool(const QueueEntry&)>& pred)
{
    std::vector<QueueEntry> out;
    for (auto it = items_.begin(); it != items_.end();) {
        if (pred(it->entry)) {
            auto node = items_.extract(it++);
            account(node.value().entry, -1);
            out.push_back(std::move(node.value().entry));
        } else {
            ++it;
        }
    }
    return out;
}

std::vector<QueueEntry> TransmitQueue::clear()
{
    std::vector<QueueEntry> out;
    while (!items_.empty())
        out.push_back(pop());
    return out;
}

ReplayAction adaptive_replay(const QueueEntry& entry, const NodeState& node, const RouteState& route,
                             const ThermalParams& tp, double now)
{
    if (node.temperature_c > tp.t_thresh)
        return ReplayAction::divert_to_stable_neighbor;
    if (route.primary_congested && route.second_available)
        return ReplayAction::divert_to_second_route;
    if (entry.packet.kind == PacketKind::data && now - entry.enqueued_at >= entry.allowed_delay_s)
        return ReplayAction::forward_immediately;
    return ReplayAction::send_primary;
}

std::optional<NodeId> nearest_stable_neighbor(std::span<const NeighborCandidate> candidates)
{
    const NeighborCandidate* best = nullptr;
    for (const auto& c : candidates) {
        if (!c.awake || !c.has_sink_route)
            continue;
        if (best == nullptr ||
            std::tie(c.temperature_c, c.link_cost, c.id) < std::tie(best->temperature_c, best->link_cost, best->id))
            best = &c;
    }
    if (best == nullptr)
        return std::nullopt;
    return best->id;
}

}  // namespace wban
