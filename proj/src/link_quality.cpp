#include "wban/link_quality.hpp"

#include <algorithm>

namespace wban {

double update_delay(double prev, double measured, double alpha) { return prev + alpha * (measured - prev); }

bool simulate_link_delivery(double prr_true, Rng& rng)
{
    if (prr_true >= 1.0)
        return true;
    if (prr_true <= 0.0)
        return false;
    return rng.bernoulli(prr_true);
}

void NeighborTable::record_hello(const HelloPayload& h, bool link_succeeded, double now)
{
    auto it = slots_.find(h.origin);
    if (it == slots_.end()) {
        // A neighbour is discovered by its first successful HELLO.
        if (!link_succeeded)
            return;
        it = slots_.emplace(h.origin, Slot{}).first;
        it->second.entry.neighbor = h.origin;
    }
    Slot& slot = it->second;
    slot.history.push_back(link_succeeded);
    while (static_cast<int>(slot.history.size()) > window_)
        slot.history.pop_front();

    auto& e = slot.entry;
    e.sent_count = static_cast<int>(slot.history.size());
    e.recv_count = static_cast<int>(std::count(slot.history.begin(), slot.history.end(), true));
    e.prr = e.sent_count == 0 ? kPrrPrior : static_cast<double>(e.recv_count) / e.sent_count;
    if (link_succeeded) {
        e.reported_energy_j = h.energy_j;
        e.reported_temp_c = h.temperature_c;
        e.hotspot = h.hotspot;
        e.last_heard_s = now;
        slot.live = true;
    }
}

void NeighborTable::record_delay(NodeId neighbor, double sample_s, double alpha)
{
    auto it = slots_.find(neighbor);
    if (it == slots_.end())
        return;
    auto& e = it->second.entry;
    // The first sample seeds the average instead of being pulled toward zero.
    e.delay_s = e.delay_samples == 0 ? sample_s : update_delay(e.delay_s, sample_s, alpha);
    ++e.delay_samples;
}

void NeighborTable::update_report(const HelloPayload& h, double now)
{
    auto it = slots_.find(h.origin);
    if (it == slots_.end())
        return;
    auto& e = it->second.entry;
    e.reported_energy_j = h.energy_j;
    e.reported_temp_c = h.temperature_c;
    e.hotspot = h.hotspot;
    e.last_heard_s = now;
}

void NeighborTable::evict_stale(double now, double hello_interval_s)
{
    const double limit = kStaleIntervals * hello_interval_s;
    for (auto& [id, slot] : slots_)
        if (slot.live && now - slot.entry.last_heard_s >= limit - 1e-9)
            slot.live = false;
}

const NeighborEntry* NeighborTable::find(NodeId neighbor) const
{
    auto it = slots_.find(neighbor);
    return it != slots_.end() && it->second.live ? &it->second.entry : nullptr;
}

std::vector<NeighborEntry> NeighborTable::entries() const
{
    std::vector<NeighborEntry> out;
    for (const auto& [id, slot] : slots_)
        if (slot.live)
            out.push_back(slot.entry);
    return out;
}

std::size_t NeighborTable::size() const
{
    return static_cast<std::size_t>(std::count_if(slots_.begin(), slots_.end(), [](const auto& kv) { return kv.second.live; }));
}

std::vector<NodeId> NeighborTable::tracked() const
{
    std::vector<NodeId> out;
    out.reserve(slots_.size());
    for (const auto& [id, slot] : slots_)
        out.push_back(id);
    return out;
}

}  // namespace wban
