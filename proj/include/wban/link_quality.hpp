// Neighbour state acquisition: HELLO accounting, PRR estimation, EWMA delay.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "wban/rng.hpp"
#include "wban/types.hpp"

namespace wban {

struct HelloPayload {
    NodeId origin{};
    double energy_j = 0.0;
    double temperature_c = 0.0;
    bool hotspot = false;
    double timestamp_s = 0.0;
};

struct NeighborEntry {
    NodeId neighbor{};
    double prr = 1.0;
    double delay_s = 0.0;
    int delay_samples = 0;  // data hops measured over this link
    double reported_energy_j = 0.0;
    double reported_temp_c = 0.0;
    bool hotspot = false;
    double last_heard_s = 0.0;
    int sent_count = 0;  // expected HELLO slots inside the window
    int recv_count = 0;  // received HELLOs inside the window
};

/// Optimistic prior used before any HELLO slot has been observed.
inline constexpr double kPrrPrior = 1.0;

/// Number of silent hello intervals after which a neighbour is dropped.
inline constexpr int kStaleIntervals = 3;

/// (1 - alpha) * prev + alpha * measured
double update_delay(double prev, double measured, double alpha);

/// Bernoulli(prr_true) draw for one transmission attempt.
bool simulate_link_delivery(double prr_true, Rng& rng);

/// What one node knows about its neighbours. PRR is the received/expected
/// ratio over the most recent `window` HELLO slots.
class NeighborTable {
public:
    explicit NeighborTable(int window = 20) : window_(window) {}

    /// One expected HELLO slot from `h.origin`. The payload is only read on success.
    void record_hello(const HelloPayload& h, bool link_succeeded, double now);

    /// Refreshes the reported state of a known neighbour without counting a HELLO slot.
    void update_report(const HelloPayload& h, double now);

    /// Folds a one-hop delay sample into the neighbour's EWMA.
    void record_delay(NodeId neighbor, double sample_s, double alpha);

    /// Hides neighbours not heard for kStaleIntervals hello intervals.
    void evict_stale(double now, double hello_interval_s);

    /// Live entry for `neighbor`, or nullptr when unknown or evicted.
    const NeighborEntry* find(NodeId neighbor) const;

    std::vector<NeighborEntry> entries() const;
    std::size_t size() const;
    int window() const { return window_; }

    /// Neighbours this node expects HELLOs from, including evicted ones still tracked.
    std::vector<NodeId> tracked() const;

private:
    struct Slot {
        NeighborEntry entry;
        std::deque<bool> history;
        bool live = false;
    };
    int window_;
    std::map<NodeId, Slot> slots_;
};

}  // namespace wban
