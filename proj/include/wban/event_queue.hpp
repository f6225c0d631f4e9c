// Min-ordered event queue keyed by (time, insertion sequence).
#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

namespace wban {

/// Internal consistency failure inside a run (time travel, broken ledger, ...).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

template <class Payload>
class EventQueue {
public:
    struct Event {
        double time_s = 0.0;
        std::uint64_t seq = 0;
        Payload payload{};
    };

    /// Returns the sequence number assigned to the event.
    std::uint64_t schedule(double time_s, Payload payload)
    {
        if (time_s < now_)
            throw InvariantViolation("event scheduled in the past");
        const auto seq = next_seq_++;
        heap_.push(Event{time_s, seq, std::move(payload)});
        return seq;
    }

    Event next_event()
    {
        Event e = heap_.top();
        heap_.pop();
        now_ = e.time_s;
        return e;
    }

    const Event& peek() const { return heap_.top(); }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    double now() const { return now_; }

    template <class F>
    void for_each(F&& f) const
    {
        // priority_queue hides its container; copy for inspection.
        auto copy = heap_;
        while (!copy.empty()) {
            f(copy.top());
            copy.pop();
        }
    }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            return a.time_s != b.time_s ? a.time_s > b.time_s : a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    double now_ = 0.0;
};

}  // namespace wban
