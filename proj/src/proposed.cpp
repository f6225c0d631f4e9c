// Thermal-aware multi-criteria routing with congestion demotion and adaptive replay.
#include <algorithm>
#include <cmath>
#include <limits>

#include "wban/engine.hpp"
#include "wban/protocol.hpp"
#include "wban/routing.hpp"
#include "wban/scheduler.hpp"

namespace wban {

std::unique_ptr<Protocol> make_proposed(const ScenarioConfig& cfg);

namespace {

constexpr double kNever = -std::numeric_limits<double>::infinity();
constexpr double kMetricChange = 0.10;

class Proposed final : public Protocol {
public:
    explicit Proposed(const ScenarioConfig& cfg)
        : weights_(CostWeights::from(cfg)), norms_(CostNorms::from(cfg)), cfg_(cfg)
    {
    }

    ProtocolKind kind() const override { return ProtocolKind::proposed; }
    QueuePolicy queue_policy() const override { return QueuePolicy::waiting_score; }
    bool thermal_sleep() const override { return true; }
    bool bypass_overdue() const override { return true; }
    double slot_weight(const TransmitQueue& q) const override
    {
        return emergency_weight(q.emergency_count(), q.data_count());
    }

    void on_start(Simulation& sim) override
    {
        const std::size_t n = sim.size();
        view_ = Graph(n);
        for (std::size_t i = 0; i < n; ++i)
            view_.sink[i] = sim.topology().nodes[i].is_sink();
        built_ = view_;
        primary_.assign(n, std::nullopt);
        second_.assign(n, std::nullopt);
        primary_demoted_until_.assign(n, kNever);
        second_demoted_until_.assign(n, kNever);
        relayed_.assign(n, 0);
        using_second_.assign(n, false);
    }

    void on_hello_round(Simulation& sim) override
    {
        rebuild_view(sim);
        const double now = sim.now();
        if (!window_start_) {
            window_start_ = now;
            std::fill(relayed_.begin(), relayed_.end(), 0);
        }
        if (!have_routes_)
            recompute(sim, "setup");
        else if (dirty_)
            recompute(sim, "hotspot");
        else if (changed_beyond(kMetricChange))
            recompute(sim, "metric_change");
        else if (now - last_recompute_ >= cfg_.route_refresh_s - 1e-9)
            recompute(sim, "periodic");

        if (now - *window_start_ >= cfg_.tau_s - 1e-9) {
            close_window(sim);
            window_start_ = now;
            std::fill(relayed_.begin(), relayed_.end(), 0);
        }
    }

    void on_control_received(Simulation& /*sim*/, NodeId /*at*/, const Packet& p) override
    {
        if (p.control == ControlType::hotspot_notice)
            dirty_ = true;
    }

    void on_hotspot_change(Simulation& /*sim*/, NodeId /*node*/) override { dirty_ = true; }

    Decision next_hop(Simulation& sim, NodeId at, QueueEntry& entry) override
    {
        if (dirty_ && have_routes_) {
            rebuild_view(sim);
            recompute(sim, "hotspot");
        }
        const double now = sim.now();
        const std::size_t i = index(at);
        const auto& primary = primary_[i];
        const bool second_ok = second_[i] && second_usable(sim, *second_[i]);

        RouteState rs;
        rs.primary_available = primary.has_value();
        rs.second_available = second_ok;
        rs.primary_congested = primary && second_ok && prefer_second(i, now);

        switch (adaptive_replay(entry, sim.node(at), rs, sim.thermal(), now)) {
        case ReplayAction::divert_to_stable_neighbor: {
            const auto next = stable_neighbor(sim, at, entry.packet);
            if (!next)
                return Decision::drop(DropCause::no_forwarder);
            return Decision::send(*next);
        }
        case ReplayAction::divert_to_second_route: return checked(sim, at, entry.packet, second_[i]->hops[1]);
        case ReplayAction::forward_immediately:
        case ReplayAction::send_primary: break;
        }
        if (!primary)
            return Decision::hold();
        return checked(sim, at, entry.packet, primary->hops[1]);
    }

    void on_data_result(Simulation& /*sim*/, NodeId from, NodeId /*to*/, const Packet& p, bool /*ok*/) override
    {
        if (p.src != from)
            ++relayed_[index(from)];
    }

private:
    void rebuild_view(Simulation& sim)
    {
        for (auto& edges : view_.out)
            edges.clear();
        for (std::size_t i = 0; i < sim.size(); ++i) {
            if (!sim.alive(node_id(i)))
                continue;
            const auto& entries = sim.neighbors(node_id(i)).entries();
            // A one-hop delay is mostly the sender's own queueing, so a link
            // never used yet inherits the mean of the measured ones rather than 0.
            double sum = 0.0;
            int sampled = 0;
            for (const auto& e : entries)
                if (e.delay_samples > 0) {
                    sum += e.delay_s;
                    ++sampled;
                }
            for (NeighborEntry e : entries) {
                if (e.delay_samples == 0 && sampled > 0)
                    e.delay_s = sum / sampled;
                view_.out[i].push_back({e.neighbor, link_cost(e, weights_, norms_)});
            }
        }
    }

    bool changed_beyond(double frac) const
    {
        for (std::size_t i = 0; i < view_.size(); ++i) {
            const auto& a = view_.out[i];
            const auto& b = built_.out[i];
            if (a.size() != b.size())
                return true;
            for (std::size_t k = 0; k < a.size(); ++k) {
                if (a[k].to != b[k].to)
                    return true;
                const double x = a[k].cost;
                const double y = b[k].cost;
                if (std::isinf(x) != std::isinf(y))
                    return true;
                if (!std::isinf(x) && std::abs(x - y) > frac * std::abs(y))
                    return true;
            }
        }
        return false;
    }

    void recompute(Simulation& sim, const char* trigger)
    {
        built_ = view_;
        dirty_ = false;
        have_routes_ = true;
        last_recompute_ = sim.now();
        auto routes = route_tree(view_);
        for (std::size_t i = 0; i < routes.size(); ++i) {
            if (view_.sink[i])
                continue;
            const bool changed = routes[i].has_value() != primary_[i].has_value() ||
                                 (routes[i] && !(routes[i]->hops == primary_[i]->hops));
            primary_[i] = std::move(routes[i]);
            if (second_[i] && !second_usable(sim, *second_[i]))
                second_[i].reset();
            if (changed && sim.tracing_routes() && primary_[i] && !using_second_[i])
                sim.trace_route({sim.now(), node_id(i), primary_[i]->hops, primary_[i]->cost, trigger});
        }
    }

    bool second_usable(const Simulation& /*sim*/, const Route& r) const
    {
        if (r.hops.size() < 2)
            return false;
        return path_cost(view_, r.hops) < kInfiniteCost;
    }

    double route_rci(const Route& r) const
    {
        std::uint64_t worst = 0;
        for (std::size_t k = 1; k + 1 < r.hops.size(); ++k)
            worst = std::max(worst, relayed_[index(r.hops[k])]);
        return update_rci(r, static_cast<double>(worst), cfg_.tau_s).rci;
    }

    bool prefer_second(std::size_t i, double now) const
    {
        const double p = primary_[i]->cost * (now < primary_demoted_until_[i] ? cfg_.demotion_factor : 1.0);
        const double s = second_[i]->cost * (now < second_demoted_until_[i] ? cfg_.demotion_factor : 1.0);
        return s < p;
    }

    void close_window(Simulation& sim)
    {
        const double now = sim.now();
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < primary_.size(); ++i) {
            second_[i].reset();
            if (!primary_[i] || primary_[i]->hops.size() < 3)
                continue;
            NodeSet avoid(primary_[i]->hops.begin() + 1, primary_[i]->hops.end() - 1);
            second_[i] = find_route(node_id(i), view_, avoid);
            if (second_[i] && second_[i]->hops.size() < 2)
                second_[i].reset();
            primary_[i]->rci = route_rci(*primary_[i]);
            total += primary_[i]->rci;
            ++count;
            if (second_[i]) {
                second_[i]->rci = route_rci(*second_[i]);
                total += second_[i]->rci;
                ++count;
            }
        }
        if (!threshold_) {
            if (count > 0 && total > 0.0)
                threshold_ = congestion_threshold(total / static_cast<double>(count), cfg_.lambda);
            return;
        }
        for (std::size_t i = 0; i < primary_.size(); ++i) {
            if (!primary_[i])
                continue;
            const bool was_second = using_second_[i];
            primary_demoted_until_[i] = primary_[i]->rci > *threshold_ ? now + cfg_.tau_s : kNever;
            second_demoted_until_[i] = second_[i] && second_[i]->rci > *threshold_ ? now + cfg_.tau_s : kNever;
            using_second_[i] = second_[i] && prefer_second(i, now);
            if (sim.tracing_routes() && was_second != using_second_[i]) {
                const Route& r = using_second_[i] ? *second_[i] : *primary_[i];
                sim.trace_route({now, node_id(i), r.hops, r.cost, using_second_[i] ? "congestion" : "demotion_expiry"});
            }
        }
    }

    Decision checked(Simulation& /*sim*/, NodeId at, const Packet& p, NodeId next)
    {
        if (std::find(p.hops.begin(), p.hops.end(), next) == p.hops.end())
            return Decision::send(next);
        // The cached next hop was already visited: search again around the trace.
        NodeSet visited(p.hops.begin(), p.hops.end());
        visited.erase(at);
        const auto r = find_route(at, view_, visited);
        if (!r || r->hops.size() < 2)
            return Decision::hold();
        return Decision::send(r->hops[1]);
    }

    std::optional<NodeId> stable_neighbor(Simulation& sim, NodeId at, const Packet& p) const
    {
        std::vector<NeighborCandidate> cands;
        for (const auto& e : sim.neighbors(at).entries()) {
            if (std::find(p.hops.begin(), p.hops.end(), e.neighbor) != p.hops.end())
                continue;
            const bool sink = view_.sink[index(e.neighbor)];
            NeighborCandidate c;
            c.id = e.neighbor;
            c.temperature_c = sink ? cfg_.t_body_c : e.reported_temp_c;
            c.awake = sink || !e.hotspot;
            c.has_sink_route = sink || primary_[index(e.neighbor)].has_value();
            c.link_cost = link_cost(e, weights_, norms_);
            cands.push_back(c);
        }
        return nearest_stable_neighbor(cands);
    }

    CostWeights weights_;
    CostNorms norms_;
    ScenarioConfig cfg_;
    Graph view_;
    Graph built_;  // view the current routes were computed on
    std::vector<std::optional<Route>> primary_;
    std::vector<std::optional<Route>> second_;
    std::vector<double> primary_demoted_until_;
    std::vector<double> second_demoted_until_;
    std::vector<std::uint64_t> relayed_;
    std::vector<bool> using_second_;
    std::optional<double> threshold_;
    std::optional<double> window_start_;
    double last_recompute_ = 0.0;
    bool have_routes_ = false;
    bool dirty_ = false;
};

}  // namespace

std::unique_ptr<Protocol> make_proposed(const ScenarioConfig& cfg) { return std::make_unique<Proposed>(cfg); }

}  // namespace wban
