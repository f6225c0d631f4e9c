#include "wban/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace wban {

std::string format_event(const EventRecord& r)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9f", r.time_s);
    std::ostringstream os;
    os << buf << '\t' << r.kind << '\t' << r.node << '\t' << r.seq << '\t' << r.detail;
    return os.str();
}

EventRecord parse_event(const std::string& line)
{
    std::istringstream is(line);
    EventRecord r;
    std::string time, node, seq;
    if (!std::getline(is, time, '\t') || !std::getline(is, r.kind, '\t') || !std::getline(is, node, '\t') ||
        !std::getline(is, seq, '\t'))
        throw ParseError("malformed event record");
    std::getline(is, r.detail);
    r.time_s = std::stod(time);
    r.node = static_cast<std::uint32_t>(std::stoul(node));
    r.seq = std::stoull(seq);
    return r;
}

namespace {

Topology make_topology(const ScenarioConfig& cfg, RunOptions& options)
{
    if (options.topology) {
        Topology t = std::move(*options.topology);
        options.topology.reset();
        return t;
    }
    Rng rng(cfg.rng_seed, Stream::topology);
    return build_topology(cfg, rng);
}

std::string fmt(const char* f, double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& cfg, RunOptions options)
    : cfg_(cfg),
      options_(std::move(options)),
      energy_(EnergyParams::from(cfg)),
      thermal_(ThermalParams::from(cfg)),
      topo_(make_topology(cfg_, options_)),
      protocol_(make_protocol(cfg.protocol, cfg)),
      traffic_rng_(cfg.rng_seed, Stream::traffic),
      class_rng_(cfg.rng_seed, Stream::classes),
      link_rng_(cfg.rng_seed, Stream::link_loss),
      hello_rng_(cfg.rng_seed, Stream::hello),
      control_rng_(cfg.rng_seed, Stream::control)
{
    const std::size_t n = topo_.size();
    tables_.assign(n, NeighborTable(cfg_.prr_window));
    queues_.assign(n, TransmitQueue(protocol_->queue_policy()));
    deficit_.assign(n, 0.0);
    window_energy_.assign(n, 0.0);
    spent_.assign(n, CompensatedSum{});
    heard_.assign(n, {});
    rates_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (topo_.nodes[i].is_sink())
            continue;
        rates_[i] = options_.node_rates.empty() ? cfg_.rate_pkts_per_s
                                                 : (i < options_.node_rates.size() ? options_.node_rates[i] : 0.0);
    }
    counters_.peak_temperature_c.resize(n);
    counters_.initial_energy_j.resize(n);
    counters_.is_sensor.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        counters_.peak_temperature_c[i] = topo_.nodes[i].temperature_c;
        counters_.initial_energy_j[i] = topo_.nodes[i].energy_j;
        counters_.is_sensor[i] = !topo_.nodes[i].is_sink();
    }
    hello_interval_ = protocol_->hello_interval(cfg_);
}

Simulation::~Simulation() = default;

void Simulation::schedule(double t, EventData e) { events_.schedule(t, e); }

void Simulation::log(std::string_view kind, NodeId node, std::uint64_t seq, const std::string& detail)
{
    if (options_.event_log == nullptr)
        return;
    *options_.event_log << format_event({now_, std::string(kind), static_cast<std::uint32_t>(index(node)), seq, detail})
                        << '\n';
}

void Simulation::trace_route(RouteTrace t)
{
    if (options_.trace_routes)
        diag_.route_trace.push_back(std::move(t));
}

RunResult Simulation::run()
{
    RunResult out;
    if (cfg_.sim_time_s > 0.0) {
        for (std::size_t i = 0; i < topo_.size(); ++i)
            if (rates_[i] > 0.0)
                schedule(traffic_rng_.uniform() / rates_[i], {EventKind::packet_origin, static_cast<std::uint32_t>(i)});
        schedule(0.0, {EventKind::hello_tick});
        schedule(0.0, {EventKind::tdma_frame});
        schedule(thermal_.dt, {EventKind::thermal_tick});
        protocol_->on_start(*this);

        while (!events_.empty() && events_.peek().time_s < cfg_.sim_time_s) {
            auto ev = events_.next_event();
            if (ev.time_s < now_)
                throw InvariantViolation("event time went backwards");
            now_ = ev.time_s;
            ++event_count_;
            handle(ev.payload);
        }
    }
    finish(out);
    return out;
}

void Simulation::handle(const EventData& e)
{
    switch (e.kind) {
    case EventKind::packet_origin: on_origin(node_id(e.node)); break;
    case EventKind::hello_tick: on_hello_tick(); break;
    case EventKind::tdma_frame: on_frame(); break;
    case EventKind::tdma_slot: on_slot(node_id(e.node), e.value); break;
    case EventKind::thermal_tick: on_thermal_tick(); break;
    case EventKind::link_delivery: on_delivery(e.transit); break;
    }
}

double Simulation::tx_time(const Packet& p) const { return p.size_bits / cfg_.link_rate_bps; }

HelloPayload Simulation::payload_of(NodeId id) const
{
    const auto& n = node(id);
    return {id, n.is_sink() ? cfg_.initial_energy_j : n.energy_j, n.temperature_c, n.asleep, now_};
}

void Simulation::on_origin(NodeId id)
{
    if (!alive(id))
        return;
    Packet p;
    p.seq = next_seq_++;
    const double u = class_rng_.uniform();
    p.cls = u < cfg_.frac_emergency                         ? PacketClass::emergency
            : u < cfg_.frac_emergency + cfg_.frac_on_demand ? PacketClass::on_demand
                                                            : PacketClass::normal;
    p.kind = PacketKind::data;
    p.size_bits = cfg_.packet_bits();
    p.src = id;
    p.created_at = now_;
    p.hops = {id};
    p.hop_times = {now_};
    ++counters_.originated[class_index(p.cls)];
    log("packet_origin", id, p.seq, std::string(to_string(p.cls)));
    enqueue(id, std::move(p));
    schedule(now_ + 1.0 / rates_[index(id)], {EventKind::packet_origin, static_cast<std::uint32_t>(index(id))});
}

void Simulation::enqueue(NodeId at, Packet p)
{
    QueueEntry e;
    e.allowed_delay_s = p.kind == PacketKind::data ? allowed_delay(p.cls, cfg_) : 0.0;
    e.enqueued_at = now_;
    e.packet = std::move(p);
    auto& n = node(at);
    queues_[index(at)].push(std::move(e), n.is_sink() ? cfg_.initial_energy_j : n.energy_j);
}

void Simulation::send_control(NodeId from, ControlType type, std::optional<NodeId> dst)
{
    if (!alive(from))
        return;
    Packet p;
    p.seq = next_seq_++;
    p.kind = PacketKind::control;
    p.control = type;
    p.size_bits = cfg_.hello_bits();
    p.src = from;
    p.dst = dst;
    p.created_at = now_;
    enqueue(from, std::move(p));
}

void Simulation::drop(const Packet& p, DropCause cause, NodeId at)
{
    if (p.kind != PacketKind::data)
        return;
    ++counters_.dropped[static_cast<std::size_t>(cause)][class_index(p.cls)];
    log("drop", at, p.seq, std::string(to_string(cause)));
}

double Simulation::charge(NodeId id, double joules)
{
    auto& n = topo_.nodes[index(id)];
    if (n.is_sink() || n.dead || joules <= 0.0)
        return 0.0;
    const double debit = std::min(n.energy_j, joules);
    const std::size_t i = index(id);
    spent_[i].add(debit);
    ledger_.add(debit);
    n.energy_j = debit >= n.energy_j ? 0.0 : counters_.initial_energy_j[i] - spent_[i].value();
    window_energy_[i] += debit;
    if (n.energy_j <= 0.0) {
        n.energy_j = 0.0;
        kill(id);
    }
    return debit;
}

void Simulation::kill(NodeId id)
{
    auto& n = topo_.nodes[index(id)];
    n.dead = true;
    for (const auto& e : queues_[index(id)].clear())
        drop(e.packet, DropCause::dead_node, id);
    log("node_death", id, 0, "");
    protocol_->on_node_death(*this, id);
}

void Simulation::on_hello_tick()
{
    if (now_ > 0.0) {
        for (std::size_t j = 0; j < topo_.size(); ++j) {
            auto heard = std::move(heard_[j]);
            heard_[j].clear();
            if (topo_.nodes[j].dead)
                continue;
            auto& table = tables_[j];
            std::vector<NodeId> got;
            for (const auto& [from, payload] : heard) {
                if (std::find(got.begin(), got.end(), from) != got.end())
                    continue;
                got.push_back(from);
                table.record_hello(payload, true, now_);
            }
            for (NodeId t : table.tracked())
                if (std::find(got.begin(), got.end(), t) == got.end())
                    table.record_hello(HelloPayload{t}, false, now_);
            table.evict_stale(now_, hello_interval_);
        }
        protocol_->on_hello_round(*this);
    }
    for (std::size_t i = 0; i < topo_.size(); ++i)
        if (!topo_.nodes[i].dead)
            send_control(node_id(i), ControlType::hello);
    schedule(now_ + hello_interval_, {EventKind::hello_tick});
}

void Simulation::on_frame()
{
    ++diag_.frames;
    const std::size_t n = topo_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (topo_.nodes[i].dead)
            continue;
        for (const auto& e : queues_[i].drop_expired(now_, cfg_.max_age_s))
            drop(e.packet, DropCause::expired, node_id(i));
    }

    if (protocol_->bypass_overdue()) {
        // Packets past their allowed delay go out at the head of the frame,
        // most urgent first, as long as they finish inside this frame.
        struct Overdue {
            std::size_t node;
            QueueEntry entry;
        };
        std::vector<Overdue> overdue;
        for (std::size_t i = 0; i < n; ++i) {
            if (topo_.nodes[i].dead || topo_.nodes[i].is_sink())
                continue;
            for (auto& e : queues_[i].take_overdue(now_))
                overdue.push_back({i, std::move(e)});
        }
        std::stable_sort(overdue.begin(), overdue.end(), [](const Overdue& a, const Overdue& b) {
            const int pa = priority(a.entry.packet.cls);
            const int pb = priority(b.entry.packet.cls);
            return pa != pb ? pa > pb : a.entry.enqueued_at < b.entry.enqueued_at;
        });
        const double frame_end = now_ + cfg_.frame_len_s;
        for (auto& [i, e] : overdue) {
            const NodeId id = node_id(i);
            if (topo_.nodes[i].dead) {
                drop(e.packet, DropCause::dead_node, id);
                continue;
            }
            const bool room = std::max(now_, busy_until_) + tx_time(e.packet) <= frame_end;
            const Decision d = room ? protocol_->next_hop(*this, id, e) : Decision::hold();
            switch (d.action) {
            case Decision::Action::send: transmit(id, std::move(e), d.next); break;
            case Decision::Action::drop: drop(e.packet, d.cause, id); break;
            case Decision::Action::hold: queues_[i].push(std::move(e), topo_.nodes[i].energy_j); break;
            }
        }
    }

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i)
        if (!topo_.nodes[i].dead && !queues_[i].empty())
            active.push_back(i);
    if (!active.empty()) {
        std::rotate(active.begin(), active.begin() + static_cast<std::ptrdiff_t>(frame_index_ % active.size()),
                    active.end());
        std::vector<double> weights;
        weights.reserve(active.size());
        for (std::size_t i : active)
            weights.push_back(protocol_->slot_weight(queues_[i]));
        const TdmaFrame frame = allocate_slots(cfg_.frame_len_s, weights, active.size());
        double sum = 0.0;
        for (double s : frame.slots)
            sum += s;
        diag_.max_slot_sum_error_s = std::max(diag_.max_slot_sum_error_s, std::abs(sum - cfg_.frame_len_s));
        double t = now_;
        for (std::size_t k = 0; k < active.size(); ++k) {
            schedule(t, {EventKind::tdma_slot, static_cast<std::uint32_t>(active[k]), frame.slots[k]});
            t += frame.slots[k];
        }
        log("tdma_frame", NodeId{}, frame_index_, "active=" + std::to_string(active.size()));
    }
    ++frame_index_;
    schedule(now_ + cfg_.frame_len_s, {EventKind::tdma_frame});
}

void Simulation::on_slot(NodeId id, double quantum)
{
    const std::size_t i = index(id);
    if (topo_.nodes[i].dead)
        return;
    auto& q = queues_[i];
    const double window_end = now_ + quantum;
    // A packet longer than the whole slot may only go out at the start of a
    // window, once the node has banked enough slot time for it.
    deficit_[i] += quantum;
    auto fits = [&](double t) {
        const double start = std::max(now_, busy_until_);
        if (t > quantum)
            return start <= now_ && deficit_[i] >= t;
        return start + t <= window_end + 1e-12;
    };
    std::vector<QueueEntry> held;
    while (!q.empty() && !topo_.nodes[i].dead) {
        QueueEntry e = q.pop();
        const double t = tx_time(e.packet);
        if (e.packet.kind == PacketKind::control) {
            if (!fits(t)) {
                held.push_back(std::move(e));
                break;
            }
            if (t > quantum)
                deficit_[i] = 0.0;
            const auto dst = e.packet.dst;
            transmit(id, std::move(e), dst);
            continue;
        }
        const Decision d = protocol_->next_hop(*this, id, e);
        if (d.action == Decision::Action::hold) {
            held.push_back(std::move(e));
            continue;
        }
        if (d.action == Decision::Action::drop) {
            drop(e.packet, d.cause, id);
            continue;
        }
        if (!fits(t)) {
            held.push_back(std::move(e));
            break;
        }
        if (t > quantum)
            deficit_[i] = 0.0;
        transmit(id, std::move(e), d.next);
    }
    if (topo_.nodes[i].dead) {
        for (const auto& e : held)
            drop(e.packet, DropCause::dead_node, id);
        return;
    }
    for (auto& e : held)
        q.push(std::move(e), topo_.nodes[i].energy_j);
    if (q.empty())
        deficit_[i] = 0.0;
}

void Simulation::transmit(NodeId from, QueueEntry entry, std::optional<NodeId> to)
{
    Packet& p = entry.packet;
    const double start = std::max(now_, busy_until_);
    if (start < busy_until_)
        ++diag_.medium_overlaps;
    const double duration = tx_time(p);
    busy_until_ = start + duration;

    double d = topo_.range_m;
    if (to)
        if (const Link* l = topo_.link(from, *to))
            d = l->distance_m;
    const auto& sender = node(from);
    const bool relay = p.kind == PacketKind::data && p.src != from;
    const bool hot = sender.asleep || sender.temperature_c > thermal_.t_thresh;
    if (relay && hot)
        ++diag_.hot_relays;
    if (relay && sender.asleep)
        slept_relayed_.insert(p.seq);

    Transit t;
    t.from = from;
    t.to = to;
    t.enqueued_at = entry.enqueued_at;
    t.active = true;
    if (p.kind == PacketKind::control) {
        ++counters_.control_tx;
        t.hello = payload_of(from);
    } else {
        ++counters_.data_tx;
    }
    const std::uint64_t seq = p.seq;
    const bool is_data = p.kind == PacketKind::data;
    const std::string what = is_data ? std::string("data") : std::string(to_string(p.control));
    t.packet = std::move(p);

    std::size_t slot;
    if (!free_transits_.empty()) {
        slot = free_transits_.back();
        free_transits_.pop_back();
        transits_[slot] = std::move(t);
    } else {
        slot = transits_.size();
        transits_.push_back(std::move(t));
    }
    schedule(start + duration, {EventKind::link_delivery, static_cast<std::uint32_t>(index(from)), 0.0, slot});

    const double debit = charge(from, tx_energy(transits_[slot].packet.size_bits, d, energy_));
    if (options_.event_log != nullptr)
        log("tx", from, seq,
            what + " to=" + (to ? std::to_string(index(*to)) : std::string("*")) + " start=" + fmt("%.9f", start) +
                " energy=" + fmt("%.17g", debit));
}

void Simulation::on_delivery(std::size_t k)
{
    Transit t = std::move(transits_[k]);
    transits_[k].active = false;
    free_transits_.push_back(k);
    Packet& p = t.packet;

    if (p.kind == PacketKind::control) {
        auto receive = [&](NodeId j) {
            const double debit = charge(j, rx_energy(p.size_bits, energy_));
            if (options_.event_log != nullptr)
                log("rx", j, p.seq, std::string(to_string(p.control)) + " energy=" + fmt("%.17g", debit));
            if (!alive(j))
                return;
            if (p.control == ControlType::hello)
                heard_[index(j)].emplace_back(t.from, t.hello);
            else if (p.control == ControlType::hotspot_notice)
                tables_[index(j)].update_report(t.hello, now_);
            protocol_->on_control_received(*this, j, p);
        };
        if (!t.to) {
            for (const Link& l : topo_.adjacency[index(t.from)]) {
                const bool ok = hello_rng_.bernoulli(l.true_prr);
                if (ok && alive(l.to))
                    receive(l.to);
            }
        } else {
            const Link* l = topo_.link(t.from, *t.to);
            const bool ok = l != nullptr && hello_rng_.bernoulli(l->true_prr);
            if (ok && alive(*t.to))
                receive(*t.to);
        }
        return;
    }

    const NodeId j = *t.to;
    const Link* l = topo_.link(t.from, j);
    const bool link_ok = l != nullptr && link_rng_.bernoulli(l->true_prr);
    const auto& rx = node(j);
    DropCause cause = DropCause::link_loss;
    bool ok = false;
    if (rx.dead)
        cause = DropCause::dead_node;
    else if (!link_ok)
        cause = DropCause::link_loss;
    else if (!rx.is_sink() && rx.asleep)
        cause = DropCause::refused_sleeping;
    else
        ok = true;

    if (!ok) {
        protocol_->on_data_result(*this, t.from, j, p, false);
        drop(p, cause, t.from);
        return;
    }

    const double debit = charge(j, rx_energy(p.size_bits, energy_));
    if (!p.hop_times.empty() && !(now_ > p.hop_times.back()))
        ++diag_.causality_violations;
    p.hops.push_back(j);
    p.hop_times.push_back(now_);
    tables_[index(t.from)].record_delay(j, now_ - t.enqueued_at, cfg_.ewma_alpha);
    protocol_->on_data_result(*this, t.from, j, p, true);

    if (rx.is_sink()) {
        const std::size_t c = class_index(p.cls);
        const double delay = now_ - p.created_at;
        ++counters_.delivered[c];
        counters_.delay_sum_s[c] += delay;
        counters_.delivered_bits += p.size_bits;
        if (counters_.min_delay_s == 0.0 || delay < counters_.min_delay_s)
            counters_.min_delay_s = delay;
        if (slept_relayed_.contains(p.seq))
            ++diag_.delivered_via_sleeping;
        p.delivered_at = now_;
        if (options_.keep_paths)
            diag_.delivered_paths.push_back(p.hops);
        if (options_.event_log != nullptr)
            log("deliver", j, p.seq, "delay=" + fmt("%.9f", delay) + " hops=" + std::to_string(p.hops.size() - 1));
        return;
    }
    if (options_.event_log != nullptr)
        log("rx", j, p.seq, "data energy=" + fmt("%.17g", debit));
    if (rx.dead) {
        drop(p, DropCause::dead_node, j);
        return;
    }
    enqueue(j, std::move(p));
}

void Simulation::notify_hotspot(NodeId id)
{
    send_control(id, ControlType::hotspot_notice);
    protocol_->on_hotspot_change(*this, id);
}

void Simulation::on_thermal_tick()
{
    const bool sleep = protocol_->thermal_sleep();
    for (std::size_t i = 0; i < topo_.size(); ++i) {
        auto& n = topo_.nodes[i];
        if (n.is_sink() || n.dead) {
            window_energy_[i] = 0.0;
            continue;
        }
        n.temperature_c = step_temperature(n.temperature_c, window_energy_[i], thermal_);
        window_energy_[i] = 0.0;
        counters_.peak_temperature_c[i] = std::max(counters_.peak_temperature_c[i], n.temperature_c);
        if (!sleep)
            continue;
        const NodeId id = node_id(i);
        switch (classify_hotspot(n, thermal_)) {
        case HotspotDecision::enter_sleep: {
            n.asleep = true;
            ++diag_.sleep_entries;
            diag_.max_toggles_per_step = std::max<std::uint64_t>(diag_.max_toggles_per_step, 1);
            for (const auto& e : queues_[i].take_if(
                     [id](const QueueEntry& q) { return q.packet.kind == PacketKind::data && q.packet.src != id; }))
                drop(e.packet, DropCause::hotspot_flush, id);
            log("sleep", id, 0, fmt("T=%.6f", n.temperature_c));
            notify_hotspot(id);
            break;
        }
        case HotspotDecision::wake:
            n.asleep = false;
            diag_.max_toggles_per_step = std::max<std::uint64_t>(diag_.max_toggles_per_step, 1);
            log("wake", id, 0, fmt("T=%.6f", n.temperature_c));
            notify_hotspot(id);
            break;
        case HotspotDecision::stay: break;
        }
    }
    schedule(now_ + thermal_.dt, {EventKind::thermal_tick});
}

void Simulation::finish(RunResult& out)
{
    for (const auto& q : queues_)
        q.for_each([&](const QueueEntry& e) {
            if (e.packet.kind == PacketKind::data)
                ++counters_.in_flight[class_index(e.packet.cls)];
        });
    for (const auto& t : transits_)
        if (t.active && t.packet.kind == PacketKind::data)
            ++counters_.in_flight[class_index(t.packet.cls)];

    counters_.final_energy_j.resize(topo_.size());
    counters_.spent_energy_j.resize(topo_.size());
    CompensatedSum balances;
    for (std::size_t i = 0; i < topo_.size(); ++i) {
        counters_.final_energy_j[i] = topo_.nodes[i].energy_j;
        counters_.spent_energy_j[i] = spent_[i].value();
        if (!topo_.nodes[i].is_sink())
            balances.add(spent_[i].value());
    }
    const double consumed = balances.value();
    diag_.energy_ledger_j = ledger_.value();

    for (std::size_t c = 0; c < kClasses; ++c) {
        std::uint64_t dropped = 0;
        for (const auto& by_class : counters_.dropped)
            dropped += by_class[c];
        if (counters_.originated[c] != counters_.delivered[c] + dropped + counters_.in_flight[c])
            throw InvariantViolation("packet accounting does not close for class " +
                                     std::string(to_string(static_cast<PacketClass>(c + 1))));
    }
    if (std::abs(consumed - diag_.energy_ledger_j) > 1e-9 * std::max(consumed, 1e-300) && consumed > 0.0)
        throw InvariantViolation("energy ledger disagrees with node balances");
    if (diag_.causality_violations != 0)
        throw InvariantViolation("hop timestamps not strictly increasing");

    out.counters = counters_;
    out.metrics = compute_metrics(counters_, cfg_);
    out.diagnostics = std::move(diag_);
    out.event_count = event_count_;
    out.final_nodes = topo_.nodes;
    out.seed = cfg_.rng_seed;
}

RunResult run(const ScenarioConfig& cfg, RunOptions options)
{
    validate(cfg);
    Simulation sim(cfg, std::move(options));
    return sim.run();
}

}  // namespace wban
