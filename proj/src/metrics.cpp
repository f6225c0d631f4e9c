#include "wban/metrics.hpp"

#include "wban/compensated_sum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wban {

std::string_view to_string(DropCause c)
{
    switch (c) {
    case DropCause::link_loss: return "link_loss";
    case DropCause::no_route: return "no_route";
    case DropCause::expired: return "expired";
    case DropCause::no_forwarder: return "no_forwarder";
    case DropCause::dead_node: return "dead_node";
    case DropCause::hotspot_flush: return "hotspot_flush";
    case DropCause::refused_sleeping: return "refused_sleeping";
    }
    return "unknown";
}

namespace {

template <class A>
std::uint64_t sum(const A& a)
{
    std::uint64_t s = 0;
    for (auto v : a)
        s += v;
    return s;
}

std::string num(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string("NA"); }

double to_double(const std::string& s)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("bad number '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string& s)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("bad integer '" + s + "'");
    return v;
}

std::optional<double> to_opt(const std::string& s)
{
    if (s == "NA")
        return std::nullopt;
    return to_double(s);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        out.push_back(cur);
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

const char* const kClassNames[kClasses] = {"normal", "on_demand", "emergency"};

std::vector<std::string> table_columns()
{
    std::vector<std::string> cols = {"protocol",        "n_nodes",    "rate_pkts_per_s", "seed",      "sim_time_s",
                                     "throughput_kbps", "mean_delay_ms", "energy_consumed_j", "nrl"};
    for (const char* c : kClassNames)
        cols.push_back(std::string("delay_") + c + "_ms");
    for (const auto& c : {"max_temperature_c", "originated", "delivered", "dropped", "in_flight", "control_tx"})
        cols.emplace_back(c);
    for (std::size_t i = 0; i < kDropCauses; ++i)
        cols.push_back("drop_" + std::string(to_string(static_cast<DropCause>(i))));
    cols.emplace_back("peak_temperature_c");
    cols.emplace_back("config");
    return cols;
}

}  // namespace

std::uint64_t Counters::total_originated() const { return sum(originated); }
std::uint64_t Counters::total_delivered() const { return sum(delivered); }
std::uint64_t Counters::total_in_flight() const { return sum(in_flight); }
std::uint64_t Counters::total_dropped() const
{
    std::uint64_t s = 0;
    for (const auto& c : dropped)
        s += sum(c);
    return s;
}

MetricsReport compute_metrics(const Counters& c, const ScenarioConfig& cfg)
{
    MetricsReport r;
    r.protocol = cfg.protocol;
    r.n_nodes = cfg.n_nodes;
    r.rate_pkts_per_s = cfg.rate_pkts_per_s;
    r.seed = cfg.rng_seed;
    r.sim_time_s = cfg.sim_time_s;
    r.config = cfg;

    r.originated = c.total_originated();
    r.delivered = c.total_delivered();
    r.dropped = c.total_dropped();
    r.in_flight = c.total_in_flight();
    r.control_tx = c.control_tx;
    for (std::size_t i = 0; i < kDropCauses; ++i)
        r.drops_by_cause[i] = sum(c.dropped[i]);

    r.throughput_kbps = cfg.sim_time_s > 0.0 ? c.delivered_bits / cfg.sim_time_s / 1000.0 : 0.0;
    if (r.delivered > 0) {
        double total = 0.0;
        for (double d : c.delay_sum_s)
            total += d;
        r.mean_delay_ms = total / static_cast<double>(r.delivered) * 1000.0;
        r.nrl = static_cast<double>(c.control_tx) / static_cast<double>(r.delivered);
    }
    for (std::size_t k = 0; k < kClasses; ++k)
        if (c.delivered[k] > 0)
            r.class_delay_ms[k] = c.delay_sum_s[k] / static_cast<double>(c.delivered[k]) * 1000.0;

    CompensatedSum consumed;
    const bool have_spent = c.spent_energy_j.size() == c.final_energy_j.size();
    for (std::size_t i = 0; i < c.final_energy_j.size(); ++i)
        if (i < c.is_sensor.size() && c.is_sensor[i])
            consumed.add(have_spent ? c.spent_energy_j[i] : c.initial_energy_j[i] - c.final_energy_j[i]);
    r.energy_consumed_j = consumed.value();

    r.peak_temperature_c.clear();
    double max_t = cfg.t_body_c;
    for (std::size_t i = 0; i < c.peak_temperature_c.size(); ++i)
        if (i < c.is_sensor.size() && c.is_sensor[i]) {
            r.peak_temperature_c.push_back(c.peak_temperature_c[i]);
            max_t = std::max(max_t, c.peak_temperature_c[i]);
        }
    r.max_temperature_c = max_t;
    return r;
}

namespace {

struct MetricDef {
    const char* name;
    bool higher_is_better;
    std::optional<double> (*get)(const MetricsReport&);
};

const MetricDef kMetrics[] = {
    {"throughput_kbps", true, [](const MetricsReport& r) -> std::optional<double> { return r.throughput_kbps; }},
    {"mean_delay_ms", false, [](const MetricsReport& r) { return r.mean_delay_ms; }},
    {"energy_consumed_j", false, [](const MetricsReport& r) -> std::optional<double> { return r.energy_consumed_j; }},
    {"nrl", false, [](const MetricsReport& r) { return r.nrl; }},
};

MetricComparison compare_metric(const MetricDef& m, double p, double o)
{
    MetricComparison c;
    c.metric = m.name;
    c.proposed = p;
    c.other = o;
    if (o != 0.0) {
        c.ratio = p / o;
        c.change_pct = (p - o) / o * 100.0;
    } else {
        c.ratio = p == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        c.change_pct = p == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (p != o) {
        const bool better = m.higher_is_better ? p > o : p < o;
        c.flag = better ? 1 : -1;
    }
    return c;
}

}  // namespace

ComparisonSummary compare_runs(const std::vector<std::pair<ProtocolKind, MetricsReport>>& reports)
{
    if (reports.size() < 2)
        throw std::invalid_argument("comparison needs at least two reports");
    const MetricsReport* proposed = nullptr;
    for (const auto& [k, r] : reports)
        if (k == ProtocolKind::proposed)
            proposed = &r;
    if (proposed == nullptr)
        throw std::invalid_argument("comparison needs a report for the proposed protocol");

    ComparisonSummary out;
    std::map<std::string, std::optional<double>> best;
    for (const auto& [k, r] : reports) {
        if (&r == proposed)
            continue;
        ProtocolComparison pc;
        pc.baseline = k;
        for (const auto& m : kMetrics) {
            const auto p = m.get(*proposed);
            const auto o = m.get(r);
            if (!p || !o)
                continue;
            pc.metrics.push_back(compare_metric(m, *p, *o));
            auto& b = best[m.name];
            if (!b || (m.higher_is_better ? *o > *b : *o < *b))
                b = *o;
        }
        out.versus.push_back(std::move(pc));
    }
    for (const auto& m : kMetrics) {
        const auto p = m.get(*proposed);
        const auto it = best.find(m.name);
        if (p && it != best.end() && it->second)
            out.versus_best.push_back(compare_metric(m, *p, *it->second));
    }
    return out;
}

ReportFormat parse_format(std::string_view s)
{
    if (s == "table")
        return ReportFormat::table;
    if (s == "summary")
        return ReportFormat::summary;
    if (s == "series")
        return ReportFormat::series;
    throw ParseError("unknown report format '" + std::string(s) + "'");
}

std::string emit_table(const std::vector<MetricsReport>& reports)
{
    std::ostringstream os;
    const auto cols = table_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "\t" : "") << cols[i];
    os << '\n';
    for (const auto& r : reports) {
        os << to_string(r.protocol) << '\t' << r.n_nodes << '\t' << num(r.rate_pkts_per_s) << '\t' << r.seed << '\t'
           << num(r.sim_time_s) << '\t' << num(r.throughput_kbps) << '\t' << opt(r.mean_delay_ms) << '\t'
           << num(r.energy_consumed_j) << '\t' << opt(r.nrl);
        for (const auto& d : r.class_delay_ms)
            os << '\t' << opt(d);
        os << '\t' << num(r.max_temperature_c) << '\t' << r.originated << '\t' << r.delivered << '\t' << r.dropped
           << '\t' << r.in_flight << '\t' << r.control_tx;
        for (auto d : r.drops_by_cause)
            os << '\t' << d;
        os << '\t';
        for (std::size_t i = 0; i < r.peak_temperature_c.size(); ++i)
            os << (i ? ";" : "") << num(r.peak_temperature_c[i]);
        os << '\t';
        const auto fields = scenario_fields(r.config);
        for (std::size_t i = 0; i < fields.size(); ++i)
            os << (i ? ";" : "") << fields[i].first << '=' << fields[i].second;
        os << '\n';
    }
    return os.str();
}

std::vector<MetricsReport> parse_table(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw ParseError("empty table");
    const auto cols = table_columns();
    if (split(line, '\t') != cols)
        throw ParseError("unexpected table header");
    std::vector<MetricsReport> out;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto f = split(line, '\t');
        if (f.size() != cols.size())
            throw ParseError("wrong column count", line_no);
        MetricsReport r;
        std::size_t k = 0;
        r.protocol = parse_protocol(f[k++]);
        r.n_nodes = static_cast<int>(to_u64(f[k++]));
        r.rate_pkts_per_s = to_double(f[k++]);
        r.seed = to_u64(f[k++]);
        r.sim_time_s = to_double(f[k++]);
        r.throughput_kbps = to_double(f[k++]);
        r.mean_delay_ms = to_opt(f[k++]);
        r.energy_consumed_j = to_double(f[k++]);
        r.nrl = to_opt(f[k++]);
        for (auto& d : r.class_delay_ms)
            d = to_opt(f[k++]);
        r.max_temperature_c = to_double(f[k++]);
        r.originated = to_u64(f[k++]);
        r.delivered = to_u64(f[k++]);
        r.dropped = to_u64(f[k++]);
        r.in_flight = to_u64(f[k++]);
        r.control_tx = to_u64(f[k++]);
        for (auto& d : r.drops_by_cause)
            d = to_u64(f[k++]);
        if (!f[k].empty())
            for (const auto& t : split(f[k], ';'))
                r.peak_temperature_c.push_back(to_double(t));
        ++k;
        ScenarioConfig cfg;
        if (!f[k].empty())
            for (const auto& kv : split(f[k], ';')) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw ParseError("bad config entry '" + kv + "'", line_no);
                apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
            }
        r.config = cfg;
        out.push_back(std::move(r));
    }
    return out;
}

std::string emit_summary(const MetricsReport& r)
{
    auto show = [](const std::optional<double>& v, const char* unit) {
        return v ? num(std::round(*v * 1000.0) / 1000.0) + unit : std::string("n/a");
    };
    std::ostringstream os;
    os << to_string(r.protocol) << ": " << r.n_nodes << " sensors, " << num(r.rate_pkts_per_s) << " pkt/s, seed "
       << r.seed << ", " << num(r.sim_time_s) << " s\n";
    os << "  throughput   " << show(r.throughput_kbps, " kbps") << '\n';
    os << "  mean delay   " << show(r.mean_delay_ms, " ms") << '\n';
    for (std::size_t k = 0; k < kClasses; ++k)
        os << "    " << kClassNames[k] << std::string(12 - std::string(kClassNames[k]).size(), ' ')
           << show(r.class_delay_ms[k], " ms") << '\n';
    os << "  energy       " << show(r.energy_consumed_j, " J") << '\n';
    os << "  NRL          " << show(r.nrl, "") << '\n';
    os << "  max temp     " << show(r.max_temperature_c, " C") << '\n';
    os << "  packets      originated " << r.originated << ", delivered " << r.delivered << ", dropped " << r.dropped
       << ", in flight " << r.in_flight << '\n';
    os << "  drops       ";
    for (std::size_t i = 0; i < kDropCauses; ++i)
        if (r.drops_by_cause[i] > 0)
            os << ' ' << to_string(static_cast<DropCause>(i)) << '=' << r.drops_by_cause[i];
    os << '\n';
    os << "  control tx   " << r.control_tx << '\n';
    return os.str();
}

std::string emit_series(const std::vector<MetricsReport>& reports, const std::string& metric, const std::string& x_axis)
{
    const MetricDef* def = nullptr;
    for (const auto& m : kMetrics)
        if (metric == m.name)
            def = &m;
    if (def == nullptr)
        throw ParseError("unknown metric '" + metric + "'");
    if (x_axis != "n_nodes" && x_axis != "rate_pkts_per_s")
        throw ParseError("unknown x axis '" + x_axis + "'");
    std::vector<std::pair<double, std::optional<double>>> rows;
    for (const auto& r : reports)
        rows.emplace_back(x_axis == "n_nodes" ? static_cast<double>(r.n_nodes) : r.rate_pkts_per_s, def->get(r));
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream os;
    os << "# " << x_axis << '\t' << metric << '\n';
    for (const auto& [x, y] : rows)
        os << num(x) << '\t' << opt(y) << '\n';
    return os.str();
}

std::string emit_report(const std::vector<MetricsReport>& reports, ReportFormat format)
{
    switch (format) {
    case ReportFormat::table: return emit_table(reports);
    case ReportFormat::summary: {
        std::string out;
        for (const auto& r : reports)
            out += emit_summary(r);
        return out;
    }
    case ReportFormat::series: {
        std::map<ProtocolKind, std::vector<MetricsReport>> by_protocol;
        for (const auto& r : reports)
            by_protocol[r.protocol].push_back(r);
        std::string out;
        for (const auto& [p, rs] : by_protocol)
            for (const auto& m : kMetrics)
                out += "# protocol " + std::string(to_string(p)) + '\n' + emit_series(rs, m.name, "n_nodes");
        return out;
    }
    }
    return {};
}

std::string format_comparison(const ComparisonSummary& s)
{
    std::ostringstream os;
    auto row = [&](const std::string& who, const MetricComparison& m) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-10s %-18s %12.4f %12.4f %+9.1f%% %s\n", who.c_str(), m.metric.c_str(),
                      m.proposed, m.other, m.change_pct, m.flag > 0 ? "better" : m.flag < 0 ? "worse" : "same");
        os << buf;
    };
    os << "versus     metric                 proposed        other    change\n";
    for (const auto& pc : s.versus)
        for (const auto& m : pc.metrics)
            row(std::string(to_string(pc.baseline)), m);
    for (const auto& m : s.versus_best)
        row("best", m);
    return os.str();
}

std::string report_basename(const MetricsReport& r)
{
    return std::string(to_string(r.protocol)) + "_" + std::to_string(r.n_nodes) + "_" + num(r.rate_pkts_per_s) + "_" +
           std::to_string(r.seed);
}

}  // namespace wban
