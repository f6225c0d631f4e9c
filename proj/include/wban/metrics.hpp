// Run counters, metric computation, comparisons, and report serialization.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wban/config.hpp"
#include "wban/types.hpp"

namespace wban {

enum class DropCause : std::uint8_t { link_loss, no_route, expired, no_forwarder, dead_node, hotspot_flush, refused_sleeping };
inline constexpr std::size_t kDropCauses = 7;
std::string_view to_string(DropCause c);

inline constexpr std::size_t kClasses = 3;
constexpr std::size_t class_index(PacketClass c) { return static_cast<std::size_t>(c) - 1; }

/// Raw tallies produced by the engine during one run.
struct Counters {
    std::array<std::uint64_t, kClasses> originated{};
    std::array<std::uint64_t, kClasses> delivered{};
    std::array<std::array<std::uint64_t, kClasses>, kDropCauses> dropped{};
    std::array<std::uint64_t, kClasses> in_flight{};
    std::array<double, kClasses> delay_sum_s{};
    double delivered_bits = 0.0;
    double min_delay_s = 0.0;  // 0 when nothing delivered
    std::uint64_t data_tx = 0;
    std::uint64_t control_tx = 0;
    std::vector<double> peak_temperature_c;  // per node
    std::vector<double> initial_energy_j;    // per node
    std::vector<double> final_energy_j;      // per node
    std::vector<double> spent_energy_j;      // per node, summed debits; preferred over initial - final
    std::vector<bool> is_sensor;

    std::uint64_t total_originated() const;
    std::uint64_t total_delivered() const;
    std::uint64_t total_dropped() const;
    std::uint64_t total_in_flight() const;
};

struct MetricsReport {
    ProtocolKind protocol = ProtocolKind::proposed;
    int n_nodes = 0;
    double rate_pkts_per_s = 0.0;
    std::uint64_t seed = 0;
    double sim_time_s = 0.0;

    double throughput_kbps = 0.0;
    std::optional<double> mean_delay_ms;  // absent when nothing was delivered
    double energy_consumed_j = 0.0;
    std::optional<double> nrl;  // absent when nothing was delivered
    std::array<std::optional<double>, kClasses> class_delay_ms{};
    double max_temperature_c = 0.0;
    std::uint64_t originated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight = 0;
    std::uint64_t control_tx = 0;
    std::array<std::uint64_t, kDropCauses> drops_by_cause{};
    std::vector<double> peak_temperature_c;
    ScenarioConfig config;  // echo

    bool operator==(const MetricsReport&) const = default;
};

MetricsReport compute_metrics(const Counters& counters, const ScenarioConfig& cfg);

struct MetricComparison {
    std::string metric;  // throughput_kbps | mean_delay_ms | energy_consumed_j | nrl
    double proposed = 0.0;
    double other = 0.0;
    double ratio = 1.0;       // proposed / other
    double change_pct = 0.0;  // (proposed - other) / other * 100
    int flag = 0;             // +1 proposed better, -1 worse, 0 neutral
};

struct ProtocolComparison {
    ProtocolKind baseline = ProtocolKind::ensa_ban;
    std::vector<MetricComparison> metrics;
};

struct ComparisonSummary {
    std::vector<ProtocolComparison> versus;        // one per baseline
    std::vector<MetricComparison> versus_best;     // against the best baseline per metric
};

/// Ratios of the proposed protocol against each baseline and the best baseline.
/// Throughput is better when higher; delay, energy and NRL when lower.
ComparisonSummary compare_runs(const std::vector<std::pair<ProtocolKind, MetricsReport>>& reports);

enum class ReportFormat { table, summary, series };
ReportFormat parse_format(std::string_view s);

/// Tab-separated header plus one row per report, fixed column order.
std::string emit_table(const std::vector<MetricsReport>& reports);
std::vector<MetricsReport> parse_table(const std::string& text);

/// Readable multi-line summary of one report.
std::string emit_summary(const MetricsReport& r);

/// `x<TAB>y` series of one metric across reports, x = node count or rate.
std::string emit_series(const std::vector<MetricsReport>& reports, const std::string& metric, const std::string& x_axis);

std::string emit_report(const std::vector<MetricsReport>& reports, ReportFormat format);

std::string format_comparison(const ComparisonSummary& s);

/// `<protocol>_<nodes>_<rate>_<seed>`
std::string report_basename(const MetricsReport& r);

}  // namespace wban
