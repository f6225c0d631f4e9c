// Scenario configuration: defaults, the key = value scenario format, validation.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wban {

enum class ProtocolKind : std::uint8_t { proposed, ensa_ban, p_aodv, rrls };

std::string_view to_string(ProtocolKind p);
ProtocolKind parse_protocol(std::string_view name);  // throws ParseError

/// Malformed scenario text. Carries the 1-based line and offending field when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line = 0, std::string field = {});
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

/// A well-formed configuration that violates an invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    // topology
    int n_nodes = 50;  // sensors
    int n_sinks = 2;
    double area_m = 3.0;
    double range_m = 0.5;

    // radio energy
    double initial_energy_j = 100.0;
    double e_elec_j_per_bit = 60e-9;
    double e_amp_j_per_bit_per_m4 = 1e-15;
    int path_loss_exponent = 4;

    // traffic
    int packet_size_bytes = 512;
    double rate_pkts_per_s = 4.0;
    double sim_time_s = 500.0;
    double frac_emergency = 0.05;
    double frac_on_demand = 0.15;
    double d_emergency_s = 0.05;
    double d_on_demand_s = 0.25;
    double d_normal_s = 1.0;
    double max_age_s = 5.0;

    // link / MAC
    double bandwidth_hz = 20e6;
    double link_rate_bps = 20e6;
    double frame_len_s = 0.1;
    int hello_size_bytes = 32;
    double hello_interval_s = 1.0;
    int prr_window = 20;

    std::uint64_t rng_seed = 1;

    // routing
    double w1 = 0.3;
    double w2 = 0.3;
    double w3 = 0.2;
    double w4 = 0.2;
    double delay_ref_s = 0.1;
    bool raw_cost_units = false;
    double ewma_alpha = 0.3;
    double lambda = 1.5;
    double tau_s = 5.0;
    double demotion_factor = 4.0;
    double route_refresh_s = 5.0;

    // thermal
    double t_thresh_c = 39.0;
    double hysteresis_c = 0.5;
    double eta_c_product = 20.0;
    double omega = 0.1;
    double t_body_c = 37.0;
    double q_met = 0.01;
    double sar_coeff = 10.17;
    double thermal_dt_s = 1.0;

    ProtocolKind protocol = ProtocolKind::proposed;

    std::uint32_t packet_bits() const { return static_cast<std::uint32_t>(packet_size_bytes) * 8u; }
    std::uint32_t hello_bits() const { return static_cast<std::uint32_t>(hello_size_bytes) * 8u; }

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses a scenario document. Unspecified keys keep their defaults. Does not validate.
ScenarioConfig parse_scenario(std::string_view text);

/// Applies one `key=value` assignment (CLI override path).
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Throws ValidationError naming the first violated invariant.
void validate(const ScenarioConfig& cfg);

/// parse_scenario followed by validate.
ScenarioConfig load_scenario(std::string_view text);

/// Writes every field, one `key = value` per line, in a fixed order.
std::string serialize_scenario(const ScenarioConfig& cfg);

/// Field name to serialized value, in serialization order.
std::vector<std::pair<std::string, std::string>> scenario_fields(const ScenarioConfig& cfg);

}  // namespace wban
