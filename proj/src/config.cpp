#include "wban/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <variant>

namespace wban {

std::string_view to_string(ProtocolKind p)
{
    switch (p) {
    case ProtocolKind::proposed: return "proposed";
    case ProtocolKind::ensa_ban: return "ensa_ban";
    case ProtocolKind::p_aodv: return "p_aodv";
    case ProtocolKind::rrls: return "rrls";
    }
    return "?";
}

ProtocolKind parse_protocol(std::string_view name)
{
    for (auto p : {ProtocolKind::proposed, ProtocolKind::ensa_ban, ProtocolKind::p_aodv, ProtocolKind::rrls})
        if (to_string(p) == name)
            return p;
    throw ParseError("unknown protocol '" + std::string(name) + "'", 0, "protocol");
}

ParseError::ParseError(const std::string& msg, int line, std::string field)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line), field_(std::move(field))
{
}

namespace {

using Member = std::variant<int ScenarioConfig::*, double ScenarioConfig::*, std::uint64_t ScenarioConfig::*,
                            bool ScenarioConfig::*, ProtocolKind ScenarioConfig::*>;

struct Field {
    const char* name;
    Member member;
};

// Serialization order.
const std::array kFields{
    Field{"n_nodes", &ScenarioConfig::n_nodes},
    Field{"n_sinks", &ScenarioConfig::n_sinks},
    Field{"area_m", &ScenarioConfig::area_m},
    Field{"range_m", &ScenarioConfig::range_m},
    Field{"initial_energy_j", &ScenarioConfig::initial_energy_j},
    Field{"e_elec_j_per_bit", &ScenarioConfig::e_elec_j_per_bit},
    Field{"e_amp_j_per_bit_per_m4", &ScenarioConfig::e_amp_j_per_bit_per_m4},
    Field{"path_loss_exponent", &ScenarioConfig::path_loss_exponent},
    Field{"packet_size_bytes", &ScenarioConfig::packet_size_bytes},
    Field{"rate_pkts_per_s", &ScenarioConfig::rate_pkts_per_s},
    Field{"sim_time_s", &ScenarioConfig::sim_time_s},
    Field{"frac_emergency", &ScenarioConfig::frac_emergency},
    Field{"frac_on_demand", &ScenarioConfig::frac_on_demand},
    Field{"d_emergency_s", &ScenarioConfig::d_emergency_s},
    Field{"d_on_demand_s", &ScenarioConfig::d_on_demand_s},
    Field{"d_normal_s", &ScenarioConfig::d_normal_s},
    Field{"max_age_s", &ScenarioConfig::max_age_s},
    Field{"bandwidth_hz", &ScenarioConfig::bandwidth_hz},
    Field{"link_rate_bps", &ScenarioConfig::link_rate_bps},
    Field{"frame_len_s", &ScenarioConfig::frame_len_s},
    Field{"hello_size_bytes", &ScenarioConfig::hello_size_bytes},
    Field{"hello_interval_s", &ScenarioConfig::hello_interval_s},
    Field{"prr_window", &ScenarioConfig::prr_window},
    Field{"rng_seed", &ScenarioConfig::rng_seed},
    Field{"w1", &ScenarioConfig::w1},
    Field{"w2", &ScenarioConfig::w2},
    Field{"w3", &ScenarioConfig::w3},
    Field{"w4", &ScenarioConfig::w4},
    Field{"delay_ref_s", &ScenarioConfig::delay_ref_s},
    Field{"raw_cost_units", &ScenarioConfig::raw_cost_units},
    Field{"ewma_alpha", &ScenarioConfig::ewma_alpha},
    Field{"lambda", &ScenarioConfig::lambda},
    Field{"tau_s", &ScenarioConfig::tau_s},
    Field{"demotion_factor", &ScenarioConfig::demotion_factor},
    Field{"route_refresh_s", &ScenarioConfig::route_refresh_s},
    Field{"t_thresh_c", &ScenarioConfig::t_thresh_c},
    Field{"hysteresis_c", &ScenarioConfig::hysteresis_c},
    Field{"eta_c_product", &ScenarioConfig::eta_c_product},
    Field{"omega", &ScenarioConfig::omega},
    Field{"t_body_c", &ScenarioConfig::t_body_c},
    Field{"q_met", &ScenarioConfig::q_met},
    Field{"sar_coeff", &ScenarioConfig::sar_coeff},
    Field{"thermal_dt_s", &ScenarioConfig::thermal_dt_s},
    Field{"protocol", &ScenarioConfig::protocol},
};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view value, std::string_view key)
{
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("invalid value '" + std::string(value) + "' for " + std::string(key), 0, std::string(key));
    return out;
}

bool parse_bool(std::string_view value, std::string_view key)
{
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ParseError("invalid boolean '" + std::string(value) + "' for " + std::string(key), 0, std::string(key));
}

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

const Field* find_field(std::string_view key)
{
    for (const auto& f : kFields)
        if (key == f.name)
            return &f;
    return nullptr;
}

}  // namespace

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    const Field* f = find_field(key);
    if (f == nullptr)
        throw ParseError("unknown key '" + std::string(key) + "'", 0, std::string(key));
    if (value.empty())
        throw ParseError("missing value for " + std::string(key), 0, std::string(key));
    std::visit(
        [&](auto member) {
            using T = std::remove_reference_t<decltype(cfg.*member)>;
            if constexpr (std::is_same_v<T, bool>)
                cfg.*member = parse_bool(value, key);
            else if constexpr (std::is_same_v<T, ProtocolKind>)
                cfg.*member = parse_protocol(value);
            else
                cfg.*member = parse_number<T>(value, key);
        },
        f->member);
}

ScenarioConfig parse_scenario(std::string_view text)
{
    ScenarioConfig cfg;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", line_no);
        try {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no, e.field());
        }
    }
    return cfg;
}

void validate(const ScenarioConfig& c)
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw ValidationError(what);
    };
    require(c.n_nodes >= 1, "n_nodes must be >= 1");
    require(c.n_sinks >= 1 && c.n_sinks <= 4, "n_sinks must be in [1,4]");
    require(c.area_m > 0, "area_m must be > 0");
    require(c.range_m > 0, "range_m must be > 0");
    require(c.initial_energy_j > 0, "initial_energy_j must be > 0");
    require(c.e_elec_j_per_bit > 0, "e_elec_j_per_bit must be > 0");
    require(c.e_amp_j_per_bit_per_m4 > 0, "e_amp_j_per_bit_per_m4 must be > 0");
    require(c.path_loss_exponent == 2 || c.path_loss_exponent == 4, "path_loss_exponent must be 2 or 4");
    require(c.packet_size_bytes > 0, "packet_size_bytes must be > 0");
    require(c.rate_pkts_per_s > 0, "rate_pkts_per_s must be > 0");
    require(c.sim_time_s >= 0, "sim_time_s must be >= 0");
    require(c.frac_emergency >= 0 && c.frac_on_demand >= 0 && c.frac_emergency + c.frac_on_demand <= 1,
            "class fractions must be non-negative and sum to <= 1");
    require(c.d_emergency_s > 0 && c.d_on_demand_s > 0 && c.d_normal_s > 0, "allowed delays must be > 0");
    require(c.max_age_s > 0, "max_age_s must be > 0");
    require(c.bandwidth_hz > 0, "bandwidth_hz must be > 0");
    require(c.link_rate_bps > 0, "link_rate_bps must be > 0");
    require(c.frame_len_s > 0, "frame_len_s must be > 0");
    require(c.hello_size_bytes > 0, "hello_size_bytes must be > 0");
    require(c.hello_interval_s > 0, "hello_interval_s must be > 0");
    require(c.prr_window >= 1, "prr_window must be >= 1");
    require(c.w1 >= 0 && c.w2 >= 0 && c.w3 >= 0 && c.w4 >= 0, "weights must be >= 0");
    require(c.w1 + c.w2 + c.w3 + c.w4 > 0, "weights must not all be zero");
    require(c.delay_ref_s > 0, "delay_ref_s must be > 0");
    require(c.ewma_alpha > 0 && c.ewma_alpha < 1, "ewma_alpha must satisfy 0 < alpha < 1");
    require(c.lambda > 1, "lambda must be > 1");
    require(c.tau_s > 0, "tau_s must be > 0");
    require(c.demotion_factor >= 1, "demotion_factor must be >= 1");
    require(c.route_refresh_s > 0, "route_refresh_s must be > 0");
    require(c.hysteresis_c > 0, "hysteresis_c must be > 0");
    require(c.eta_c_product > 0, "eta_c_product must be > 0");
    require(c.omega >= 0, "omega must be >= 0");
    require(c.t_body_c > 0, "t_body_c must be > 0");
    require(c.t_thresh_c > c.t_body_c, "t_thresh_c must exceed t_body_c");
    require(c.q_met >= 0, "q_met must be >= 0");
    require(c.sar_coeff >= 0, "sar_coeff must be >= 0");
    require(c.thermal_dt_s > 0, "thermal_dt_s must be > 0");
    require(c.omega == 0 || c.thermal_dt_s <= c.eta_c_product / c.omega,
            "thermal_dt_s must not exceed eta_c_product / omega (unstable explicit step)");
}

ScenarioConfig load_scenario(std::string_view text)
{
    ScenarioConfig cfg = parse_scenario(text);
    validate(cfg);
    return cfg;
}

std::vector<std::pair<std::string, std::string>> scenario_fields(const ScenarioConfig& cfg)
{
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(kFields.size());
    for (const auto& f : kFields) {
        std::string value = std::visit(
            [&](auto member) -> std::string {
                using T = std::remove_cvref_t<decltype(cfg.*member)>;
                if constexpr (std::is_same_v<T, bool>)
                    return cfg.*member ? "true" : "false";
                else if constexpr (std::is_same_v<T, ProtocolKind>)
                    return std::string(to_string(cfg.*member));
                else if constexpr (std::is_same_v<T, double>)
                    return format_double(cfg.*member);
                else
                    return std::to_string(cfg.*member);
            },
            f.member);
        out.emplace_back(f.name, std::move(value));
    }
    return out;
}

std::string serialize_scenario(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    for (const auto& [k, v] : scenario_fields(cfg))
        os << k << " = " << v << '\n';
    return os.str();
}

}  // namespace wban
