#include "wban/thermal.hpp"

#include <algorithm>

namespace wban {

ThermalParams ThermalParams::from(const ScenarioConfig& cfg)
{
    return {cfg.eta_c_product, cfg.omega, cfg.t_body_c, cfg.q_met, cfg.sar_coeff, cfg.t_thresh_c, cfg.hysteresis_c,
            cfg.thermal_dt_s};
}

double step_temperature(double temperature_c, double radio_energy_j, const ThermalParams& tp)
{
    if (tp.dt <= 0 || (tp.omega > 0 && tp.dt > tp.eta_c / tp.omega))
        throw UnstableStep("thermal step dt exceeds eta_c / omega");
    const double q_sar = tp.sar_coeff * radio_energy_j / tp.dt;
    const double dTdt = (-tp.omega * (temperature_c - tp.t_body) + tp.q_met + q_sar) / tp.eta_c;
    return std::max(tp.t_body, temperature_c + tp.dt * dTdt);
}

HotspotDecision classify_hotspot(const NodeState& node, const ThermalParams& tp)
{
    if (!node.asleep && node.temperature_c > tp.t_thresh)
        return HotspotDecision::enter_sleep;
    if (node.asleep && node.temperature_c < tp.t_thresh - tp.hysteresis)
        return HotspotDecision::wake;
    return HotspotDecision::stay;
}

}  // namespace wban
