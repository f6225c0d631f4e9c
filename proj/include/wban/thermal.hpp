// Lumped per-node bioheat model and hotspot threshold logic.
//
// Each node is a point, so tissue conduction between nodes is dropped and
// perfusion is the only cooling path:
//
//     eta_c * dT/dt = -omega (T - T_b) + Q_met + Q_SAR
//
// with Q_SAR = sar_coeff * (radio energy spent in the step) / dt.
#pragma once

#include <stdexcept>

#include "wban/config.hpp"
#include "wban/types.hpp"

namespace wban {

class UnstableStep : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ThermalParams {
    double eta_c = 20.0;     // J/degC
    double omega = 0.1;      // W/degC
    double t_body = 37.0;    // degC
    double q_met = 0.01;     // W
    double sar_coeff = 10.17;
    double t_thresh = 39.0;  // degC
    double hysteresis = 0.5; // degC
    double dt = 1.0;         // s

    static ThermalParams from(const ScenarioConfig& cfg);

    /// Temperature the node settles at under a constant source power.
    double steady_state(double q_sar_w) const { return t_body + (q_met + q_sar_w) / omega; }
};

/// One explicit Euler step. Throws UnstableStep if dt > eta_c / omega.
double step_temperature(double temperature_c, double radio_energy_j, const ThermalParams& tp);

enum class HotspotDecision { stay, enter_sleep, wake };

HotspotDecision classify_hotspot(const NodeState& node, const ThermalParams& tp);

}  // namespace wban
