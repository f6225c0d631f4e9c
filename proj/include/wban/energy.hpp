// First-order radio energy model.
#pragma once

#include <span>
#include <utility>

#include "wban/config.hpp"
#include "wban/types.hpp"

namespace wban {

struct EnergyParams {
    double e_elec = 60e-9;  // J/bit
    double e_amp = 1e-15;   // J/bit/m^m
    int m = 4;

    static EnergyParams from(const ScenarioConfig& cfg);
};

/// E_elec * k + E_amp * k * d^m
double tx_energy(double k_bits, double d_m, const EnergyParams& p);

/// E_elec * k
double rx_energy(double k_bits, const EnergyParams& p);

struct RxEvent {
    double bits = 0.0;
    double distance_m = 0.0;
};

/// Charges one step of activity against a node. Sensors are floored at zero
/// and marked dead on depletion; sinks are never charged. Returns the energy
/// actually debited.
double apply_energy_step(NodeState& node, double tx_bits, double tx_distance_m, std::span<const RxEvent> rx,
                         const EnergyParams& p);

}  // namespace wban
