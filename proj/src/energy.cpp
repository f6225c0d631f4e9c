#include "wban/energy.hpp"

#include <algorithm>
#include <cmath>

namespace wban {

EnergyParams EnergyParams::from(const ScenarioConfig& cfg)
{
    return {cfg.e_elec_j_per_bit, cfg.e_amp_j_per_bit_per_m4, cfg.path_loss_exponent};
}

double tx_energy(double k_bits, double d_m, const EnergyParams& p)
{
    const double dm = p.m == 4 ? (d_m * d_m) * (d_m * d_m) : std::pow(d_m, p.m);
    return p.e_elec * k_bits + p.e_amp * k_bits * dm;
}

double rx_energy(double k_bits, const EnergyParams& p) { return p.e_elec * k_bits; }

double apply_energy_step(NodeState& node, double tx_bits, double tx_distance_m, std::span<const RxEvent> rx,
                         const EnergyParams& p)
{
    if (node.is_sink() || node.dead)
        return 0.0;
    double spent = tx_bits > 0 ? tx_energy(tx_bits, tx_distance_m, p) : 0.0;
    for (const auto& ev : rx)
        spent += rx_energy(ev.bits, p);
    const double debit = std::min(spent, node.energy_j);
    node.energy_j -= debit;
    if (spent > 0 && node.energy_j <= 0.0) {
        node.energy_j = 0.0;
        node.dead = true;
    }
    return debit;
}

}  // namespace wban
