// Independent reference implementations the tests compare against.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "wban/routing.hpp"
#include "wban/rng.hpp"
#include "wban/thermal.hpp"

namespace oracle {

/// Integrates eta dT/dt = -omega (T - Tb) + q_met + q_sar over `horizon_s`
/// with `substeps` Euler steps per model step, source power held constant.
inline double fine_temperature(double t0, double radio_energy_per_step_j, const wban::ThermalParams& tp,
                               double horizon_s, int substeps)
{
    const double q_sar = tp.sar_coeff * radio_energy_per_step_j / tp.dt;
    const double h = tp.dt / substeps;
    const long n = std::lround(horizon_s / h);
    double t = t0;
    for (long k = 0; k < n; ++k)
        t = std::max(tp.t_body, t + h * (-tp.omega * (t - tp.t_body) + tp.q_met + q_sar) / tp.eta_c);
    return t;
}

/// Random thermal parameters around the calibrated defaults.
inline wban::ThermalParams random_thermal(wban::Rng& rng)
{
    wban::ThermalParams tp;
    tp.eta_c = rng.uniform(15.0, 30.0);
    tp.omega = rng.uniform(0.05, 0.15);
    tp.q_met = rng.uniform(0.0, 0.05);
    tp.sar_coeff = rng.uniform(5.0, 15.0);
    tp.t_body = 37.0;
    tp.dt = 1.0;
    return tp;
}

/// Cheapest simple path from src to any sink by exhaustive enumeration.
/// Returns +inf when no sink is reachable.
inline double brute_force_cost(const wban::Graph& g, wban::NodeId src)
{
    const std::size_t n = g.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> on_path(n, false);
    auto dfs = [&](auto&& self, std::size_t u, double cost) -> void {
        if (g.sink[u]) {
            best = std::min(best, cost);
            return;
        }
        on_path[u] = true;
        for (const auto& e : g.out[u]) {
            const std::size_t v = wban::index(e.to);
            if (!on_path[v] && std::isfinite(e.cost))
                self(self, v, cost + e.cost);
        }
        on_path[u] = false;
    };
    dfs(dfs, wban::index(src), 0.0);
    return best;
}

/// Random connected graph with `n` nodes, the last one a sink, symmetric
/// links, independent random costs per direction.
inline wban::Graph random_connected_graph(wban::Rng& rng, std::size_t n)
{
    wban::Graph g(n);
    g.sink[n - 1] = true;
    // spanning tree first, then extra edges
    for (std::size_t v = 1; v < n; ++v) {
        const std::size_t u = static_cast<std::size_t>(rng.uniform() * static_cast<double>(v));
        g.add_edge(wban::node_id(u), wban::node_id(v), rng.uniform(0.1, 5.0));
        g.add_edge(wban::node_id(v), wban::node_id(u), rng.uniform(0.1, 5.0));
    }
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (rng.bernoulli(0.35)) {
                g.add_edge(wban::node_id(u), wban::node_id(v), rng.uniform(0.1, 5.0));
                g.add_edge(wban::node_id(v), wban::node_id(u), rng.uniform(0.1, 5.0));
            }
    return g;
}

}  // namespace oracle
