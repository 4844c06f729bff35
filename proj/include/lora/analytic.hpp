#pragma once

#include <array>

#include "lora/phy.hpp"

namespace lora {

struct OutageTargets {
    double total_target = 0.0;          // max combined outage per node
    double disconnection_target = 0.0;  // SNR-outage share of the budget
};

void validate_targets(const OutageTargets& targets);

// SF ring edges [l_0..l_6], l_0 = 0, strictly increasing; l_6 is the
// coverage radius.
struct CellGeometry {
    std::array<double, 7> edges_m{};

    double coverage_radius_m() const { return edges_m[6]; }
    double inner_edge_m(int ring_index) const { return edges_m[ring_index - 1]; }
    double outer_edge_m(int ring_index) const { return edges_m[ring_index]; }
    double ring_area_m2(int ring_index) const;
    double cell_area_m2() const;
};

void validate_geometry(const CellGeometry& geometry);

struct RingLoad {
    int ring_index = 0;
    double mean_active_interferers = 0.0;  // beta_i = p_i * N_i
    double node_count = 0.0;               // N_i, unrounded
    double density_per_m2 = 0.0;           // rho_i = N_i / V_i
    double intensity_per_m2 = 0.0;         // alpha_i = p_i * rho_i
};

RingLoad make_ring_load(int ring_index, double node_count, double duty_cycle,
                        double ring_area_m2);

// Probability the SNR of a node at distance d transmitting power_w falls
// below the ring threshold under Rayleigh fading:
// 1 - exp(-threshold * noise / (power * gain(d))).
double disconnection_probability(double distance_m, double power_w,
                                 const SpreadingFactorProfile& ring,
                                 const ChannelModel& channel);

// Outer edge of a ring placed where disconnection at maximum power equals the
// target: inverse of disconnection_probability at the edge.
double ring_edge(const SpreadingFactorProfile& ring, const OutageTargets& targets,
                 const RadioLimits& limits, const ChannelModel& channel);

// Minimum power compensating path loss so disconnection equals the target
// (truncated channel inversion before truncation).
double min_transmit_power(double distance_m, const SpreadingFactorProfile& ring,
                          const OutageTargets& targets, const ChannelModel& channel);

// Area average of min_transmit_power over the cell, closed form.
double average_power(const CellGeometry& geometry, const OutageTargets& targets,
                     const SfTable& profiles, const ChannelModel& channel);

// P[SIR < delta] against same-ring aggregate interference under channel
// inversion: 1 - exp(-beta * delta/(delta+1)). Depends only on the mean
// active-interferer count and the capture threshold; no geometry input.
double collision_probability(double mean_active_interferers, double sir_threshold_linear);
double collision_probability(const RingLoad& load, const ChannelModel& channel);

// Combined outage 1 - (1-h0)(1-q0).
double total_outage(double h0, double q0);

// Largest mean active-interferer count keeping total outage at the target
// when disconnection already consumes part of the budget.
double max_ring_load(const OutageTargets& targets, const ChannelModel& channel);

// Largest disconnection target given an interference outage q0.
double residual_disconnection_target(double total_target, double q0);

}  // namespace lora
