#include "lora/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lora/errors.hpp"
#include "lora/units.hpp"

namespace lora {

void validate_targets(const OutageTargets& targets) {
    if (!(targets.total_target > 0.0 && targets.total_target < 1.0)) {
        fail(errkind::infeasible_targets, "total outage target must lie in (0,1)");
    }
    if (!(targets.disconnection_target > 0.0 &&
          targets.disconnection_target <= targets.total_target)) {
        fail(errkind::infeasible_targets,
             "disconnection target must lie in (0, total target]");
    }
}

double CellGeometry::ring_area_m2(int ring_index) const {
    const double inner = edges_m[ring_index - 1];
    const double outer = edges_m[ring_index];
    return std::numbers::pi * (outer * outer - inner * inner);
}

double CellGeometry::cell_area_m2() const {
    return std::numbers::pi * edges_m[6] * edges_m[6];
}

void validate_geometry(const CellGeometry& geometry) {
    if (geometry.edges_m[0] != 0.0) {
        fail(errkind::invalid_argument, "innermost edge must be zero");
    }
    for (int i = 1; i <= 6; ++i) {
        if (!(geometry.edges_m[i] > geometry.edges_m[i - 1]) ||
            !std::isfinite(geometry.edges_m[i])) {
            fail(errkind::invalid_argument, "ring edges must be strictly increasing");
        }
    }
}

RingLoad make_ring_load(int ring_index, double node_count, double duty_cycle,
                        double ring_area_m2) {
    RingLoad load;
    load.ring_index = ring_index;
    load.node_count = node_count;
    load.mean_active_interferers = duty_cycle * node_count;
    load.density_per_m2 = node_count / ring_area_m2;
    load.intensity_per_m2 = duty_cycle * load.density_per_m2;
    return load;
}

double disconnection_probability(double distance_m, double power_w,
                                 const SpreadingFactorProfile& ring,
                                 const ChannelModel& channel) {
    if (!(distance_m > 0.0)) {
        fail(errkind::invalid_argument, "distance must be positive");
    }
    if (!(power_w > 0.0)) {
        fail(errkind::invalid_argument, "power must be positive");
    }
    const double gain = path_loss_gain(distance_m, channel);
    const double snr_deficit =
        ring.snr_threshold_linear() * channel.noise_w() / (power_w * gain);
    return -std::expm1(-snr_deficit);
}

double ring_edge(const SpreadingFactorProfile& ring, const OutageTargets& targets,
                 const RadioLimits& limits, const ChannelModel& channel) {
    const double t_h0 = targets.disconnection_target;
    if (!(t_h0 > 0.0 && t_h0 < 1.0)) {
        fail(errkind::infeasible_targets, "disconnection target must lie in (0,1)");
    }
    const double scale =
        -limits.max_power_w() * std::log1p(-t_h0) /
        (channel.noise_w() * ring.snr_threshold_linear());
    return channel.wavelength_m / (4.0 * std::numbers::pi) *
           std::pow(scale, 1.0 / channel.path_loss_exponent);
}

double min_transmit_power(double distance_m, const SpreadingFactorProfile& ring,
                          const OutageTargets& targets, const ChannelModel& channel) {
    if (!(distance_m > 0.0)) {
        fail(errkind::invalid_argument, "distance must be positive");
    }
    const double t_h0 = targets.disconnection_target;
    if (!(t_h0 > 0.0 && t_h0 < 1.0)) {
        fail(errkind::infeasible_targets, "disconnection target must lie in (0,1)");
    }
    const double gain = path_loss_gain(distance_m, channel);
    return -channel.noise_w() * ring.snr_threshold_linear() /
           (std::log1p(-t_h0) * gain);
}

double average_power(const CellGeometry& geometry, const OutageTargets& targets,
                     const SfTable& profiles, const ChannelModel& channel) {
    validate_geometry(geometry);
    const double t_h0 = targets.disconnection_target;
    if (!(t_h0 > 0.0 && t_h0 < 1.0)) {
        fail(errkind::infeasible_targets, "disconnection target must lie in (0,1)");
    }
    const double eta = channel.path_loss_exponent;
    double ring_sum = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double outer = geometry.edges_m[i + 1];
        const double inner = geometry.edges_m[i];
        ring_sum += profiles[i].snr_threshold_linear() / (eta + 2.0) *
                    (std::pow(outer, eta + 2.0) - std::pow(inner, eta + 2.0));
    }
    const double prefactor =
        -2.0 * std::numbers::pi * channel.noise_w() /
        (geometry.cell_area_m2() * std::log1p(-t_h0)) *
        std::pow(4.0 * std::numbers::pi / channel.wavelength_m, eta);
    return prefactor * ring_sum;
}

double collision_probability(double mean_active_interferers, double sir_threshold_linear) {
    if (mean_active_interferers < 0.0 || !std::isfinite(mean_active_interferers)) {
        fail(errkind::invalid_argument, "mean active interferer count must be nonnegative");
    }
    if (!(sir_threshold_linear > 0.0)) {
        fail(errkind::invalid_argument, "SIR threshold must be positive");
    }
    const double capture = sir_threshold_linear / (sir_threshold_linear + 1.0);
    return -std::expm1(-capture * mean_active_interferers);
}

double collision_probability(const RingLoad& load, const ChannelModel& channel) {
    return collision_probability(load.mean_active_interferers, channel.sir_threshold_linear());
}

double total_outage(double h0, double q0) {
    if (!(h0 >= 0.0 && h0 <= 1.0) || !(q0 >= 0.0 && q0 <= 1.0)) {
        fail(errkind::invalid_argument, "outage probabilities must lie in [0,1]");
    }
    return h0 + q0 - h0 * q0;
}

double max_ring_load(const OutageTargets& targets, const ChannelModel& channel) {
    validate_targets(targets);
    const double delta = channel.sir_threshold_linear();
    // log-domain difference keeps precision when both targets are near zero
    const double log_ratio =
        std::log1p(-targets.total_target) - std::log1p(-targets.disconnection_target);
    return -(delta + 1.0) / delta * log_ratio;
}

double residual_disconnection_target(double total_target, double q0) {
    if (!(total_target > 0.0 && total_target < 1.0)) {
        fail(errkind::infeasible_targets, "total outage target must lie in (0,1)");
    }
    if (!(q0 >= 0.0 && q0 <= total_target)) {
        fail(errkind::infeasible_targets,
             "interference outage exceeds the total outage target");
    }
    return (total_target - q0) / (1.0 - q0);
}

}  // namespace lora
