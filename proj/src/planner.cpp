#include "lora/planner.hpp"

#include <cmath>
#include <string>

#include "lora/errors.hpp"
#include "lora/units.hpp"

namespace lora {

PowerPolicy parse_power_policy(const std::string& text, const RadioLimits& limits) {
    PowerPolicy policy;
    if (text == "allocated") {
        policy.mode = PowerMode::AllocatedContinuous;
    } else if (text == "allocated-discrete") {
        policy.mode = PowerMode::AllocatedDiscrete;
    } else if (text == "fixed-max") {
        policy.mode = PowerMode::Fixed;
        policy.fixed_power_dbm = limits.max_power_dbm;
    } else if (text.rfind("fixed:", 0) == 0) {
        policy.mode = PowerMode::Fixed;
        try {
            std::size_t used = 0;
            policy.fixed_power_dbm = std::stod(text.substr(6), &used);
            if (used != text.size() - 6) {
                throw std::invalid_argument(text);
            }
        } catch (const std::exception&) {
            fail(errkind::invalid_config, "cannot parse power level in '" + text + "'");
        }
    } else {
        fail(errkind::invalid_config,
             "unknown policy '" + text +
                 "' (expected allocated, allocated-discrete, fixed-max or fixed:<dBm>)");
    }
    validate_policy(policy, limits);
    return policy;
}

std::string to_string(const PowerPolicy& policy) {
    switch (policy.mode) {
        case PowerMode::AllocatedContinuous:
            return "allocated";
        case PowerMode::AllocatedDiscrete:
            return "allocated-discrete";
        case PowerMode::Fixed:
            break;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "fixed:%.9g", policy.fixed_power_dbm);
    return buf;
}

void validate_policy(const PowerPolicy& policy, const RadioLimits& limits) {
    if (policy.mode != PowerMode::Fixed) {
        return;
    }
    if (!(policy.fixed_power_dbm >= limits.min_power_dbm &&
          policy.fixed_power_dbm <= limits.max_power_dbm)) {
        fail(errkind::infeasible_power, "fixed power outside the radio limits");
    }
}

Rounding parse_rounding(const std::string& text) {
    if (text == "floor") return Rounding::Floor;
    if (text == "nearest") return Rounding::Nearest;
    if (text == "ceil") return Rounding::Ceil;
    fail(errkind::invalid_config, "unknown rounding '" + text + "'");
}

std::string to_string(Rounding rounding) {
    switch (rounding) {
        case Rounding::Floor:
            return "floor";
        case Rounding::Nearest:
            return "nearest";
        case Rounding::Ceil:
            return "ceil";
    }
    return "floor";
}

int assign_ring(double distance_m, const CellGeometry& geometry) {
    if (!(distance_m > 0.0)) {
        fail(errkind::invalid_argument, "distance must be positive");
    }
    if (distance_m > geometry.coverage_radius_m()) {
        fail(errkind::out_of_coverage,
             "distance " + std::to_string(distance_m) + " m exceeds the coverage radius");
    }
    for (int i = 1; i <= 6; ++i) {
        if (distance_m <= geometry.edges_m[i]) {
            return i;
        }
    }
    fail(errkind::out_of_coverage, "unassignable distance");
}

double quantize_power_dbm(double power_w, const RadioLimits& limits) {
    if (!(power_w > 0.0)) {
        fail(errkind::invalid_argument, "power must be positive");
    }
    const double power_dbm = watt_to_dbm(power_w);
    const double tol = 1e-9 * limits.step_db;
    if (power_dbm > limits.max_power_dbm + tol) {
        fail(errkind::infeasible_power,
             "required power " + std::to_string(power_dbm) + " dBm exceeds the maximum level");
    }
    if (power_dbm <= limits.min_power_dbm) {
        return limits.min_power_dbm;
    }
    const double steps = std::ceil((power_dbm - limits.min_power_dbm) / limits.step_db - tol);
    return std::min(limits.min_power_dbm + steps * limits.step_db, limits.max_power_dbm);
}

namespace {

long round_capacity(double nodes, Rounding rounding) {
    switch (rounding) {
        case Rounding::Floor:
            return static_cast<long>(std::floor(nodes));
        case Rounding::Nearest:
            return std::lround(nodes);
        case Rounding::Ceil:
            return static_cast<long>(std::ceil(nodes));
    }
    return 0;
}

CellPlan assemble_plan(const CellGeometry& geometry, const OutageTargets& targets,
                       const PlanInputs& inputs, Rounding rounding,
                       const PowerPolicy& policy) {
    CellPlan plan;
    plan.inputs = inputs;
    plan.geometry = geometry;
    plan.disconnection_target = targets.disconnection_target;
    plan.total_target = targets.total_target;
    plan.policy = policy;
    plan.rounding = rounding;

    const double beta = max_ring_load(targets, inputs.channel);
    plan.total_capacity = 0;
    plan.total_nodes_unrounded = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double p = inputs.traffic.duty_cycles[i];
        const double nodes = beta / p;
        plan.ring_loads[i] = make_ring_load(i + 1, nodes, p, geometry.ring_area_m2(i + 1));
        plan.capacities[i] = round_capacity(nodes, rounding);
        plan.total_capacity += plan.capacities[i];
        plan.total_nodes_unrounded += nodes;
    }
    plan.average_power_dbm =
        watt_to_dbm(average_power(geometry, targets, inputs.profiles, inputs.channel));
    return plan;
}

}  // namespace

CellPlan plan_geometry_first(const OutageTargets& targets, const PlanInputs& inputs,
                             Rounding rounding, const PowerPolicy& policy) {
    validate_targets(targets);
    validate_policy(policy, inputs.limits);
    CellGeometry geometry;
    geometry.edges_m[0] = 0.0;
    for (int i = 0; i < 6; ++i) {
        geometry.edges_m[i + 1] =
            ring_edge(inputs.profiles[i], targets, inputs.limits, inputs.channel);
    }
    validate_geometry(geometry);
    return assemble_plan(geometry, targets, inputs, rounding, policy);
}

CellPlan plan_radius_first(double radius_m, double total_target, const PlanInputs& inputs,
                           Rounding rounding, const PowerPolicy& policy) {
    if (!(radius_m > 0.0)) {
        fail(errkind::invalid_argument, "radius must be positive");
    }
    if (!(total_target > 0.0 && total_target < 1.0)) {
        fail(errkind::infeasible_targets, "total outage target must lie in (0,1)");
    }
    validate_policy(policy, inputs.limits);

    // The outermost edge is the binding constraint: whatever disconnection
    // maximum power leaves there becomes the plan-wide target.
    const double t_h0 = disconnection_probability(radius_m, inputs.limits.max_power_w(),
                                                  inputs.profiles[5], inputs.channel);
    if (t_h0 >= total_target) {
        fail(errkind::infeasible_radius,
             "disconnection at " + std::to_string(radius_m) + " m with maximum power is " +
                 std::to_string(t_h0) + ", at or above the total outage target");
    }

    const OutageTargets targets{total_target, t_h0};
    CellGeometry geometry;
    geometry.edges_m[0] = 0.0;
    const double psi_outer = inputs.profiles[5].snr_threshold_linear();
    const double inv_eta = 1.0 / inputs.channel.path_loss_exponent;
    for (int i = 0; i < 6; ++i) {
        // ratio law: l_i / l_6 = (psi_6 / psi_i)^(1/eta); exact at i = 6
        geometry.edges_m[i + 1] =
            radius_m * std::pow(psi_outer / inputs.profiles[i].snr_threshold_linear(), inv_eta);
    }
    validate_geometry(geometry);
    return assemble_plan(geometry, targets, inputs, rounding, policy);
}

double power_map_w(const CellPlan& plan, const PowerPolicy& policy, double distance_m) {
    const int ring = assign_ring(distance_m, plan.geometry);
    const OutageTargets targets{plan.total_target, plan.disconnection_target};
    switch (policy.mode) {
        case PowerMode::AllocatedContinuous:
            return min_transmit_power(distance_m, plan.inputs.profiles[ring - 1], targets,
                                      plan.inputs.channel);
        case PowerMode::AllocatedDiscrete: {
            const double continuous = min_transmit_power(
                distance_m, plan.inputs.profiles[ring - 1], targets, plan.inputs.channel);
            return dbm_to_watt(quantize_power_dbm(continuous, plan.inputs.limits));
        }
        case PowerMode::Fixed:
            return dbm_to_watt(policy.fixed_power_dbm);
    }
    fail(errkind::invalid_argument, "unknown power mode");
}

double power_map_dbm(const CellPlan& plan, const PowerPolicy& policy, double distance_m) {
    return watt_to_dbm(power_map_w(plan, policy, distance_m));
}

}  // namespace lora
