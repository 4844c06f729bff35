#pragma once

#include <array>
#include <string>

#include "lora/analytic.hpp"
#include "lora/phy.hpp"

namespace lora {

enum class PowerMode { AllocatedContinuous, AllocatedDiscrete, Fixed };

struct PowerPolicy {
    PowerMode mode = PowerMode::AllocatedContinuous;
    double fixed_power_dbm = 0.0;  // only meaningful for Fixed
};

// Accepts "allocated", "allocated-discrete", "fixed-max" and "fixed:<dBm>".
PowerPolicy parse_power_policy(const std::string& text, const RadioLimits& limits);
std::string to_string(const PowerPolicy& policy);
void validate_policy(const PowerPolicy& policy, const RadioLimits& limits);

enum class Rounding { Floor, Nearest, Ceil };

Rounding parse_rounding(const std::string& text);
std::string to_string(Rounding rounding);

// Everything a plan was computed from; kept with the plan so downstream
// consumers (power map, simulation, serialization) are self-contained.
struct PlanInputs {
    ChannelModel channel;
    SfTable profiles;
    TrafficProfile traffic;
    RadioLimits limits;
};

struct CellPlan {
    PlanInputs inputs;
    CellGeometry geometry;
    double disconnection_target = 0.0;  // T_H0 in effect for this plan
    double total_target = 0.0;          // T_C0
    std::array<RingLoad, 6> ring_loads{};
    std::array<long, 6> capacities{};
    long total_capacity = 0;
    double total_nodes_unrounded = 0.0;
    double average_power_dbm = 0.0;
    PowerPolicy policy;
    Rounding rounding = Rounding::Floor;
};

// Ring containing distance d; edges belong to their inner ring, so ring i
// spans (l_{i-1}, l_i].
int assign_ring(double distance_m, const CellGeometry& geometry);

// Smallest grid level at or above the requested power, clamped to the grid
// floor; infeasible above max_power.
double quantize_power_dbm(double power_w, const RadioLimits& limits);

// Geometry-first entry: the disconnection target is given, ring edges follow
// from it and the radius is an output.
CellPlan plan_geometry_first(const OutageTargets& targets, const PlanInputs& inputs,
                             Rounding rounding, const PowerPolicy& policy);

// Radius-first entry: the coverage radius is given; the disconnection target
// is what maximum power achieves at the outermost edge, and the remaining
// budget goes to interference.
CellPlan plan_radius_first(double radius_m, double total_target, const PlanInputs& inputs,
                           Rounding rounding, const PowerPolicy& policy);

// Transmit power a node at distance d uses under the given policy.
double power_map_dbm(const CellPlan& plan, const PowerPolicy& policy, double distance_m);
double power_map_w(const CellPlan& plan, const PowerPolicy& policy, double distance_m);

}  // namespace lora
