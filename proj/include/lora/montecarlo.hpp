#pragma once

#include <cstdint>
#include <random>

#include "lora/planner.hpp"

namespace lora {
namespace mc {

// Reproducibility contract
// ------------------------
// Estimates are a pure function of (scenario, trials, master seed). Trials
// are partitioned into fixed blocks of `trials_per_block`; block b runs on a
// std::mt19937_64 seeded with derive_stream_seed(master_seed, b). Blocks may
// execute on any number of threads; aggregation sums integer flag counts, so
// results are bit-identical for every thread count. All variates use
// explicit algorithms (53-bit uniforms, inverse-CDF exponentials, Knuth
// Poisson) rather than std::*_distribution, so the random streams do not
// depend on the standard library implementation.

inline constexpr long trials_per_block = 16384;

uint64_t splitmix64_mix(uint64_t z);

// Seed of the b-th substream of a master seed. Nested contexts (e.g. one
// search evaluation) derive a sub-master with a context index first, then
// hand it to the block partitioner.
uint64_t derive_stream_seed(uint64_t master_seed, uint64_t index);

double sample_uniform01(std::mt19937_64& rng);  // [0,1), 53-bit
double sample_exponential(std::mt19937_64& rng);  // unit mean

// Poisson count of active interferers with the given mean.
long sample_active_count(double mean, std::mt19937_64& rng);

// Radius of a point uniform in the annulus [inner, outer): density
// proportional to r, via r = sqrt(inner^2 + u (outer^2 - inner^2)).
double sample_annulus(double inner_m, double outer_m, std::mt19937_64& rng);

// One probe node plus a Poisson field of same-ring interferers.
struct Scenario {
    CellPlan plan;
    PowerPolicy policy;
    double probe_distance_m = 0.0;
    int probe_ring = 0;                    // = assign_ring(probe_distance)
    double mean_active_interferers = 0.0;  // beta of the probe's ring
};

Scenario make_scenario(const CellPlan& plan, const PowerPolicy& policy,
                       double probe_distance_m);
Scenario make_scenario(const CellPlan& plan, const PowerPolicy& policy,
                       double probe_distance_m, double beta_override);

struct OutageEstimate {
    double h0_hat = 0.0;
    double q0_hat = 0.0;
    double c0_hat = 0.0;
    double ci_h0 = 0.0;  // 95% normal-approximation half-widths
    double ci_q0 = 0.0;
    double ci_c0 = 0.0;
    long trials = 0;
    uint64_t seed = 0;
};

inline constexpr long min_trials = 10000;

// Per trial: Rayleigh fading power on the probe link decides disconnection
// against the SNR threshold; a Poisson number of same-ring interferers with
// annulus-uniform positions, policy-driven powers and independent fadings
// decides collision against the SIR capture threshold (no interferers, no
// collision). threads = 0 picks the hardware count; the result does not
// depend on it.
OutageEstimate simulate_outage(const Scenario& scenario, long trials, uint64_t seed,
                               int threads = 0);

// Fading-only collision estimator: N ~ Poisson(beta), X ~ Gamma(N, 1) as a
// sum of unit exponentials, collision when |h|^2 < delta X. Independent of
// the spatial simulator; used to cross-validate it and the closed form.
double collision_oracle_gamma_poisson(double mean_active_interferers,
                                      double sir_threshold_linear, long trials,
                                      uint64_t seed, int threads = 0);

struct RingCapacity {
    int ring_index = 0;
    double beta_star = 0.0;
    long capacity = 0;
    double ci_halfwidth = 0.0;
    bool feasible = true;  // false: edge violates the target with zero interferers
};

struct CapacityResult {
    std::array<RingCapacity, 6> rings{};
    long total_capacity = 0;
};

struct CapacitySearchOptions {
    long trials_per_probe = 200000;
    double bracket_rel_width = 0.01;  // stop when bracket < 1% of beta
    int threads = 0;
};

// Per ring, bisection on beta with the probe at the outer edge (worst case)
// until the simulated total outage meets the target within the stopping
// rule. Returns floor(beta/p_i) per ring. Deterministic given the seed.
CapacityResult find_max_capacity(const CellPlan& plan, const PowerPolicy& policy,
                                 double total_target, const CapacitySearchOptions& options,
                                 uint64_t seed);

}  // namespace mc
}  // namespace lora
