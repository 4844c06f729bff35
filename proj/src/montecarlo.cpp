#include "lora/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "lora/errors.hpp"
#include "lora/units.hpp"

namespace lora {
namespace mc {

namespace {

// Knuth sampler ceases to be exact once exp(-mean) underflows; the loads in
// this domain are orders of magnitude below the guard.
constexpr double max_poisson_mean = 500.0;

constexpr double z_95 = 1.959963984540054;

double ci_halfwidth(double p_hat, long trials) {
    return z_95 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

long knuth_poisson(double exp_neg_mean, std::mt19937_64& rng) {
    long count = 0;
    double product = 1.0;
    do {
        ++count;
        product *= sample_uniform01(rng);
    } while (product > exp_neg_mean);
    return count - 1;
}

struct TrialCounts {
    long disconnect = 0;
    long collide = 0;
    long either = 0;
};

// Runs `trials` trials split into fixed blocks; the block partition and the
// per-block seeds do not depend on the thread count, and the integer counts
// make aggregation order-insensitive.
template <typename TrialFn>
TrialCounts run_trials(long trials, uint64_t master_seed, int threads, const TrialFn& trial) {
    const long n_blocks = (trials + trials_per_block - 1) / trials_per_block;
    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = static_cast<int>(std::max<long>(1, std::min<long>(n_threads, n_blocks)));

    auto run_block = [&](long block, TrialCounts& acc) {
        std::mt19937_64 rng(derive_stream_seed(master_seed, static_cast<uint64_t>(block)));
        const long count = std::min(trials_per_block, trials - block * trials_per_block);
        for (long i = 0; i < count; ++i) {
            const auto [disconnect, collide] = trial(rng);
            acc.disconnect += disconnect;
            acc.collide += collide;
            acc.either += (disconnect || collide);
        }
    };

    if (n_threads == 1) {
        TrialCounts total;
        for (long b = 0; b < n_blocks; ++b) {
            run_block(b, total);
        }
        return total;
    }

    std::atomic<long> next_block{0};
    std::vector<TrialCounts> partial(static_cast<std::size_t>(n_threads));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            for (;;) {
                const long b = next_block.fetch_add(1, std::memory_order_relaxed);
                if (b >= n_blocks) {
                    break;
                }
                run_block(b, partial[static_cast<std::size_t>(t)]);
            }
        });
    }
    for (auto& worker : pool) {
        worker.join();
    }
    TrialCounts total;
    for (const auto& part : partial) {
        total.disconnect += part.disconnect;
        total.collide += part.collide;
        total.either += part.either;
    }
    return total;
}

}  // namespace

uint64_t splitmix64_mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint64_t derive_stream_seed(uint64_t master_seed, uint64_t index) {
    return splitmix64_mix(master_seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

double sample_uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sample_exponential(std::mt19937_64& rng) {
    return -std::log1p(-sample_uniform01(rng));
}

long sample_active_count(double mean, std::mt19937_64& rng) {
    if (!(mean >= 0.0)) {
        fail(errkind::invalid_argument, "mean active interferer count must be nonnegative");
    }
    if (mean > max_poisson_mean) {
        fail(errkind::invalid_argument, "mean active interferer count too large to sample");
    }
    return knuth_poisson(std::exp(-mean), rng);
}

double sample_annulus(double inner_m, double outer_m, std::mt19937_64& rng) {
    if (!(inner_m >= 0.0) || !(inner_m < outer_m)) {
        fail(errkind::invalid_argument, "annulus requires 0 <= inner < outer");
    }
    const double u = sample_uniform01(rng);
    return std::sqrt(inner_m * inner_m + u * (outer_m * outer_m - inner_m * inner_m));
}

Scenario make_scenario(const CellPlan& plan, const PowerPolicy& policy,
                       double probe_distance_m) {
    validate_policy(policy, plan.inputs.limits);
    Scenario scenario;
    scenario.plan = plan;
    scenario.policy = policy;
    scenario.probe_distance_m = probe_distance_m;
    scenario.probe_ring = assign_ring(probe_distance_m, plan.geometry);
    scenario.mean_active_interferers =
        plan.ring_loads[scenario.probe_ring - 1].mean_active_interferers;
    return scenario;
}

Scenario make_scenario(const CellPlan& plan, const PowerPolicy& policy,
                       double probe_distance_m, double beta_override) {
    Scenario scenario = make_scenario(plan, policy, probe_distance_m);
    if (!(beta_override >= 0.0) || beta_override > max_poisson_mean) {
        fail(errkind::invalid_argument, "mean active interferer count out of range");
    }
    scenario.mean_active_interferers = beta_override;
    return scenario;
}

OutageEstimate simulate_outage(const Scenario& scenario, long trials, uint64_t seed,
                               int threads) {
    if (trials < min_trials) {
        fail(errkind::trial_budget,
             "at least " + std::to_string(min_trials) + " trials required");
    }
    if (scenario.probe_ring != assign_ring(scenario.probe_distance_m, scenario.plan.geometry)) {
        fail(errkind::invalid_argument, "probe ring does not match the probe distance");
    }

    const CellPlan& plan = scenario.plan;
    const ChannelModel& channel = plan.inputs.channel;
    const SpreadingFactorProfile& profile = plan.inputs.profiles[scenario.probe_ring - 1];
    const OutageTargets targets{plan.total_target, plan.disconnection_target};

    const double probe_rx_w = power_map_w(plan, scenario.policy, scenario.probe_distance_m) *
                              path_loss_gain(scenario.probe_distance_m, channel);
    const double snr_floor_w = profile.snr_threshold_linear() * channel.noise_w();
    const double capture = channel.sir_threshold_linear();
    const double inner = plan.geometry.inner_edge_m(scenario.probe_ring);
    const double outer = plan.geometry.outer_edge_m(scenario.probe_ring);
    const double exp_neg_beta = std::exp(-scenario.mean_active_interferers);

    // Interferers are members of the probe's ring, so their SF profile is
    // fixed; only position, fading and the policy decide their received power.
    const PowerMode mode = scenario.policy.mode;
    const double fixed_w = mode == PowerMode::Fixed
                               ? dbm_to_watt(scenario.policy.fixed_power_dbm)
                               : 0.0;
    auto interferer_tx_w = [&](double r) {
        if (mode == PowerMode::Fixed) {
            return fixed_w;
        }
        const double continuous = min_transmit_power(r, profile, targets, channel);
        if (mode == PowerMode::AllocatedContinuous) {
            return continuous;
        }
        return dbm_to_watt(quantize_power_dbm(continuous, plan.inputs.limits));
    };

    auto trial = [&](std::mt19937_64& rng) -> std::pair<bool, bool> {
        const double probe_fading = sample_exponential(rng);
        const long interferers = knuth_poisson(exp_neg_beta, rng);
        const bool disconnect = probe_rx_w * probe_fading < snr_floor_w;
        bool collide = false;
        if (interferers > 0) {
            double interference_w = 0.0;
            for (long k = 0; k < interferers; ++k) {
                const double r = sample_annulus(inner, outer, rng);
                const double fading = sample_exponential(rng);
                interference_w += interferer_tx_w(r) * path_loss_gain(r, channel) * fading;
            }
            collide = probe_rx_w * probe_fading < capture * interference_w;
        }
        return {disconnect, collide};
    };

    const TrialCounts counts = run_trials(trials, seed, threads, trial);
    const double n = static_cast<double>(trials);
    OutageEstimate estimate;
    estimate.h0_hat = counts.disconnect / n;
    estimate.q0_hat = counts.collide / n;
    estimate.c0_hat = counts.either / n;
    estimate.ci_h0 = ci_halfwidth(estimate.h0_hat, trials);
    estimate.ci_q0 = ci_halfwidth(estimate.q0_hat, trials);
    estimate.ci_c0 = ci_halfwidth(estimate.c0_hat, trials);
    estimate.trials = trials;
    estimate.seed = seed;
    return estimate;
}

double collision_oracle_gamma_poisson(double mean_active_interferers,
                                      double sir_threshold_linear, long trials,
                                      uint64_t seed, int threads) {
    if (!(mean_active_interferers >= 0.0) || mean_active_interferers > max_poisson_mean) {
        fail(errkind::invalid_argument, "mean active interferer count out of range");
    }
    if (!(sir_threshold_linear > 0.0)) {
        fail(errkind::invalid_argument, "SIR threshold must be positive");
    }
    if (trials < min_trials) {
        fail(errkind::trial_budget,
             "at least " + std::to_string(min_trials) + " trials required");
    }
    const double exp_neg_beta = std::exp(-mean_active_interferers);
    auto trial = [&](std::mt19937_64& rng) -> std::pair<bool, bool> {
        const long count = knuth_poisson(exp_neg_beta, rng);
        if (count == 0) {
            return {false, false};
        }
        double gamma_sum = 0.0;
        for (long k = 0; k < count; ++k) {
            gamma_sum += sample_exponential(rng);
        }
        const double probe_fading = sample_exponential(rng);
        return {false, probe_fading < sir_threshold_linear * gamma_sum};
    };
    const TrialCounts counts = run_trials(trials, seed, threads, trial);
    return counts.collide / static_cast<double>(trials);
}

CapacityResult find_max_capacity(const CellPlan& plan, const PowerPolicy& policy,
                                 double total_target, const CapacitySearchOptions& options,
                                 uint64_t seed) {
    if (!(total_target > 0.0 && total_target < 1.0)) {
        fail(errkind::infeasible_targets, "total outage target must lie in (0,1)");
    }
    validate_policy(policy, plan.inputs.limits);
    // The stopping rule needs the estimate CI to resolve a tenth of the
    // target; otherwise the bisection cannot terminate meaningfully.
    if (ci_halfwidth(total_target, options.trials_per_probe) >= 0.1 * total_target) {
        fail(errkind::trial_budget,
             "trial budget cannot resolve the outage target to 10%; increase trials");
    }

    const ChannelModel& channel = plan.inputs.channel;
    const double delta = channel.sir_threshold_linear();

    CapacityResult result;
    result.total_capacity = 0;
    for (int ring = 1; ring <= 6; ++ring) {
        RingCapacity& entry = result.rings[static_cast<std::size_t>(ring - 1)];
        entry.ring_index = ring;

        const double edge = plan.geometry.outer_edge_m(ring);
        const double duty = plan.inputs.traffic.duty_cycles[ring - 1];
        const double edge_power_w = power_map_w(plan, policy, edge);
        const double h0_edge = disconnection_probability(edge, edge_power_w,
                                                         plan.inputs.profiles[ring - 1], channel);
        if (h0_edge >= total_target) {
            // No interference budget left at the worst-case probe.
            entry.feasible = false;
            entry.beta_star = 0.0;
            entry.capacity = 0;
            entry.ci_halfwidth = 0.0;
            continue;
        }

        long evals = 0;
        OutageEstimate last;
        auto evaluate = [&](double beta) {
            const uint64_t eval_seed = derive_stream_seed(
                seed, (static_cast<uint64_t>(ring) << 32) | static_cast<uint64_t>(evals++));
            last = simulate_outage(make_scenario(plan, policy, edge, beta),
                                   options.trials_per_probe, eval_seed, options.threads);
            return last.c0_hat;
        };

        // Channel-inversion budget as the first bracket guess; the true root
        // sits at or below it for fixed-power policies (near interferers are
        // louder than the edge probe).
        const double q_budget = (total_target - h0_edge) / (1.0 - h0_edge);
        const double beta_guess = -(delta + 1.0) / delta * std::log1p(-q_budget);
        double lo = 0.0;
        double hi = std::max(2.0 * beta_guess, 1e-4);
        while (hi < max_poisson_mean && evaluate(hi) < total_target) {
            lo = hi;
            hi *= 2.0;
        }
        if (hi >= max_poisson_mean) {
            fail(errkind::invalid_argument,
                 "capacity search failed to bracket the outage target in ring " +
                     std::to_string(ring));
        }
        while (hi - lo > options.bracket_rel_width * 0.5 * (hi + lo)) {
            const double mid = 0.5 * (lo + hi);
            if (evaluate(mid) >= total_target) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        entry.beta_star = 0.5 * (lo + hi);
        entry.capacity = static_cast<long>(std::floor(entry.beta_star / duty));
        entry.ci_halfwidth = last.ci_c0;
        entry.feasible = true;
        result.total_capacity += entry.capacity;
    }
    return result;
}

}  // namespace mc
}  // namespace lora
