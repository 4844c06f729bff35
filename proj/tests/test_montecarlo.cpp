#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lora/errors.hpp"
#include "lora/montecarlo.hpp"
#include "lora/units.hpp"

using namespace lora;
using namespace lora::mc;

namespace {

CellPlan reference_plan() {
    const PlanInputs inputs{eu868_suburban_channel(), eu868_suburban_profiles(),
                            eu868_suburban_traffic(), eu868_suburban_limits()};
    return plan_radius_first(1200.0, 0.01, inputs, Rounding::Floor,
                             PowerPolicy{PowerMode::AllocatedContinuous, 0.0});
}

constexpr PowerPolicy allocated{PowerMode::AllocatedContinuous, 0.0};

double pooled_sigma(double p1, double p2, long n1, long n2) {
    const double pooled = 0.5 * (p1 + p2);
    return std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
}

}  // namespace

TEST_CASE("stream derivation is stable and spreads") {
    CHECK(derive_stream_seed(1, 0) == derive_stream_seed(1, 0));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(1, 1));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(2, 0));
    std::vector<uint64_t> seeds;
    for (uint64_t i = 0; i < 1000; ++i) {
        seeds.push_back(derive_stream_seed(42, i));
    }
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("annulus sampling matches the uniform-disk law") {
    std::mt19937_64 rng(derive_stream_seed(7, 0));

    // unit disk: r^2 has mean 1/2 and variance 1/12
    const long n = 200000;
    double sum_r2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const double r = sample_annulus(0.0, 1.0, rng);
        sum_r2 += r * r;
    }
    const double mean_r2 = sum_r2 / n;
    const double sigma = std::sqrt(1.0 / 12.0 / n);
    CHECK(std::abs(mean_r2 - 0.5) < 3.0 * sigma);

    // Kolmogorov-Smirnov on the published SF11 annulus: r^2 uniform between
    // the squared edges, alpha = 0.01
    const double inner = 789.5;
    const double outer = 973.4;
    const long ks_n = 10000;
    std::vector<double> u(ks_n);
    for (long i = 0; i < ks_n; ++i) {
        const double r = sample_annulus(inner, outer, rng);
        u[static_cast<std::size_t>(i)] =
            (r * r - inner * inner) / (outer * outer - inner * inner);
        CHECK(r > inner);
        CHECK(r <= outer);
    }
    std::sort(u.begin(), u.end());
    double d_stat = 0.0;
    for (long i = 0; i < ks_n; ++i) {
        const double cdf = u[static_cast<std::size_t>(i)];
        const double lo = static_cast<double>(i) / ks_n;
        const double hi = static_cast<double>(i + 1) / ks_n;
        d_stat = std::max({d_stat, std::abs(cdf - lo), std::abs(cdf - hi)});
    }
    CHECK(d_stat < 1.62762 / std::sqrt(static_cast<double>(ks_n)));

    CHECK_THROWS_AS(sample_annulus(1.0, 1.0, rng), Error);
    CHECK_THROWS_AS(sample_annulus(2.0, 1.0, rng), Error);
}

TEST_CASE("active-count sampling is Poisson") {
    std::mt19937_64 rng(derive_stream_seed(11, 0));
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_active_count(0.0, rng) == 0);
    }

    const long n = 1000000;
    const double mean = 0.5;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long i = 0; i < n; ++i) {
        const double k = static_cast<double>(sample_active_count(mean, rng));
        sum += k;
        sum_sq += k * k;
    }
    const double sample_mean = sum / n;
    const double sample_var = sum_sq / n - sample_mean * sample_mean;
    const double sigma_mean = std::sqrt(mean / n);
    // var(S^2) for Poisson is (lambda + 2 lambda^2)/n
    const double sigma_var = std::sqrt((mean + 2.0 * mean * mean) / n);
    CHECK(std::abs(sample_mean - mean) < 3.0 * sigma_mean);
    CHECK(std::abs(sample_var - mean) < 3.0 * sigma_var);

    // small-load regime of the reference plan
    const double beta = 0.00685;
    const long m = 2000000;
    long nonzero = 0;
    for (long i = 0; i < m; ++i) {
        nonzero += sample_active_count(beta, rng) >= 1;
    }
    const double p_hat = static_cast<double>(nonzero) / m;
    const double p_true = -std::expm1(-beta);
    CHECK(std::abs(p_hat - p_true) < 3.0 * std::sqrt(p_true * (1.0 - p_true) / m));

    CHECK_THROWS_AS(sample_active_count(-0.5, rng), Error);
}

TEST_CASE("closed form, fading oracle and spatial simulator agree") {
    const CellPlan plan = reference_plan();
    const double delta = plan.inputs.channel.sir_threshold_linear();
    const long trials = 200000;
    int salt = 0;
    for (const double beta : {0.1, 0.5, 1.0, 2.0}) {
        const double analytic = collision_probability(beta, delta);
        const double oracle = collision_oracle_gamma_poisson(
            beta, delta, trials, derive_stream_seed(1001, salt));
        const auto spatial = simulate_outage(make_scenario(plan, allocated, 600.0, beta),
                                             trials, derive_stream_seed(2001, salt));
        ++salt;
        const double sigma = std::sqrt(analytic * (1.0 - analytic) / trials);
        CHECK(std::abs(oracle - analytic) < 3.0 * sigma);
        CHECK(std::abs(spatial.q0_hat - analytic) < 3.0 * sigma);
        CHECK(std::abs(spatial.q0_hat - oracle) <
              3.0 * pooled_sigma(spatial.q0_hat, oracle, trials, trials));
    }
    // frozen reference points of the closed form
    CHECK(collision_probability(0.5, delta) ==
          doctest::Approx(0.32942518095517816).epsilon(1e-12));
    CHECK(collision_probability(1.0, delta) ==
          doctest::Approx(0.5503294120630044).epsilon(1e-12));
    CHECK(collision_oracle_gamma_poisson(0.0, delta, 20000, 5) == 0.0);
}

TEST_CASE("power allocation pins simulated disconnection to the target") {
    const CellPlan plan = reference_plan();
    const long trials = 200000;
    const double target = plan.disconnection_target;
    int salt = 0;
    for (const double d : {240.0, 600.0, 1080.0}) {
        const auto estimate = simulate_outage(make_scenario(plan, allocated, d), trials,
                                              derive_stream_seed(3001, salt++));
        const double sigma = std::sqrt(target * (1.0 - target) / trials);
        CHECK(std::abs(estimate.h0_hat - target) < 3.0 * sigma);
    }
}

TEST_CASE("collision estimate is independent of the probe distance") {
    const CellPlan plan = reference_plan();
    const long trials = 200000;
    std::vector<OutageEstimate> estimates;
    int salt = 0;
    for (const double d : {240.0, 600.0, 1080.0}) {
        estimates.push_back(simulate_outage(make_scenario(plan, allocated, d, 0.5), trials,
                                            derive_stream_seed(4001, salt++)));
    }
    for (std::size_t a = 0; a < estimates.size(); ++a) {
        for (std::size_t b = a + 1; b < estimates.size(); ++b) {
            const double gap = std::abs(estimates[a].q0_hat - estimates[b].q0_hat);
            CHECK(gap < 3.0 * pooled_sigma(estimates[a].q0_hat, estimates[b].q0_hat, trials,
                                           trials));
        }
    }
}

TEST_CASE("estimates are deterministic and thread-count independent") {
    const CellPlan plan = reference_plan();
    const auto scenario = make_scenario(plan, allocated, 900.0, 0.5);
    const auto first = simulate_outage(scenario, 50000, 99, 1);
    const auto second = simulate_outage(scenario, 50000, 99, 1);
    const auto threaded = simulate_outage(scenario, 50000, 99, 4);
    CHECK(first.h0_hat == second.h0_hat);
    CHECK(first.q0_hat == second.q0_hat);
    CHECK(first.c0_hat == second.c0_hat);
    CHECK(first.h0_hat == threaded.h0_hat);
    CHECK(first.q0_hat == threaded.q0_hat);
    CHECK(first.c0_hat == threaded.c0_hat);

    const auto reseeded = simulate_outage(scenario, 50000, 100, 1);
    CHECK(first.q0_hat != reseeded.q0_hat);

    const double oracle_a = collision_oracle_gamma_poisson(0.5, 3.981, 50000, 7, 1);
    const double oracle_b = collision_oracle_gamma_poisson(0.5, 3.981, 50000, 7, 3);
    CHECK(oracle_a == oracle_b);
}

TEST_CASE("estimate bounds and empty-field convention") {
    const CellPlan plan = reference_plan();
    int salt = 0;
    for (const double beta : {0.0, 0.05, 0.5}) {
        const auto estimate = simulate_outage(make_scenario(plan, allocated, 1100.0, beta),
                                              50000, derive_stream_seed(5001, salt++));
        CHECK(estimate.c0_hat >= std::max(estimate.h0_hat, estimate.q0_hat));
        CHECK(estimate.c0_hat <= estimate.h0_hat + estimate.q0_hat);
        if (beta == 0.0) {
            CHECK(estimate.q0_hat == 0.0);
        }
        CHECK(estimate.ci_c0 ==
              doctest::Approx(1.959963984540054 *
                              std::sqrt(estimate.c0_hat * (1.0 - estimate.c0_hat) / 50000)));
    }
}

TEST_CASE("fixed power shows the near-far effect") {
    const CellPlan plan = reference_plan();
    const PowerPolicy fixed_max{PowerMode::Fixed, 14.0};
    const double inner = plan.geometry.inner_edge_m(5);
    const double outer = plan.geometry.outer_edge_m(5);
    const long trials = 200000;
    const auto near_probe = simulate_outage(
        make_scenario(plan, fixed_max, inner + 0.01 * (outer - inner), 0.5), trials, 6001);
    const auto far_probe = simulate_outage(make_scenario(plan, fixed_max, outer, 0.5), trials,
                                           6002);
    CHECK(far_probe.q0_hat - near_probe.q0_hat >
          3.0 * pooled_sigma(far_probe.q0_hat, near_probe.q0_hat, trials, trials));
}

TEST_CASE("scenario and budget validation") {
    const CellPlan plan = reference_plan();
    CHECK_THROWS_AS(simulate_outage(make_scenario(plan, allocated, 600.0), 100, 1), Error);
    try {
        simulate_outage(make_scenario(plan, allocated, 600.0), 9999, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == errkind::trial_budget);
    }
    CHECK_THROWS_AS(make_scenario(plan, allocated, 600.0, -1.0), Error);
    CHECK_THROWS_AS(make_scenario(plan, allocated, 1300.0), Error);
    CHECK_THROWS_AS(collision_oracle_gamma_poisson(-1.0, 3.98, 20000, 1), Error);
}

TEST_CASE("capacity search recovers the analytic plan under power allocation") {
    const CellPlan plan = reference_plan();
    CapacitySearchOptions options;
    options.trials_per_probe = 1500000;
    const CapacityResult result = find_max_capacity(plan, allocated, 0.01, options, 77);

    // same convention on both sides: floor(beta / p_i)
    CHECK(std::abs(static_cast<double>(result.total_capacity) -
                   static_cast<double>(plan.total_capacity)) <=
          0.03 * static_cast<double>(plan.total_capacity));
    for (const auto& ring : result.rings) {
        CHECK(ring.feasible);
        CHECK(std::abs(ring.beta_star - 0.006852565618716962) < 0.1 * 0.006852565618716962);
        CHECK(ring.ci_halfwidth > 0.0);
        CHECK(ring.ci_halfwidth < 0.001);
    }
}

TEST_CASE("capacity search is deterministic") {
    const CellPlan plan = reference_plan();
    CapacitySearchOptions options;
    options.trials_per_probe = 50000;
    const CapacityResult a = find_max_capacity(plan, allocated, 0.01, options, 5);
    const CapacityResult b = find_max_capacity(plan, allocated, 0.01, options, 5);
    CapacitySearchOptions threaded = options;
    threaded.threads = 3;
    const CapacityResult c = find_max_capacity(plan, allocated, 0.01, threaded, 5);
    for (int i = 0; i < 6; ++i) {
        CHECK(a.rings[i].beta_star == b.rings[i].beta_star);
        CHECK(a.rings[i].beta_star == c.rings[i].beta_star);
        CHECK(a.rings[i].capacity == b.rings[i].capacity);
    }
    CHECK(a.total_capacity == b.total_capacity);
    CHECK(a.total_capacity == c.total_capacity);
}

TEST_CASE("capacity search zero-budget diagnostic") {
    const CellPlan plan = reference_plan();
    // 10 dBm at the edges already violates the 1% target with no interference
    const PowerPolicy weak{PowerMode::Fixed, 10.0};
    CapacitySearchOptions options;
    options.trials_per_probe = 50000;
    const CapacityResult result = find_max_capacity(plan, weak, 0.01, options, 9);
    for (const auto& ring : result.rings) {
        CHECK_FALSE(ring.feasible);
        CHECK(ring.capacity == 0);
        CHECK(ring.beta_star == 0.0);
    }
    CHECK(result.total_capacity == 0);
}

TEST_CASE("capacity search rejects an unresolvable trial budget") {
    const CellPlan plan = reference_plan();
    CapacitySearchOptions options;
    options.trials_per_probe = 20000;  // CI half-width above a tenth of the target
    try {
        find_max_capacity(plan, allocated, 0.01, options, 1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errkind::trial_budget);
    }
}
