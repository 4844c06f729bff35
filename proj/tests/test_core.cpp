#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lora/errors.hpp"
#include "lora/phy.hpp"
#include "lora/units.hpp"

using namespace lora;

TEST_CASE("dbm/watt conversion") {
    CHECK(dbm_to_watt(0.0) == doctest::Approx(0.001).epsilon(1e-12));
    CHECK(dbm_to_watt(14.0) == doctest::Approx(0.025118864315095794).epsilon(1e-12));
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(watt_to_dbm(1.0) == doctest::Approx(30.0).epsilon(1e-12));
    CHECK_THROWS_AS(dbm_to_watt(std::nan("")), Error);
    CHECK_THROWS_AS(watt_to_dbm(-1.0), Error);
    // strictly monotone
    double last = 0.0;
    for (double p = -40.0; p <= 40.0; p += 0.5) {
        const double w = dbm_to_watt(p);
        CHECK(w > last);
        last = w;
    }
}

TEST_CASE("dB/linear conversion and round trip") {
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(db_to_linear(6.0) == doctest::Approx(3.9810717055349722).epsilon(1e-12));
    CHECK(db_to_linear(-20.0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK_THROWS_AS(db_to_linear(std::numeric_limits<double>::infinity()), Error);
    CHECK_THROWS_AS(linear_to_db(0.0), Error);

    for (double exponent = -20.0; exponent <= 3.0; exponent += 0.25) {
        const double x = std::pow(10.0, exponent);
        CHECK(db_to_linear(linear_to_db(x)) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("noise power from noise figure and bandwidth") {
    CHECK(noise_power_dbm(6.0, 125e3) == doctest::Approx(-117.03089986991944).epsilon(1e-12));
    CHECK(noise_power_dbm(0.0, 1.0) == doctest::Approx(-174.0).epsilon(1e-12));
    CHECK(noise_power_dbm(6.0, 250e3) == doctest::Approx(-114.02059991327962).epsilon(1e-12));
    CHECK_THROWS_AS(noise_power_dbm(6.0, 0.0), Error);
    CHECK_THROWS_AS(noise_power_dbm(6.0, -5.0), Error);
}

TEST_CASE("duty cycle") {
    CHECK(duty_cycle(0.05146, 900.0) == doctest::Approx(57.17777777777778e-6).epsilon(1e-12));
    CHECK(duty_cycle(1.31891, 900.0) == doctest::Approx(1465.4555555555556e-6).epsilon(1e-12));
    CHECK(duty_cycle(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(duty_cycle(2.0, 1.0), Error);
    CHECK_THROWS_AS(duty_cycle(0.0, 1.0), Error);
    CHECK_THROWS_AS(duty_cycle(1.0, 0.0), Error);
}

TEST_CASE("uplink table invariants") {
    const SfTable& table = eu868_suburban_profiles();
    for (int i = 0; i < 6; ++i) {
        CHECK(table[i].ring_index == i + 1);
        CHECK(table[i].sf == i + 7);
        // sensitivity = noise floor + SNR threshold, exact in dB
        CHECK(table[i].sensitivity_dbm ==
              doctest::Approx(-117.0 + table[i].snr_threshold_db).epsilon(1e-15));
        if (i > 0) {
            CHECK(table[i].time_on_air_s > table[i - 1].time_on_air_s);
            CHECK(table[i].snr_threshold_db < table[i - 1].snr_threshold_db);
        }
    }
    CHECK_NOTHROW(validate_profiles(table, -117.0));

    SfTable broken = table;
    broken[3].sensitivity_dbm = -131.0;
    CHECK_THROWS_AS(validate_profiles(broken, -117.0), Error);
}

TEST_CASE("derived duty cycles track the published per-ring activity") {
    const TrafficProfile traffic = eu868_suburban_traffic();
    const double published[6] = {57.1e-6, 114.3e-6, 205.9e-6, 366.3e-6, 823.7e-6, 1465.4e-6};
    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(traffic.duty_cycles[i] - published[i]) / published[i] < 0.005);
        if (i > 0) {
            CHECK(traffic.duty_cycles[i] > traffic.duty_cycles[i - 1]);
        }
    }
}

TEST_CASE("channel model derivation") {
    const ChannelModel channel = eu868_suburban_channel();
    CHECK(channel.wavelength_m == doctest::Approx(0.34538301612903226).epsilon(1e-14));
    CHECK(channel.noise_power_dbm == doctest::Approx(-117.0).epsilon(1e-15));
    CHECK(channel.sir_threshold_linear() == doctest::Approx(3.9810717055349722).epsilon(1e-12));

    // derived noise floor when none is supplied
    const ChannelModel derived =
        make_channel_model(868e6, 2.75, 6.0, 125e3, std::nan(""), 6.0);
    CHECK(derived.noise_power_dbm == doctest::Approx(-117.03089986991944).epsilon(1e-12));

    CHECK_THROWS_AS(make_channel_model(868e6, 2.0, 6.0, 125e3, -117.0, 6.0), Error);
    CHECK_THROWS_AS(make_channel_model(868e6, 2.75, 6.0, 0.0, -117.0, 6.0), Error);
}

TEST_CASE("path loss gain") {
    const ChannelModel channel = eu868_suburban_channel();
    const double unit_distance = channel.wavelength_m / (4.0 * 3.14159265358979323846);
    CHECK(path_loss_gain(unit_distance, channel) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(path_loss_gain(1200.0, channel) ==
          doctest::Approx(1.7368093007144791e-13).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss_gain(0.0, channel), Error);
    CHECK_THROWS_AS(path_loss_gain(-3.0, channel), Error);

    // power-law symmetry and log-log linearity with slope -eta
    for (const double d : {10.0, 321.0, 997.0}) {
        CHECK(path_loss_gain(2.0 * d, channel) / path_loss_gain(d, channel) ==
              doctest::Approx(std::pow(2.0, -2.75)).epsilon(1e-12));
    }
    const double d1 = 50.0;
    const double d2 = 500.0;
    const double slope = (std::log(path_loss_gain(d2, channel)) -
                          std::log(path_loss_gain(d1, channel))) /
                         (std::log(d2) - std::log(d1));
    CHECK(slope == doctest::Approx(-2.75).epsilon(1e-12));

    double previous = path_loss_gain(1.0, channel);
    for (double d = 2.0; d <= 2000.0; d += 1.0) {
        const double g = path_loss_gain(d, channel);
        CHECK(g < previous);
        previous = g;
    }
}

TEST_CASE("radio limits") {
    const RadioLimits limits = eu868_suburban_limits();
    CHECK_NOTHROW(validate_limits(limits));
    CHECK(limits.level_count() == 16);
    CHECK(limits.max_power_w() == doctest::Approx(0.025118864315095794).epsilon(1e-12));

    CHECK_THROWS_AS(validate_limits(RadioLimits{14.0, -1.0, 1.0}), Error);
    CHECK_THROWS_AS(validate_limits(RadioLimits{-1.0, 14.0, 0.0}), Error);
    CHECK_THROWS_AS(validate_limits(RadioLimits{-1.0, 14.0, 0.7}), Error);
}
