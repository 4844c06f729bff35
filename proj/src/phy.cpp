#include "lora/phy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lora/errors.hpp"
#include "lora/units.hpp"

namespace lora {

double SpreadingFactorProfile::snr_threshold_linear() const {
    return db_to_linear(snr_threshold_db);
}

double ChannelModel::noise_w() const { return dbm_to_watt(noise_power_dbm); }

double ChannelModel::sir_threshold_linear() const { return db_to_linear(sir_threshold_db); }

ChannelModel make_channel_model(double carrier_frequency_hz, double path_loss_exponent,
                                double noise_figure_db, double bandwidth_hz,
                                double noise_dbm, double sir_threshold_db) {
    ChannelModel channel;
    channel.carrier_frequency_hz = carrier_frequency_hz;
    channel.wavelength_m = speed_of_light_m_s / carrier_frequency_hz;
    channel.path_loss_exponent = path_loss_exponent;
    channel.noise_figure_db = noise_figure_db;
    channel.bandwidth_hz = bandwidth_hz;
    channel.noise_power_dbm = std::isnan(noise_dbm)
                                  ? noise_power_dbm(noise_figure_db, bandwidth_hz)
                                  : noise_dbm;
    channel.sir_threshold_db = sir_threshold_db;
    validate_channel(channel);
    return channel;
}

TrafficProfile make_traffic_profile(double message_period_s, const SfTable& profiles) {
    TrafficProfile traffic;
    traffic.message_period_s = message_period_s;
    for (int i = 0; i < 6; ++i) {
        traffic.duty_cycles[i] = duty_cycle(profiles[i].time_on_air_s, message_period_s);
    }
    validate_traffic(traffic);
    return traffic;
}

double RadioLimits::max_power_w() const { return dbm_to_watt(max_power_dbm); }

int RadioLimits::level_count() const {
    return 1 + static_cast<int>(std::lround((max_power_dbm - min_power_dbm) / step_db));
}

void validate_profiles(const SfTable& profiles, double noise_dbm) {
    for (int i = 0; i < 6; ++i) {
        const auto& row = profiles[i];
        if (row.ring_index != i + 1) {
            fail(errkind::invalid_config, "profile rows must be ordered by ring index 1..6");
        }
        if (row.sf != row.ring_index + 6) {
            fail(errkind::invalid_config,
                 "ring " + std::to_string(row.ring_index) + " must use SF" +
                     std::to_string(row.ring_index + 6));
        }
        if (row.time_on_air_s <= 0.0) {
            fail(errkind::invalid_config, "time on air must be positive");
        }
        if (i > 0) {
            if (row.time_on_air_s <= profiles[i - 1].time_on_air_s) {
                fail(errkind::invalid_config, "time on air must increase with the ring index");
            }
            if (row.snr_threshold_db >= profiles[i - 1].snr_threshold_db) {
                fail(errkind::invalid_config, "SNR threshold must decrease with the ring index");
            }
        }
        // Sensitivity is the noise floor plus the SNR threshold; only checkable
        // against the -117 dBm floor the table rows are quoted for.
        if (std::abs(noise_dbm + 117.0) < 1e-9 &&
            std::abs(row.sensitivity_dbm - (noise_dbm + row.snr_threshold_db)) > 1e-9) {
            fail(errkind::invalid_config,
                 "sensitivity of ring " + std::to_string(row.ring_index) +
                     " is inconsistent with the noise floor and SNR threshold");
        }
    }
}

void validate_channel(const ChannelModel& channel) {
    if (channel.carrier_frequency_hz <= 0.0) {
        fail(errkind::invalid_config, "carrier frequency must be positive");
    }
    if (std::abs(channel.wavelength_m - speed_of_light_m_s / channel.carrier_frequency_hz) >
        1e-9 * channel.wavelength_m) {
        fail(errkind::invalid_config, "wavelength inconsistent with the carrier frequency");
    }
    if (!(channel.path_loss_exponent > 2.0)) {
        fail(errkind::invalid_config, "path loss exponent must exceed 2");
    }
    if (channel.bandwidth_hz <= 0.0) {
        fail(errkind::invalid_config, "bandwidth must be positive");
    }
    if (!std::isfinite(channel.noise_power_dbm)) {
        fail(errkind::invalid_config, "noise power must be finite");
    }
    if (!std::isfinite(channel.sir_threshold_db) || channel.sir_threshold_linear() <= 0.0) {
        fail(errkind::invalid_config, "SIR threshold must be finite");
    }
}

void validate_traffic(const TrafficProfile& traffic) {
    if (traffic.message_period_s <= 0.0) {
        fail(errkind::invalid_config, "message period must be positive");
    }
    for (int i = 0; i < 6; ++i) {
        const double p = traffic.duty_cycles[i];
        if (!(p > 0.0 && p <= 1.0)) {
            fail(errkind::invalid_config, "duty cycles must lie in (0,1]");
        }
        if (i > 0 && p <= traffic.duty_cycles[i - 1]) {
            fail(errkind::invalid_config, "duty cycles must increase with the ring index");
        }
    }
}

void validate_limits(const RadioLimits& limits) {
    if (limits.min_power_dbm > limits.max_power_dbm) {
        fail(errkind::invalid_config, "min power exceeds max power");
    }
    if (!(limits.step_db > 0.0)) {
        fail(errkind::invalid_config, "power step must be positive");
    }
    const double span = limits.max_power_dbm - limits.min_power_dbm;
    if (std::abs(std::remainder(span, limits.step_db)) > 1e-9) {
        fail(errkind::invalid_config, "power span must be an integer number of steps");
    }
}

double path_loss_gain(double distance_m, double wavelength_m, double path_loss_exponent) {
    if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
        fail(errkind::invalid_argument, "distance must be positive");
    }
    return std::pow(wavelength_m / (4.0 * std::numbers::pi * distance_m), path_loss_exponent);
}

double path_loss_gain(double distance_m, const ChannelModel& channel) {
    return path_loss_gain(distance_m, channel.wavelength_m, channel.path_loss_exponent);
}

const SfTable& eu868_suburban_profiles() {
    // 19-byte packets (13-byte header, 6-byte payload), 125 kHz.
    static const SfTable table = {{
        {1, 7, 0.05146, -6.0, -123.0, 5.46},
        {2, 8, 0.10291, -9.0, -126.0, 3.12},
        {3, 9, 0.18534, -12.0, -129.0, 1.75},
        {4, 10, 0.32973, -15.0, -132.0, 0.97},
        {5, 11, 0.74138, -17.5, -134.5, 0.53},
        {6, 12, 1.31891, -20.0, -137.0, 0.29},
    }};
    return table;
}

ChannelModel eu868_suburban_channel() {
    return make_channel_model(868e6, 2.75, 6.0, 125e3, -117.0, 6.0);
}

TrafficProfile eu868_suburban_traffic() {
    return make_traffic_profile(900.0, eu868_suburban_profiles());
}

RadioLimits eu868_suburban_limits() { return {-1.0, 14.0, 1.0}; }

}  // namespace lora
