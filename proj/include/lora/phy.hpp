#pragma once

#include <array>

namespace lora {

// One uplink characteristics row: ring i (annulus index, 1..6) uses SF i+6.
struct SpreadingFactorProfile {
    int ring_index = 0;           // 1..6
    int sf = 0;                   // 7..12
    double time_on_air_s = 0.0;   // packet ToA at this SF
    double snr_threshold_db = 0.0;
    double sensitivity_dbm = 0.0;
    double bitrate_kbps = 0.0;    // informational

    double snr_threshold_linear() const;
};

using SfTable = std::array<SpreadingFactorProfile, 6>;

struct ChannelModel {
    double carrier_frequency_hz = 0.0;
    double wavelength_m = 0.0;  // derived: c / carrier_frequency
    double path_loss_exponent = 0.0;
    double noise_figure_db = 0.0;
    double bandwidth_hz = 0.0;
    double noise_power_dbm = 0.0;
    double sir_threshold_db = 0.0;

    double noise_w() const;
    double sir_threshold_linear() const;
};

// Builds a channel with wavelength derived from the carrier and, when
// noise_dbm is NaN, the noise floor derived from NF and bandwidth.
ChannelModel make_channel_model(double carrier_frequency_hz, double path_loss_exponent,
                                double noise_figure_db, double bandwidth_hz,
                                double noise_dbm, double sir_threshold_db);

struct TrafficProfile {
    double message_period_s = 0.0;
    std::array<double, 6> duty_cycles{};  // per-ring transmit probability
};

// Duty cycles derived from the SF table: p_i = ToA_i / T.
TrafficProfile make_traffic_profile(double message_period_s, const SfTable& profiles);

struct RadioLimits {
    double min_power_dbm = 0.0;
    double max_power_dbm = 0.0;
    double step_db = 0.0;

    double max_power_w() const;
    int level_count() const;
};

void validate_profiles(const SfTable& profiles, double noise_power_dbm);
void validate_channel(const ChannelModel& channel);
void validate_traffic(const TrafficProfile& traffic);
void validate_limits(const RadioLimits& limits);

// Free-space style power-law gain (lambda / (4 pi d))^eta; strictly
// decreasing in d.
double path_loss_gain(double distance_m, const ChannelModel& channel);
double path_loss_gain(double distance_m, double wavelength_m, double path_loss_exponent);

// Built-in parameter set reproducing an EU868 suburban deployment:
// SF7..SF12 table for 19-byte packets, 125 kHz, NF 6 dB, noise -117 dBm,
// eta 2.75, 6 dB capture threshold, -1..14 dBm grid, 15-minute period.
const SfTable& eu868_suburban_profiles();
ChannelModel eu868_suburban_channel();
TrafficProfile eu868_suburban_traffic();
RadioLimits eu868_suburban_limits();

}  // namespace lora
