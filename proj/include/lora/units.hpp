#pragma once

namespace lora {

inline constexpr double speed_of_light_m_s = 299792458.0;

// dB/dBm conversions. All internal arithmetic elsewhere in the library is in
// linear units (watts, ratios); these are the interface boundary.
double dbm_to_watt(double power_dbm);
double watt_to_dbm(double power_w);
double db_to_linear(double value_db);
double linear_to_db(double ratio);

// Thermal noise floor: -174 dBm/Hz + NF + 10 log10(B).
double noise_power_dbm(double noise_figure_db, double bandwidth_hz);

// ALOHA transmission probability: time on air over message period, in (0,1].
double duty_cycle(double time_on_air_s, double message_period_s);

}  // namespace lora
