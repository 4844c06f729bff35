#include "lora/units.hpp"

#include <cmath>
#include <string>

#include "lora/errors.hpp"

namespace lora {

namespace {
void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        fail(errkind::invalid_argument, std::string(name) + " must be finite");
    }
}
}  // namespace

double dbm_to_watt(double power_dbm) {
    require_finite(power_dbm, "power_dbm");
    return std::pow(10.0, (power_dbm - 30.0) / 10.0);
}

double watt_to_dbm(double power_w) {
    require_finite(power_w, "power_w");
    if (power_w <= 0.0) {
        fail(errkind::invalid_argument, "power_w must be positive");
    }
    return 10.0 * std::log10(power_w) + 30.0;
}

double db_to_linear(double value_db) {
    require_finite(value_db, "value_db");
    return std::pow(10.0, value_db / 10.0);
}

double linear_to_db(double ratio) {
    require_finite(ratio, "ratio");
    if (ratio <= 0.0) {
        fail(errkind::invalid_argument, "ratio must be positive");
    }
    return 10.0 * std::log10(ratio);
}

double noise_power_dbm(double noise_figure_db, double bandwidth_hz) {
    require_finite(noise_figure_db, "noise_figure_db");
    require_finite(bandwidth_hz, "bandwidth_hz");
    if (bandwidth_hz <= 0.0) {
        fail(errkind::invalid_argument, "bandwidth_hz must be positive");
    }
    return -174.0 + noise_figure_db + 10.0 * std::log10(bandwidth_hz);
}

double duty_cycle(double time_on_air_s, double message_period_s) {
    require_finite(time_on_air_s, "time_on_air_s");
    require_finite(message_period_s, "message_period_s");
    if (time_on_air_s <= 0.0 || message_period_s <= 0.0) {
        fail(errkind::invalid_argument, "time on air and period must be positive");
    }
    if (time_on_air_s > message_period_s) {
        fail(errkind::invalid_argument, "time on air exceeds the message period");
    }
    return time_on_air_s / message_period_s;
}

}  // namespace lora
