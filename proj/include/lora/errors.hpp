#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lora {

// Input/feasibility failures carry a stable machine-readable kind so the CLI
// can map them to exit code 2 and emit structured errors on stderr.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

namespace errkind {
inline constexpr const char* invalid_argument = "invalid-argument";
inline constexpr const char* invalid_config = "invalid-config";
inline constexpr const char* out_of_coverage = "out-of-coverage";
inline constexpr const char* infeasible_power = "infeasible-power";
inline constexpr const char* infeasible_radius = "infeasible-radius";
inline constexpr const char* infeasible_targets = "infeasible-targets";
inline constexpr const char* trial_budget = "trial-budget";
}  // namespace errkind

[[noreturn]] inline void fail(const char* kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace lora
