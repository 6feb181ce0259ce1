#pragma once

#include <string_view>

namespace aebsim {

/// Escalating AEB stages. Order matters: later enumerators are stronger.
enum class BrakeStage { None = 0, FCW = 1, Partial1 = 2, Partial2 = 3, Full = 4 };

/// Output of the AEB controller; `decel` is zero for None and FCW.
struct BrakeCommand {
  BrakeStage stage = BrakeStage::None;
  double decel = 0.0;  // m/s^2, >= 0

  bool operator==(const BrakeCommand&) const = default;
  bool braking() const { return stage >= BrakeStage::Partial1; }
};

std::string_view to_string(BrakeStage stage);
BrakeStage brake_stage_from_string(std::string_view name);

}  // namespace aebsim
