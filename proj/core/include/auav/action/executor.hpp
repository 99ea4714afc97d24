#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/integration/gateway.hpp"
#include "auav/perception/world_model.hpp"
#include "auav/reasoning/policy.hpp"
#include "auav/reasoning/precondition.hpp"
#include "auav/sim/world.hpp"

namespace auav::action {

enum class StepStatus { success, failed, skipped };

const char* to_string(StepStatus s);

struct StepOutcome {
  int step_id = 0;
  StepStatus status = StepStatus::success;
  nlohmann::json outputs = nlohmann::json::object();
  double started = 0.0;   // simulation seconds
  double finished = 0.0;
  std::optional<std::string> failure_reason;
};

nlohmann::json to_json(const StepOutcome& o);

using OutcomeMap = std::map<int, StepOutcome>;

struct SafetyEnvelope {
  Box geofence;
  double min_altitude = 5.0;   // applies to cruise, not to commanded descents
  double max_altitude = 120.0;
  double max_speed = 15.0;
  double min_battery = 0.10;

  // Throws Error(invalid_argument) unless every min < max and the geofence is well formed.
  void validate() const;
  // Geofence and speed from the scenario; altitude band clipped to the geofence.
  static SafetyEnvelope from_scenario(const sim::ScenarioSpec& spec);
};

struct SafetyViolation {
  std::string type;  // geofence, altitude, speed, battery
  double measured = 0.0;
  double limit = 0.0;
  std::string agent;

  friend bool operator==(const SafetyViolation&, const SafetyViolation&) = default;
};

nlohmann::json to_json(const SafetyViolation& v);

// Checks every airborne agent. The altitude floor is not enforced for an agent that
// is descending or landed.
std::vector<SafetyViolation> monitor_safety(const sim::SimState& world, const SafetyEnvelope& envelope);

// Evaluates a step's preconditions against completed (successful) step outputs.
// A reference to a step without a successful outcome throws Error(evaluation_error).
reasoning::EvalResult check_preconditions(const reasoning::PlanStep& step, const OutcomeMap& outcomes);

struct Segment {
  Vec3 from;
  Vec3 to;
  double speed = 0.0;
  double duration = 0.0;
};

// Straight line at min(speed, envelope.max_speed). from == to yields no segments.
// Throws Error(infeasible) when an endpoint leaves the geofence or the altitude band.
std::vector<Segment> plan_trajectory(const Pose3& from, const Pose3& to, const SafetyEnvelope& envelope,
                                     double speed = 0.0);

struct ExecContext {
  sim::SimState* world = nullptr;
  std::size_t agent = 0;
  integration::ToolGateway* gateway = nullptr;
  const perception::WorldModel* world_model = nullptr;
  SafetyEnvelope envelope;
  double dt = 0.1;
  std::uint64_t max_ticks = 6000;  // per physical step
  double cruise_speed = 10.0;
  // Called after every simulated tick of a physical step (perception, logging).
  std::function<void(const sim::SimState&)> on_tick;
  // Called before a step with side effects starts, after its preconditions passed.
  std::function<void(const reasoning::PlanStep&)> on_gate_passed;
};

// Runs one step to completion. Every attempt yields exactly one outcome; errors
// (tool failure, safety rejection, infeasible trajectory, false precondition) become
// status failed with a reason.
StepOutcome execute_step(const reasoning::PlanStep& step, ExecContext& ctx, const OutcomeMap& outcomes);

// Resolves a step's target: args.position ([x,y,z]) or args.target_id looked up in the
// world model first and then among simulator landmarks. Throws Error(not_found).
Vec3 resolve_target(const nlohmann::json& args, const perception::WorldModel* world_model,
                    const sim::SimState& world);

}  // namespace auav::action
