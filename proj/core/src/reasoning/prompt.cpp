#include "auav/reasoning/prompt.hpp"

#include <sstream>

namespace auav::reasoning {

const char* to_string(PromptTask t) {
  switch (t) {
    case PromptTask::assess: return "assess";
    case PromptTask::plan: return "plan";
    case PromptTask::reflect: return "reflect";
  }
  return "?";
}

std::string Prompt::system_text() const {
  return "You are the reasoning core of an autonomous UAV. Reply with a single JSON object "
         "and nothing else.";
}

namespace {

const char* output_instruction(PromptTask t) {
  switch (t) {
    case PromptTask::assess:
      return "Return JSON with keys: detections (list of {id, confidence}, where confidence is "
             "your self-reported certainty scaled from 0 to 1), severity (\"normal\" or "
             "\"critical\"), surrounding_features (text describing the scene), "
             "recommended_actions (list of text; required when severity is critical), "
             "rationale (text).";
    case PromptTask::plan:
      return "Return a policy graph as JSON with keys plan_id, goal, steps, dependencies. "
             "Each step has step_id (integer), action (call_tool, fly_to, land_and_deploy, "
             "loiter, report), tool_name (call_tool only), args, preconditions (expressions "
             "like \"step_1.wind_speed < 15\" joined by \"and\"), on_fail "
             "(trigger_reflection, abort, skip). dependencies maps a step_id string to the "
             "list of step_ids it waits for.";
    case PromptTask::reflect:
      return "The plan below failed. Return a revised policy graph in the same JSON format. "
             "Keep completed steps, and change the failed step or the steps after it.";
  }
  return "";
}

}  // namespace

std::string Prompt::render() const {
  std::ostringstream out;
  out << "## Task\n" << to_string(task) << "\n\n";
  out << "## Mission goal\n" << goal << "\n\n";
  out << "## World model\n" << world.dump(2) << "\n\n";
  if (!tools.empty()) out << "## Tools\n" << tools.dump(2) << "\n\n";
  if (!context.empty()) {
    out << "## Retrieved context\n";
    for (const auto& s : context) out << "[mission " << s.mission_id << "] " << s.text << "\n";
    out << "\n";
  }
  if (!feedback.is_null()) out << "## Failure feedback\n" << feedback.dump(2) << "\n\n";
  out << "## Output format\n" << output_instruction(task) << "\n";
  return out.str();
}

Prompt build_prompt(const perception::WorldModel& world, const std::string& goal,
                    const std::vector<learning::ContextSnippet>& context,
                    const std::vector<integration::ToolDescriptor>& tools) {
  Prompt p;
  p.task = PromptTask::assess;
  p.goal = goal;
  p.world = perception::to_wire(world);
  p.tools = integration::catalog_json(tools);
  p.context = context;
  return p;
}

}  // namespace auav::reasoning
