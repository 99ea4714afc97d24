#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/integration/tool.hpp"
#include "auav/learning/snippet.hpp"
#include "auav/perception/world_model.hpp"

namespace auav::reasoning {

enum class PromptTask { assess, plan, reflect };

const char* to_string(PromptTask t);

// Structured prompt. Backends that talk to a language model use render(); the
// scripted backend reads the structured fields directly.
struct Prompt {
  PromptTask task = PromptTask::assess;
  std::string goal;
  nlohmann::json world = nlohmann::json::object();
  nlohmann::json tools = nlohmann::json::array();
  std::vector<learning::ContextSnippet> context;
  nlohmann::json feedback;  // reflect: failed plan, step and reason

  std::string render() const;
  std::string system_text() const;
};

Prompt build_prompt(const perception::WorldModel& world, const std::string& goal,
                    const std::vector<learning::ContextSnippet>& context,
                    const std::vector<integration::ToolDescriptor>& tools = {});

}  // namespace auav::reasoning
