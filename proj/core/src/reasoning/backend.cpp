#include "auav/reasoning/backend.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"

namespace auav::reasoning {

BackendReply invoke_backend(Backend& backend, const Prompt& prompt, double timeout_s) {
  if (!(timeout_s > 0.0)) throw Error(ErrorCode::invalid_argument, "timeout must be positive");
  const auto start = std::chrono::steady_clock::now();
  BackendReply reply;
  try {
    reply = backend.complete(prompt, timeout_s);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::transport, backend.name() + " backend: " + e.what());
  }
  reply.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (reply.wall_clock_s > timeout_s) {
    throw Error(ErrorCode::timeout, backend.name() + " backend exceeded " +
                                        std::to_string(timeout_s) + " s");
  }
  if (!reply.latency_emulated && !reply.latency_recorded) reply.latency_s = reply.wall_clock_s;
  return reply;
}

// ---- scripted ----------------------------------------------------------------------

ScriptedBackend::ScriptedBackend(Tier tier, std::uint64_t seed)
    : tier_(tier),
      profile_(TierProfile::for_tier(tier)),
      response_rng_(RngStreams(seed).stream(std::string("scripted.response.") + to_string(tier))),
      latency_rng_(RngStreams(seed).stream(std::string("scripted.latency.") + to_string(tier))),
      schedule_(profile_, response_rng_) {}

BackendReply ScriptedBackend::complete(const Prompt& prompt, double /*timeout_s*/) {
  ++calls_;
  BackendReply reply;
  reply.latency_emulated = true;
  double latency = 0.0;
  for (int i = 0; i < 16 && latency <= 0.0; ++i) {
    latency = latency_rng_.normal(profile_.latency_mean_s, profile_.latency_sd_s);
  }
  reply.latency_s = std::max(latency, 0.0);

  if (garbage_ > 0) {
    --garbage_;
    reply.text = "Sorry, I cannot produce that right now.";
    return reply;
  }
  const perception::WorldModel world = perception::world_model_from_wire(prompt.world);
  switch (prompt.task) {
    case PromptTask::assess:
      reply.text = to_json(scripted_respond(world, tier_, response_rng_, schedule_)).dump();
      break;
    case PromptTask::plan: {
      char id[32];
      std::snprintf(id, sizeof id, "P-%03llu", static_cast<unsigned long long>(++plans_));
      reply.text = to_json(scripted_plan(prompt.goal, world, id)).dump();
      break;
    }
    case PromptTask::reflect: {
      const json& fb = prompt.feedback;
      if (!fb.is_object() || !fb.contains("plan") || !fb.contains("failed_step")) {
        throw Error(ErrorCode::invalid_argument, "reflect prompt lacks plan feedback");
      }
      char id[32];
      std::snprintf(id, sizeof id, "P-%03llu", static_cast<unsigned long long>(++plans_));
      const PolicyGraph old = policy_graph_from_json(fb.at("plan"));
      reply.text = to_json(scripted_reflect(old, fb.at("failed_step").get<int>(),
                                            fb.value("reason", std::string()), id))
                       .dump();
      break;
    }
  }
  return reply;
}

// ---- transports --------------------------------------------------------------------

HttpResponse DenyingTransport::post(const HttpRequest& request) {
  ++attempts_;
  throw Error(ErrorCode::transport, "network access denied: " + request.url);
}

// ---- remote ------------------------------------------------------------------------

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v == nullptr ? std::string() : std::string(v);
}

}  // namespace

RemoteConfig RemoteConfig::from_env() {
  return {env_or_empty("AGENT_API_BASE"), env_or_empty("AGENT_API_KEY"),
          env_or_empty("AGENT_MODEL")};
}

void RemoteConfig::validate() const {
  if (base_url.empty()) {
    throw Error(ErrorCode::invalid_argument, "remote backend needs AGENT_API_BASE");
  }
  if (model.empty()) throw Error(ErrorCode::invalid_argument, "remote backend needs AGENT_MODEL");
}

RemoteBackend::RemoteBackend(RemoteConfig config, std::shared_ptr<Transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  config_.validate();
  if (!transport_) throw Error(ErrorCode::invalid_argument, "remote backend needs a transport");
}

BackendReply RemoteBackend::complete(const Prompt& prompt, double timeout_s) {
  const json body = {
      {"model", config_.model},
      {"temperature", 0},
      {"messages",
       json::array({{{"role", "system"}, {"content", prompt.system_text()}},
                    {{"role", "user"}, {"content", prompt.render()}}})},
  };
  HttpRequest req;
  std::string base = config_.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  req.url = base + "/chat/completions";
  req.headers["Content-Type"] = "application/json";
  if (!config_.api_key.empty()) req.headers["Authorization"] = "Bearer " + config_.api_key;
  req.body = body.dump();
  req.timeout_s = timeout_s;

  json exchange = {{"url", req.url}, {"request", body}};
  if (!config_.api_key.empty()) exchange["authorization"] = "Bearer [REDACTED]";
  const auto start = std::chrono::steady_clock::now();
  HttpResponse res;
  try {
    res = transport_->post(req);
  } catch (const Error& e) {
    exchange["error"] = e.what();
    std::lock_guard lock(mutex_);
    exchanges_.push_back(std::move(exchange));
    throw;
  }
  BackendReply reply;
  reply.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  exchange["status"] = res.status;
  exchange["response"] = res.body;
  {
    std::lock_guard lock(mutex_);
    exchanges_.push_back(exchange);
  }
  if (res.status != 200) {
    throw Error(ErrorCode::transport, "remote backend HTTP status " + std::to_string(res.status));
  }
  try {
    const json j = json::parse(res.body);
    reply.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::transport, std::string("remote backend: malformed reply: ") + e.what());
  }
  return reply;
}

std::vector<json> RemoteBackend::exchanges() const {
  std::lock_guard lock(mutex_);
  return exchanges_;
}

// ---- replay ------------------------------------------------------------------------

ReplayBackend::ReplayBackend(std::vector<RecordedReply> replies) : replies_(std::move(replies)) {}

BackendReply ReplayBackend::complete(const Prompt& prompt, double /*timeout_s*/) {
  if (next_ >= replies_.size()) {
    throw Error(ErrorCode::not_found, "replay log exhausted after " + std::to_string(next_) +
                                          " replies");
  }
  const RecordedReply& r = replies_[next_];
  if (!r.task.empty() && r.task != to_string(prompt.task)) {
    throw Error(ErrorCode::validation_error, "replay divergence at reply " + std::to_string(next_) +
                                                 ": recorded task '" + r.task + "', requested '" +
                                                 to_string(prompt.task) + "'");
  }
  ++next_;
  if (r.error_code) throw Error(*r.error_code, r.error);
  BackendReply reply;
  reply.text = r.text;
  reply.latency_s = r.latency_s;
  reply.latency_emulated = r.latency_emulated;
  reply.latency_recorded = true;
  return reply;
}

}  // namespace auav::reasoning
