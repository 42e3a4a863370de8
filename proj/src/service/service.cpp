// Copyright 2026 The ToXCL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "service/service.hpp"

#include <chrono>
#include <csignal>

#include "common/error.hpp"
#include "common/text.hpp"
#include "httplib.h"
#include "pipeline/commands.hpp"

namespace toxcl::service {
namespace {

Response error(int status, std::string_view code, const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput:
    case ErrorCode::kInvalidArgument:
      return 400;
    case ErrorCode::kNotLoaded:
      return 503;
    default:
      return 500;
  }
}

}  // namespace

ModerationService::ModerationService(pipeline::ServiceConfig config,
                                     inference::PredictOptions options)
    : config_(std::move(config)), options_(options) {
  require(config_.max_batch >= 1, ErrorCode::kInvalidArgument, "max_batch must be >= 1");
}

ModerationService::~ModerationService() { stop(); }

void ModerationService::attach(std::unique_ptr<inference::Pipeline> pipeline) {
  std::lock_guard lock(mu_);
  owned_ = std::move(pipeline);
  components_ = owned_->components();
  model_ids_ = {{"tg", owned_->tg_bundle().id()}, {"student", owned_->student_bundle().id()}};
  ready_ = true;
}

void ModerationService::attach(const inference::Components& components,
                               nlohmann::json model_ids) {
  std::lock_guard lock(mu_);
  components_ = components;
  model_ids_ = std::move(model_ids);
  ready_ = true;
}

Response ModerationService::health() const {
  if (!ready_) return {503, {{"status", "loading"}, {"models", nlohmann::json::object()}}};
  std::lock_guard lock(mu_);
  return {200, {{"status", "ok"}, {"models", model_ids_}}};
}

Response ModerationService::moderate(const std::string& body) const {
  if (!ready_) return error(503, "not_loaded", "models are still loading");
  nlohmann::json req;
  try {
    req = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return error(400, "invalid_json", e.what());
  }
  if (!req.is_object() || !req.contains("posts") || !req.at("posts").is_array()) {
    return error(400, "invalid_request", "body must be {\"posts\": [string, ...]}");
  }
  const auto& arr = req.at("posts");
  if (arr.size() > static_cast<std::size_t>(config_.max_batch)) {
    return error(413, "batch_too_large",
                 "at most " + std::to_string(config_.max_batch) + " posts per request");
  }
  if (arr.empty()) return error(400, "empty_posts", "posts is empty");
  std::vector<std::string> posts;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string() || text::trim(arr[i].get<std::string>()).empty()) {
      return error(400, "empty_post", "post " + std::to_string(i) + " is empty or not a string");
    }
    posts.push_back(arr[i].get<std::string>());
  }
  inference::Components components;
  {
    std::lock_guard lock(mu_);
    components = components_;
  }
  try {
    auto preds = inference::predict_batch(components, posts, options_);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : preds) out.push_back(inference::to_json(p));
    return {200, out};
  } catch (const Error& e) {
    return error(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

int ModerationService::start() {
  require(!server_, ErrorCode::kPrecondition, "service already started");
  server_ = std::make_unique<httplib::Server>();
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  server_->Post("/moderate", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, moderate(req.body));
  });
  server_->Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, health());
  });
  int port = config_.port;
  if (port == 0) {
    port = server_->bind_to_any_port(config_.host);
  } else if (!server_->bind_to_port(config_.host, port)) {
    port = -1;
  }
  if (port < 0) {
    server_.reset();
    fail(ErrorCode::kIo, "cannot bind " + config_.host + ":" + std::to_string(config_.port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void ModerationService::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
  server_.reset();
}

namespace {
volatile std::sig_atomic_t g_stop_requested = 0;

extern "C" void on_signal(int) { g_stop_requested = 1; }
}  // namespace

void serve(const pipeline::PipelineConfig& config, const std::function<void(int)>& on_listening) {
  config.validate();
  inference::PredictOptions options;
  options.conditional_decoding = config.inference.conditional_decoding;
  ModerationService service(config.service, options);
  g_stop_requested = 0;
  auto prev_int = std::signal(SIGINT, on_signal);
  auto prev_term = std::signal(SIGTERM, on_signal);
  const int port = service.start();
  if (on_listening) on_listening(port);
  std::string load_error;
  try {
    service.attach(pipeline::open_pipeline(config));
  } catch (const std::exception& e) {
    load_error = e.what();
  }
  while (load_error.empty() && !g_stop_requested) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  service.stop();
  std::signal(SIGINT, prev_int);
  std::signal(SIGTERM, prev_term);
  if (!load_error.empty()) fail(ErrorCode::kNotLoaded, "model load failed: " + load_error);
}

}  // namespace toxcl::service
