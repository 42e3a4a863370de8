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

#ifndef TOXCL_SERVICE_SERVICE_HPP_
#define TOXCL_SERVICE_SERVICE_HPP_

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "inference/inference.hpp"
#include "json.hpp"
#include "pipeline/config.hpp"

namespace httplib {
class Server;
}

namespace toxcl::service {

struct Response {
  int status = 200;
  nlohmann::json body;
};

// POST /moderate {"posts": [...]} -> [Prediction...]; GET /health.
// Until models are attached both endpoints answer 503.
class ModerationService {
 public:
  ModerationService(pipeline::ServiceConfig config, inference::PredictOptions options);
  ~ModerationService();
  ModerationService(const ModerationService&) = delete;
  ModerationService& operator=(const ModerationService&) = delete;

  void attach(std::unique_ptr<inference::Pipeline> pipeline);
  // Non-owning; the components must outlive the service.
  void attach(const inference::Components& components, nlohmann::json model_ids);
  bool ready() const { return ready_.load(); }

  Response moderate(const std::string& body) const;
  Response health() const;

  // Binds and serves on a background thread. Port 0 picks a free port;
  // returns the bound port.
  int start();
  void stop();

 private:
  pipeline::ServiceConfig config_;
  inference::PredictOptions options_;
  mutable std::mutex mu_;
  std::unique_ptr<inference::Pipeline> owned_;
  inference::Components components_;
  nlohmann::json model_ids_;
  std::atomic<bool> ready_{false};
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

// Starts the service, loads the newest tg + student bundles in the
// background, and serves until the process receives SIGINT or SIGTERM.
// Throws kNotLoaded if the bundles cannot be loaded.
void serve(const pipeline::PipelineConfig& config,
           const std::function<void(int port)>& on_listening = {});

}  // namespace toxcl::service

#endif  // TOXCL_SERVICE_SERVICE_HPP_
