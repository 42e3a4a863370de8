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

#include "toxcl/toxcl.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "metrics/metrics.hpp"
#include "pipeline/commands.hpp"
#include "pipeline/config.hpp"
#include "service/service.hpp"

struct toxcl_config {
  toxcl::pipeline::PipelineConfig value;
};

struct toxcl_pipeline {
  std::unique_ptr<toxcl::inference::Pipeline> pipeline;
  toxcl::inference::PredictOptions options;
};

static_assert(static_cast<int>(toxcl::ErrorCode::kInternal) + 1 == TOXCL_E_INTERNAL,
              "status codes out of sync with ErrorCode");

namespace {

thread_local std::string t_last_error;
thread_local long long t_last_row = -1;

toxcl_status status_of(toxcl::ErrorCode code) {
  return static_cast<toxcl_status>(static_cast<int>(code) + 1);
}

template <typename F>
toxcl_status guarded(F&& f) {
  t_last_error.clear();
  t_last_row = -1;
  try {
    f();
    return TOXCL_OK;
  } catch (const toxcl::Error& e) {
    t_last_error = e.what();
    if (e.row()) t_last_row = static_cast<long long>(*e.row());
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return TOXCL_E_RESOURCE;
  } catch (const std::filesystem::filesystem_error& e) {
    t_last_error = e.what();
    return TOXCL_E_IO;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return TOXCL_E_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void emit(char** out, const nlohmann::json& j) {
  if (out) *out = dup(j.dump());
}

void need(const void* p, const char* what) {
  toxcl::require(p != nullptr, toxcl::ErrorCode::kInvalidArgument,
                 std::string(what) + " must not be NULL");
}

nlohmann::json train_json(const toxcl::pipeline::TrainSummary& s) {
  return {{"bundle_dir", s.bundle_dir.string()},
          {"bundle_id", s.bundle_id},
          {"steps", s.steps},
          {"first_loss", s.first_loss},
          {"last_loss", s.last_loss},
          {"removed_overlap", s.removed_overlap}};
}

nlohmann::json eval_json(const toxcl::pipeline::EvalSummary& s) {
  auto j = toxcl::metrics::to_json(s.report);
  j["report_dir"] = s.report_dir.string();
  return j;
}

}  // namespace

extern "C" {

const char* toxcl_version(void) { return "0.1.0"; }

const char* toxcl_status_name(toxcl_status status) {
  if (status == TOXCL_OK) return "ok";
  const int i = static_cast<int>(status) - 1;
  if (i < 0 || i > static_cast<int>(toxcl::ErrorCode::kInternal)) return "unknown";
  static thread_local std::string name;
  name = std::string(toxcl::to_string(static_cast<toxcl::ErrorCode>(i)));
  return name.c_str();
}

const char* toxcl_last_error(void) { return t_last_error.c_str(); }
long long toxcl_last_error_row(void) { return t_last_row; }
void toxcl_string_free(char* s) { std::free(s); }

toxcl_status toxcl_config_new(toxcl_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new toxcl_config{};
  });
}

toxcl_status toxcl_config_load(const char* path, toxcl_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto cfg = std::make_unique<toxcl_config>();
    cfg->value = toxcl::pipeline::load_config(path);
    *out = cfg.release();
  });
}

toxcl_status toxcl_config_set(toxcl_config* config, const char* assignment) {
  return guarded([&] {
    need(config, "config");
    need(assignment, "assignment");
    auto copy = config->value;
    toxcl::pipeline::apply_override(copy, assignment);
    config->value = std::move(copy);
  });
}

toxcl_status toxcl_config_to_json(const toxcl_config* config, char** out_json) {
  return guarded([&] {
    need(config, "config");
    need(out_json, "out_json");
    *out_json = dup(toxcl::pipeline::to_json(config->value).dump(2));
  });
}

toxcl_status toxcl_config_save(const toxcl_config* config, const char* path) {
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    toxcl::pipeline::save_config(config->value, path);
  });
}

void toxcl_config_free(toxcl_config* config) { delete config; }

toxcl_status toxcl_preprocess(const toxcl_config* config, char** out_json) {
  return guarded([&] {
    need(config, "config");
    emit(out_json, toxcl::pipeline::cmd_preprocess(config->value).stats);
  });
}

toxcl_status toxcl_train_tg(const toxcl_config* config, char** out_json) {
  return guarded([&] {
    need(config, "config");
    emit(out_json, train_json(toxcl::pipeline::cmd_train_tg(config->value)));
  });
}

toxcl_status toxcl_train_teacher(const toxcl_config* config, char** out_json) {
  return guarded([&] {
    need(config, "config");
    emit(out_json, train_json(toxcl::pipeline::cmd_train_teacher(config->value)));
  });
}

toxcl_status toxcl_train(const toxcl_config* config, char** out_json) {
  return guarded([&] {
    need(config, "config");
    emit(out_json, train_json(toxcl::pipeline::cmd_train(config->value)));
  });
}

toxcl_status toxcl_evaluate(const toxcl_config* config, const char* split, char** out_json) {
  return guarded([&] {
    need(config, "config");
    const std::string s = split ? split : config->value.eval.split;
    emit(out_json, eval_json(toxcl::pipeline::cmd_evaluate(config->value, s)));
  });
}

toxcl_status toxcl_evaluate_predictions(const toxcl_config* config, const char* predictions_path,
                                        const char* out_dir, char** out_json) {
  return guarded([&] {
    need(config, "config");
    need(predictions_path, "predictions_path");
    need(out_dir, "out_dir");
    emit(out_json, eval_json(toxcl::pipeline::cmd_evaluate_predictions(
                       config->value, predictions_path, out_dir)));
  });
}

toxcl_status toxcl_pipeline_open(const toxcl_config* config, toxcl_pipeline** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    auto p = std::make_unique<toxcl_pipeline>();
    p->pipeline = toxcl::pipeline::open_pipeline(config->value);
    p->options.conditional_decoding = config->value.inference.conditional_decoding;
    *out = p.release();
  });
}

void toxcl_pipeline_free(toxcl_pipeline* pipeline) { delete pipeline; }

toxcl_status toxcl_predict(const toxcl_pipeline* pipeline, const char* post, char** out_json) {
  return guarded([&] {
    need(pipeline, "pipeline");
    need(post, "post");
    need(out_json, "out_json");
    const auto p = toxcl::inference::predict(pipeline->pipeline->components(), post,
                                             pipeline->options);
    *out_json = dup(toxcl::inference::to_json(p).dump());
  });
}

toxcl_status toxcl_predict_batch(const toxcl_pipeline* pipeline, const char* const* posts,
                                 size_t count, char** out_json) {
  return guarded([&] {
    need(pipeline, "pipeline");
    need(out_json, "out_json");
    if (count > 0) need(posts, "posts");
    std::vector<std::string> items;
    for (size_t i = 0; i < count; ++i) {
      need(posts[i], "posts[i]");
      items.emplace_back(posts[i]);
    }
    const auto preds = toxcl::inference::predict_batch(pipeline->pipeline->components(), items,
                                                       pipeline->options);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : preds) arr.push_back(toxcl::inference::to_json(p));
    *out_json = dup(arr.dump());
  });
}

toxcl_status toxcl_serve(const toxcl_config* config, void (*on_listening)(int, void*),
                         void* user) {
  return guarded([&] {
    need(config, "config");
    toxcl::service::serve(config->value, [&](int port) {
      if (on_listening) on_listening(port, user);
    });
  });
}

toxcl_status toxcl_krippendorff_alpha(const double* ratings, size_t raters, size_t items,
                                      const char* metric, double* out_alpha) {
  return guarded([&] {
    need(ratings, "ratings");
    need(metric, "metric");
    need(out_alpha, "out_alpha");
    std::vector<std::vector<std::optional<double>>> m(raters);
    for (size_t r = 0; r < raters; ++r) {
      for (size_t i = 0; i < items; ++i) {
        const double v = ratings[r * items + i];
        m[r].push_back(std::isnan(v) ? std::nullopt : std::optional<double>(v));
      }
    }
    *out_alpha =
        toxcl::metrics::krippendorff_alpha(m, toxcl::metrics::distance_metric_from_string(metric));
  });
}

}  // extern "C"
