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

#ifndef TOXCL_TOXCL_H_
#define TOXCL_TOXCL_H_

#include <stddef.h>

#if defined(_WIN32)
#define TOXCL_API __declspec(dllexport)
#else
#define TOXCL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum toxcl_status {
  TOXCL_OK = 0,
  TOXCL_E_INVALID_ARGUMENT = 1,
  TOXCL_E_FILE_MISSING = 2,
  TOXCL_E_IO = 3,
  TOXCL_E_UNKNOWN_FORMAT = 4,
  TOXCL_E_PARSE = 5,
  TOXCL_E_MALFORMED_ROW = 6,
  TOXCL_E_PRECONDITION = 7,
  TOXCL_E_LENGTH_MISMATCH = 8,
  TOXCL_E_EMPTY_INPUT = 9,
  TOXCL_E_INVALID_DISTRIBUTION = 10,
  TOXCL_E_EMPTY_CLASS = 11,
  TOXCL_E_INSUFFICIENT_DATA = 12,
  TOXCL_E_MISSING_PREREQUISITE = 13,
  TOXCL_E_CHECKPOINT_NOT_FOUND = 14,
  TOXCL_E_NOT_LOADED = 15,
  TOXCL_E_DECODE_FAILURE = 16,
  TOXCL_E_TEACHER_MUTATED = 17,
  TOXCL_E_RESOURCE = 18,
  TOXCL_E_LOCKED = 19,
  TOXCL_E_INTERNAL = 20
} toxcl_status;

typedef struct toxcl_config toxcl_config;
typedef struct toxcl_pipeline toxcl_pipeline;

TOXCL_API const char* toxcl_version(void);
TOXCL_API const char* toxcl_status_name(toxcl_status status);

/* Message of the last failed call on this thread ("" if none). */
TOXCL_API const char* toxcl_last_error(void);
/* 1-based row (ingest) or 0-based item index (batch prediction) of the last
   failure on this thread, or -1. */
TOXCL_API long long toxcl_last_error_row(void);

/* Frees any string returned through a char** out parameter. */
TOXCL_API void toxcl_string_free(char* s);

TOXCL_API toxcl_status toxcl_config_new(toxcl_config** out);
TOXCL_API toxcl_status toxcl_config_load(const char* path, toxcl_config** out);
/* "dotted.key=value"; value is JSON or a bare string. */
TOXCL_API toxcl_status toxcl_config_set(toxcl_config* config, const char* assignment);
TOXCL_API toxcl_status toxcl_config_to_json(const toxcl_config* config, char** out_json);
TOXCL_API toxcl_status toxcl_config_save(const toxcl_config* config, const char* path);
TOXCL_API void toxcl_config_free(toxcl_config* config);

/* Workflow commands. Each writes under paths.output_dir and, when
   out_json is not NULL, returns a JSON summary. */
TOXCL_API toxcl_status toxcl_preprocess(const toxcl_config* config, char** out_json);
TOXCL_API toxcl_status toxcl_train_tg(const toxcl_config* config, char** out_json);
TOXCL_API toxcl_status toxcl_train_teacher(const toxcl_config* config, char** out_json);
TOXCL_API toxcl_status toxcl_train(const toxcl_config* config, char** out_json);
TOXCL_API toxcl_status toxcl_evaluate(const toxcl_config* config, const char* split,
                                      char** out_json);
TOXCL_API toxcl_status toxcl_evaluate_predictions(const toxcl_config* config,
                                                  const char* predictions_path,
                                                  const char* out_dir, char** out_json);

/* Loads the newest target-generator and student bundles. */
TOXCL_API toxcl_status toxcl_pipeline_open(const toxcl_config* config, toxcl_pipeline** out);
TOXCL_API void toxcl_pipeline_free(toxcl_pipeline* pipeline);
/* Prediction JSON: {"label", "probs", "target_groups", "explanation"}. */
TOXCL_API toxcl_status toxcl_predict(const toxcl_pipeline* pipeline, const char* post,
                                     char** out_json);
/* JSON array of predictions in input order. */
TOXCL_API toxcl_status toxcl_predict_batch(const toxcl_pipeline* pipeline,
                                           const char* const* posts, size_t count,
                                           char** out_json);

/* Runs the moderation service until SIGINT/SIGTERM. on_listening, if not
   NULL, receives the bound port before models finish loading. */
TOXCL_API toxcl_status toxcl_serve(const toxcl_config* config,
                                   void (*on_listening)(int port, void* user), void* user);

/* ratings: raters x items, row-major; NaN marks a missing rating.
   metric: "nominal", "ordinal" or "interval". */
TOXCL_API toxcl_status toxcl_krippendorff_alpha(const double* ratings, size_t raters,
                                                size_t items, const char* metric,
                                                double* out_alpha);

#ifdef __cplusplus
}
#endif

#endif  /* TOXCL_TOXCL_H_ */
