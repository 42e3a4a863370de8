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

/* Exercises the C API from plain C: configuration, error reporting, a tiny
   end-to-end run and prediction. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "toxcl/toxcl.h"

static int failures = 0;

#define EXPECT(cond)                                             \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

static void write_toy_corpus(const char* path) {
  static const char* groups[] = {"women", "jews", "muslims", "immigrants"};
  FILE* f = fopen(path, "w");
  for (int i = 0; i < 4; ++i) {
    fprintf(f,
            "{\"id\": \"t%d\", \"post\": \"%s are ruining everything\", \"label\": 1, "
            "\"explanation\": \"%s are harmful\", \"annotated_groups\": [\"%s\"]}\n",
            i, groups[i], groups[i], groups[i]);
    fprintf(f,
            "{\"id\": \"n%d\", \"post\": \"%s organized a picnic\", \"label\": 0, "
            "\"explanation\": \"[None]\", \"annotated_groups\": [\"%s\"]}\n",
            i, groups[i], groups[i]);
  }
  fclose(f);
}

static void set(toxcl_config* c, const char* assignment) {
  toxcl_status s = toxcl_config_set(c, assignment);
  if (s != TOXCL_OK) fprintf(stderr, "set %s: %s\n", assignment, toxcl_last_error());
  EXPECT(s == TOXCL_OK);
}

int main(int argc, char** argv) {
  if (argc != 2) {
    fprintf(stderr, "usage: %s WORKDIR\n", argv[0]);
    return 2;
  }
  char buf[4096];

  EXPECT(strlen(toxcl_version()) > 0);
  EXPECT(strcmp(toxcl_status_name(TOXCL_E_MISSING_PREREQUISITE), "missing-prerequisite") == 0);

  toxcl_config* cfg = NULL;
  EXPECT(toxcl_config_new(&cfg) == TOXCL_OK);
  EXPECT(toxcl_config_set(cfg, "student.weights.nope=1") == TOXCL_E_INVALID_ARGUMENT);
  EXPECT(strlen(toxcl_last_error()) > 0);

  snprintf(buf, sizeof buf, "%s/toy.jsonl", argv[1]);
  write_toy_corpus(buf);
  char assignment[4200];
  snprintf(assignment, sizeof assignment, "paths.corpus_splits.train=%s", buf);
  set(cfg, assignment);
  snprintf(assignment, sizeof assignment, "paths.corpus_splits.test=%s", buf);
  set(cfg, assignment);
  snprintf(assignment, sizeof assignment, "paths.output_dir=%s/out", argv[1]);
  set(cfg, assignment);
  set(cfg, "tg.backbone_id=toxcl-tiny");
  set(cfg, "tg.iterations=20");
  set(cfg, "tg.max_sequence_length=32");
  set(cfg, "tg.max_decode_length=4");
  set(cfg, "teacher.backbone_id=toxcl-tiny");
  set(cfg, "teacher.schedule_unit=iterations");
  set(cfg, "teacher.iterations_or_epochs=5");
  set(cfg, "teacher.max_sequence_length=32");
  set(cfg, "student.backbone_id=toxcl-tiny");
  set(cfg, "student.schedule_unit=iterations");
  set(cfg, "student.iterations_or_epochs=5");
  set(cfg, "student.max_sequence_length=32");
  set(cfg, "student.max_decode_length=4");

  char* json = NULL;
  EXPECT(toxcl_config_to_json(cfg, &json) == TOXCL_OK);
  EXPECT(json && strstr(json, "toxcl-tiny") != NULL);
  toxcl_string_free(json);

  toxcl_pipeline* pipe = NULL;
  EXPECT(toxcl_pipeline_open(cfg, &pipe) == TOXCL_E_MISSING_PREREQUISITE);
  EXPECT(toxcl_train(cfg, NULL) == TOXCL_E_MISSING_PREREQUISITE);

  EXPECT(toxcl_preprocess(cfg, &json) == TOXCL_OK);
  EXPECT(json && strstr(json, "\"dropped\"") != NULL);
  toxcl_string_free(json);
  EXPECT(toxcl_train_tg(cfg, NULL) == TOXCL_OK);
  EXPECT(toxcl_train_teacher(cfg, NULL) == TOXCL_OK);
  EXPECT(toxcl_train(cfg, NULL) == TOXCL_OK);
  EXPECT(toxcl_evaluate(cfg, "test", &json) == TOXCL_OK);
  EXPECT(json && strstr(json, "macro_f1") != NULL);
  toxcl_string_free(json);

  EXPECT(toxcl_pipeline_open(cfg, &pipe) == TOXCL_OK);
  EXPECT(toxcl_predict(pipe, "women are ruining everything", &json) == TOXCL_OK);
  EXPECT(json && strstr(json, "\"explanation\"") != NULL);
  toxcl_string_free(json);
  EXPECT(toxcl_predict(pipe, "   ", &json) == TOXCL_E_EMPTY_INPUT);
  const char* posts[] = {"hello", "", "world"};
  EXPECT(toxcl_predict_batch(pipe, posts, 3, &json) == TOXCL_E_EMPTY_INPUT);
  EXPECT(toxcl_last_error_row() == 1);
  EXPECT(toxcl_predict_batch(pipe, posts, 1, &json) == TOXCL_OK);
  EXPECT(json && json[0] == '[');
  toxcl_string_free(json);
  toxcl_pipeline_free(pipe);
  toxcl_config_free(cfg);

  const double ratings[] = {1, 1, 0, 0, 1, 0, 0, 1};
  double alpha = 0.0;
  EXPECT(toxcl_krippendorff_alpha(ratings, 2, 4, "nominal", &alpha) == TOXCL_OK);
  EXPECT(fabs(alpha - 0.125) < 1e-9);
  const double sparse[] = {1, NAN, NAN, 2};
  EXPECT(toxcl_krippendorff_alpha(sparse, 2, 2, "nominal", &alpha) == TOXCL_E_INSUFFICIENT_DATA);
  EXPECT(toxcl_krippendorff_alpha(ratings, 2, 4, "ratio", &alpha) == TOXCL_E_INVALID_ARGUMENT);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
