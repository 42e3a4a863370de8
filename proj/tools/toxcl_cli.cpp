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

// Command-line front end. Everything goes through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toxcl/toxcl.h"

namespace {

struct Failure {
  toxcl_status status;
};

void check(toxcl_status s) {
  if (s != TOXCL_OK) throw Failure{s};
}

// Prints and frees a string returned by the library.
void print_owned(char* s) {
  if (!s) return;
  std::cout << s << '\n';
  toxcl_string_free(s);
}

class Config {
 public:
  Config(const std::string& path, const std::vector<std::string>& overrides) {
    check(path.empty() ? toxcl_config_new(&cfg_) : toxcl_config_load(path.c_str(), &cfg_));
    for (const auto& o : overrides) check(toxcl_config_set(cfg_, o.c_str()));
  }
  ~Config() { toxcl_config_free(cfg_); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;
  toxcl_config* get() const { return cfg_; }

 private:
  toxcl_config* cfg_ = nullptr;
};

// "alpha=1,gamma=0" -> student.weights.alpha=1, student.weights.gamma=0
std::vector<std::string> weight_overrides(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const auto item = text.substr(start, comma - start);
    if (!item.empty()) out.push_back("student.weights." + item);
    start = comma + 1;
  }
  return out;
}

void on_listening(int port, void*) {
  std::cerr << "listening on port " << port << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit toxic speech detection and explanation pipeline"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  std::vector<std::string> weights;
  app.add_option("--config", config_path, "Pipeline config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override a config value: dotted.key=value")
      ->take_all();

  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("overrides", overrides, "dotted.key=value overrides")->take_all();
    sub->add_option("--config", config_path, "Pipeline config (JSON)")->check(CLI::ExistingFile);
  };

  auto* preprocess = app.add_subcommand("preprocess", "Validate, filter and split the corpus");
  auto* train_tg = app.add_subcommand("train-tg", "Train the target-group generator");
  auto* train_teacher = app.add_subcommand("train-teacher", "Train the teacher classifier");
  auto* train = app.add_subcommand("train", "Train the student detector/explainer");
  auto* evaluate = app.add_subcommand("evaluate", "Predict a split and score it");
  auto* predict = app.add_subcommand("predict", "Predict posts given inline or in a file");
  auto* serve = app.add_subcommand("serve", "Run the HTTP moderation service");
  for (auto* sub : {preprocess, train_tg, train_teacher, train, evaluate, predict, serve}) {
    add_overrides(sub);
  }
  train->add_option("--weights", weights, "Loss weights, e.g. gamma=0 or alpha=1,beta=0.5");

  std::string split;
  std::string predictions_path;
  std::string report_dir;
  evaluate->add_option("--split", split, "train, valid or test (default: eval.split)");
  evaluate->add_option("--predictions", predictions_path,
                       "Score an existing predictions JSONL instead of running the models")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out", report_dir, "Report directory for --predictions");

  std::vector<std::string> texts;
  std::string input_path;
  predict->add_option("--text", texts, "A post to classify (repeatable)");
  predict->add_option("--input", input_path, "File with one post per line")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& w : weights) {
      for (auto& o : weight_overrides(w)) overrides.push_back(o);
    }
    Config cfg(config_path, overrides);
    char* out = nullptr;
    if (*preprocess) {
      check(toxcl_preprocess(cfg.get(), &out));
    } else if (*train_tg) {
      check(toxcl_train_tg(cfg.get(), &out));
    } else if (*train_teacher) {
      check(toxcl_train_teacher(cfg.get(), &out));
    } else if (*train) {
      check(toxcl_train(cfg.get(), &out));
    } else if (*evaluate) {
      if (!predictions_path.empty()) {
        if (report_dir.empty()) report_dir = predictions_path + ".report";
        check(toxcl_evaluate_predictions(cfg.get(), predictions_path.c_str(),
                                         report_dir.c_str(), &out));
      } else {
        check(toxcl_evaluate(cfg.get(), split.empty() ? nullptr : split.c_str(), &out));
      }
    } else if (*predict) {
      std::vector<std::string> posts = texts;
      if (!input_path.empty()) {
        std::ifstream in(input_path);
        std::string line;
        while (std::getline(in, line)) {
          if (!line.empty()) posts.push_back(line);
        }
      }
      toxcl_pipeline* pipe = nullptr;
      check(toxcl_pipeline_open(cfg.get(), &pipe));
      toxcl_status s = TOXCL_OK;
      for (const auto& p : posts) {
        s = toxcl_predict(pipe, p.c_str(), &out);
        if (s != TOXCL_OK) break;
        print_owned(out);
        out = nullptr;
      }
      toxcl_pipeline_free(pipe);
      check(s);
    } else if (*serve) {
      check(toxcl_serve(cfg.get(), on_listening, nullptr));
    }
    print_owned(out);
    return 0;
  } catch (const Failure& f) {
    std::cerr << "error [" << toxcl_status_name(f.status) << "]: " << toxcl_last_error() << '\n';
    return static_cast<int>(f.status);
  }
}
