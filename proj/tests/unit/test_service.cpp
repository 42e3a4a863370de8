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

#include "doctest.h"
#include "service/service.hpp"
#include "support/toy.hpp"

// After Eigen: httplib pulls in system headers that clash with it otherwise.
#include "httplib.h"

using namespace toxcl;
using nlohmann::json;

namespace {

struct Fixture {
  testing::StubTargetGenerator tg{"women"};
  testing::StubClassifier cls{
      [](std::string_view in) { return in.find("ruin") != std::string_view::npos ? 1 : 0; }};
  testing::CountingDecoder dec;
  service::ModerationService svc{testing::toy_config("unused").service, {}};
};

}  // namespace

TEST_CASE("moderation handler semantics") {
  Fixture f;
  CHECK(f.svc.health().status == 503);
  CHECK(f.svc.health().body.at("status") == "loading");
  CHECK(f.svc.moderate(R"({"posts": ["x"]})").status == 503);

  f.svc.attach({&f.tg, &f.cls, &f.dec}, {{"tg", "stub"}, {"student", "stub"}});
  CHECK(f.svc.health().status == 200);
  CHECK(f.svc.health().body.at("models").at("tg") == "stub");

  auto r = f.svc.moderate(R"({"posts": ["they ruin it", "hello", "ruin again"]})");
  REQUIRE(r.status == 200);
  REQUIRE(r.body.is_array());
  REQUIRE(r.body.size() == 3);
  CHECK(r.body[0].at("label") == 1);
  CHECK(r.body[0].at("explanation") == "they are targeted");
  CHECK(r.body[1].at("label") == 0);
  CHECK(r.body[1].at("explanation") == "[None]");
  CHECK(r.body[2].at("label") == 1);

  auto error_code = [&](const std::string& body) {
    auto resp = f.svc.moderate(body);
    return std::make_pair(resp.status, resp.body.at("error").at("code").get<std::string>());
  };
  CHECK(error_code("not json").first == 400);
  CHECK(error_code(R"({"text": "x"})").first == 400);
  CHECK(error_code(R"({"posts": "x"})").first == 400);
  CHECK(error_code(R"({"posts": []})").first == 400);
  CHECK(error_code(R"({"posts": ["ok", "  "]})").first == 400);
  CHECK(error_code(R"({"posts": ["ok", 3]})").first == 400);
  json big = {{"posts", std::vector<std::string>(9, "x")}};
  CHECK(error_code(big.dump()).first == 413);
}

TEST_CASE("HTTP round trip") {
  Fixture f;
  const int port = f.svc.start();
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 503);

  f.svc.attach({&f.tg, &f.cls, &f.dec}, {{"tg", "stub"}});
  health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);

  std::vector<std::string> posts;
  for (int i = 0; i < 8; ++i) posts.push_back(i % 2 ? "fine post " + std::to_string(i) : "ruin");
  auto res = client.Post("/moderate", json{{"posts", posts}}.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto body = json::parse(res->body);
  REQUIRE(body.size() == posts.size());
  for (std::size_t i = 0; i < posts.size(); ++i) CHECK(body[i].at("label") == (i % 2 ? 0 : 1));

  res = client.Post("/moderate", "{", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  f.svc.stop();
}
