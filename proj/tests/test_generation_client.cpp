#include "ragomp/errors.hpp"
#include "ragomp/generation_client.hpp"
#include "ragomp/http_transport.hpp"
#include "ragomp/text_util.hpp"

#include "test_http_server.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <atomic>

using namespace ragomp;
using testsupport::TempDir;

TEST_CASE("extract_code picks the labelled block") {
  CHECK(extract_code("text\n```cpp\nint x;\n```\nmore") == "int x;\n");
  std::string ten;
  for (int i = 0; i < 10; ++i) ten += "line" + std::to_string(i) + "\n";
  const std::string reply = "```\n" + ten + "```\n\n```cpp\na\nb\nc\nd\ne\n```\n";
  CHECK(extract_code(reply) == "a\nb\nc\nd\ne\n");
  CHECK_FALSE(extract_code("no code here at all").has_value());
  CHECK(extract_code("```\nshort\n```\n```text\nlonger block\nof two lines\n```") == "longer block\nof two lines\n");
  CHECK(extract_code("```C++\nint y;\n```") == "int y;\n");
  CHECK(extract_code("```cpp\n\n```\n```\nfallback\n```") == "fallback\n");
}

TEST_CASE("replay serves recorded bytes and misses on prompt drift") {
  TempDir dir;
  const std::string prompt = "Parallelize this.\nint main(){}";
  const std::string reply = "Here you go:\n```cpp\nint main(){}\n```\n\xe2\x9c\x93 done\r\n";
  write_replay_record(dir.path(), {"case1", text::sha256_hex(prompt), reply});
  ReplayProvider replay(dir.path());
  CHECK(replay.size() == 1);

  GenerationRequest req;
  req.case_id = "case1";
  req.prompt = prompt;
  const auto out = generate(req, replay);
  CHECK(out.raw_reply == reply);
  CHECK(out.extracted_code == "int main(){}\n");
  CHECK(out.prompt_sha256 == text::sha256_hex(prompt));
  CHECK(out.provider == "replay");

  req.prompt = "parallelize this.\nint main(){}";  // one byte changed
  CHECK_THROWS_AS(generate(req, replay), ReplayMiss);
  req.prompt = prompt;
  req.case_id = "case2";
  CHECK_THROWS_AS(generate(req, replay), ReplayMiss);
}

TEST_CASE("recording provider writes records that replay back") {
  TempDir canned, rec;
  text::write_file(canned / "case7.md", "```cpp\nint z;\n```\n");
  CannedProvider base(canned.path());
  RecordingProvider recorder(base, rec.path());
  GenerationRequest req;
  req.case_id = "case7";
  req.prompt = "p";
  CHECK(generate(req, recorder).raw_reply == "```cpp\nint z;\n```\n");
  ReplayProvider replay(rec.path());
  CHECK(generate(req, replay).raw_reply == "```cpp\nint z;\n```\n");
  req.case_id = "case8";
  CHECK_THROWS_AS(generate(req, base), ReplayMiss);
}

TEST_CASE("request validation") {
  TempDir d;
  CannedProvider p(d.path());
  GenerationRequest req;
  req.case_id = "c";
  CHECK_THROWS_AS(generate(req, p), InvalidInput);
  req.prompt = "x";
  req.temperature = -1;
  CHECK_THROWS_AS(generate(req, p), InvalidInput);
}

TEST_CASE("chat provider sends one user message and surfaces HTTP errors") {
  testsupport::LocalServer srv;
  std::atomic<int> flaky_calls{0};
  srv.server.Post("/ok", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    CHECK(body.at("model") == "gpt-3.5-turbo");
    CHECK(body.at("temperature").get<double>() == doctest::Approx(0.2));
    REQUIRE(body.at("messages").size() == 1);
    CHECK(body.at("messages").at(0).at("role") == "user");
    const std::string content = body.at("messages").at(0).at("content");
    nlohmann::json reply{{"choices", {{{"message", {{"role", "assistant"}, {"content", "echo:" + content}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  srv.server.Post("/unauthorized", [](const httplib::Request&, httplib::Response& res) { res.status = 401; });
  srv.server.Post("/flaky", [&](const httplib::Request&, httplib::Response& res) {
    if (++flaky_calls < 3) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"third time"}}]})", "application/json");
  });
  srv.start();

  ChatProviderConfig cfg;
  cfg.api_key_env = "RAGOMP_TEST_UNSET_KEY";
  cfg.retry = {4, std::chrono::milliseconds(10)};
  GenerationRequest req;
  req.case_id = "case1";
  req.prompt = "hello";

  cfg.endpoint = srv.url("/ok");
  CHECK(generate(req, ChatCompletionProvider(cfg)).raw_reply == "echo:hello");

  cfg.endpoint = srv.url("/unauthorized");
  try {
    generate(req, ChatCompletionProvider(cfg));
    FAIL("expected a provider error");
  } catch (const ProviderError& e) {
    CHECK(e.status() == 401);
  }

  cfg.endpoint = srv.url("/flaky");
  CHECK(generate(req, ChatCompletionProvider(cfg)).raw_reply == "third time");
  CHECK(flaky_calls.load() == 3);
}

TEST_CASE("forbidden network policy blocks live calls") {
  net::set_policy(net::Policy::Forbid);
  net::reset_request_count();
  ChatProviderConfig cfg;
  cfg.retry = {1, std::chrono::milliseconds(1)};
  GenerationRequest req;
  req.case_id = "c";
  req.prompt = "p";
  CHECK_THROWS_AS(generate(req, ChatCompletionProvider(cfg)), ProviderError);
  CHECK(net::request_count() == 1);
  net::set_policy(net::Policy::Allow);
  net::reset_request_count();
}
