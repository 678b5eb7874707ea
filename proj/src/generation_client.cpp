#include "ragomp/generation_client.hpp"

#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <mutex>
#include <vector>

namespace ragomp {

using nlohmann::json;
namespace fs = std::filesystem;

GenerationOutcome generate(const GenerationRequest& request, const GenerationProvider& provider) {
  if (text::is_blank(request.prompt)) throw InvalidInput("generate: prompt is empty");
  if (request.temperature < 0.0) throw InvalidInput("generate: temperature must be >= 0");
  GenerationOutcome out;
  out.case_id = request.case_id;
  out.provider = provider.name();
  out.prompt_sha256 = text::sha256_hex(request.prompt);
  const auto start = std::chrono::steady_clock::now();
  out.raw_reply = provider.complete(request);
  out.provider_latency =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  out.extracted_code = extract_code(out.raw_reply);
  return out;
}

namespace {

struct FencedBlock {
  std::string label;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<FencedBlock> fenced_blocks(std::string_view reply) {
  std::vector<FencedBlock> blocks;
  std::optional<FencedBlock> open;
  std::size_t pos = 0;
  while (pos < reply.size()) {
    std::size_t nl = reply.find('\n', pos);
    const std::size_t line_end = nl == std::string_view::npos ? reply.size() : nl;
    const std::size_t next = nl == std::string_view::npos ? reply.size() : nl + 1;
    const auto line = text::trim(reply.substr(pos, line_end - pos));
    if (line.starts_with("```")) {
      if (!open) {
        FencedBlock b;
        auto info = text::trim(line.substr(3));
        auto space = info.find_first_of(" \t{");
        b.label = text::to_lower(info.substr(0, space));
        b.begin = next;
        open = b;
      } else if (text::trim(line.substr(3)).empty()) {
        open->end = pos;
        blocks.push_back(*open);
        open.reset();
      }
    }
    pos = next;
  }
  if (open) {
    open->end = reply.size();
    blocks.push_back(*open);
  }
  return blocks;
}

}  // namespace

std::optional<std::string> extract_code(std::string_view raw_reply) {
  const auto blocks = fenced_blocks(raw_reply);
  const FencedBlock* longest = nullptr;
  for (const auto& b : blocks) {
    const auto body = raw_reply.substr(b.begin, b.end - b.begin);
    if (text::is_blank(body)) continue;
    if (b.label == "cpp" || b.label == "c++" || b.label == "c") return std::string(body);
    if (!longest || body.size() > longest->end - longest->begin) longest = &b;
  }
  if (!longest) return std::nullopt;
  return std::string(raw_reply.substr(longest->begin, longest->end - longest->begin));
}

std::string ChatCompletionProvider::complete(const GenerationRequest& request) const {
  net::Headers headers;
  const std::string key = net::env_or_empty(config_.api_key_env);
  if (!key.empty()) headers["Authorization"] = "Bearer " + key;
  const std::string body = json{{"model", request.model_name},
                                {"temperature", request.temperature},
                                {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})}}
                               .dump();
  auto resp = net::with_retries(config_.retry,
                                [&] { return net::post_json(config_.endpoint, body, headers, config_.timeout); });
  if (resp.status < 200 || resp.status >= 300) {
    throw ProviderError("chat endpoint returned HTTP " + std::to_string(resp.status) + " for " + request.case_id,
                        resp.status);
  }
  try {
    return json::parse(resp.body).at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed chat response: ") + e.what(), resp.status);
  }
}

void write_replay_record(const fs::path& dir, const ReplayRecord& record) {
  const json j{{"case_id", record.case_id}, {"prompt_sha256", record.prompt_sha256}, {"raw_reply", record.raw_reply}};
  text::write_file(dir / (record.case_id + "-" + record.prompt_sha256.substr(0, 12) + ".json"), j.dump(2) + "\n");
}

ReplayProvider::ReplayProvider(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InvalidInput("replay directory does not exist: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      auto j = json::parse(text::read_file(f));
      records_[{j.at("case_id").get<std::string>(), j.at("prompt_sha256").get<std::string>()}] =
          j.at("raw_reply").get<std::string>();
    } catch (const json::exception& e) {
      throw ParseError("replay record " + f.string() + ": " + e.what(), 1);
    }
  }
}

std::string ReplayProvider::complete(const GenerationRequest& request) const {
  const std::string sha = text::sha256_hex(request.prompt);
  auto it = records_.find({request.case_id, sha});
  if (it == records_.end()) {
    throw ReplayMiss("no replay record for case '" + request.case_id + "' with prompt sha256 " + sha, request.case_id);
  }
  return it->second;
}

std::string CannedProvider::complete(const GenerationRequest& request) const {
  for (const char* ext : {".md", ".txt"}) {
    const auto path = dir_ / (request.case_id + ext);
    if (fs::is_regular_file(path)) return text::read_file(path);
  }
  throw ReplayMiss("no canned reply for case '" + request.case_id + "' in " + dir_.string(), request.case_id);
}

std::string RecordingProvider::complete(const GenerationRequest& request) const {
  std::string reply = inner_.complete(request);
  static std::mutex write_mutex;
  std::lock_guard lock(write_mutex);
  write_replay_record(dir_, {request.case_id, text::sha256_hex(request.prompt), reply});
  return reply;
}

}  // namespace ragomp
