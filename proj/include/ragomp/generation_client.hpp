#pragma once

#include "ragomp/http_transport.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace ragomp {

inline constexpr double kDefaultTemperature = 0.2;
inline constexpr std::string_view kDefaultModel = "gpt-3.5-turbo";

struct GenerationRequest {
  std::string model_name = std::string(kDefaultModel);
  double temperature = kDefaultTemperature;
  std::string prompt;
  std::string case_id;
};

struct GenerationOutcome {
  std::string case_id;
  std::string raw_reply;
  std::optional<std::string> extracted_code;
  std::chrono::milliseconds provider_latency{0};
  std::string provider;
  std::string prompt_sha256;
};

class GenerationProvider {
 public:
  virtual ~GenerationProvider() = default;
  virtual std::string name() const = 0;
  // Returns the model's raw reply text.
  virtual std::string complete(const GenerationRequest& request) const = 0;
};

// Single attempt per case; the reply is captured verbatim and code extraction
// is attempted on it.
GenerationOutcome generate(const GenerationRequest& request, const GenerationProvider& provider);

// Interior of the first fenced block labelled cpp, c++ or c; otherwise the
// longest fenced block; otherwise nothing. Blank blocks are ignored.
std::optional<std::string> extract_code(std::string_view raw_reply);

struct ChatProviderConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::seconds timeout{120};
  net::RetryPolicy retry{4, std::chrono::milliseconds{1000}};
};

// Chat-completions wire format; the whole prompt goes in one user message.
class ChatCompletionProvider final : public GenerationProvider {
 public:
  explicit ChatCompletionProvider(ChatProviderConfig config) : config_(std::move(config)) {}
  std::string name() const override { return "live"; }
  std::string complete(const GenerationRequest& request) const override;

 private:
  ChatProviderConfig config_;
};

struct ReplayRecord {
  std::string case_id;
  std::string prompt_sha256;
  std::string raw_reply;
};

void write_replay_record(const std::filesystem::path& dir, const ReplayRecord& record);

// Serves recorded replies keyed by (case_id, SHA-256 of the prompt). A changed
// prompt is a miss, never a silent fallback.
class ReplayProvider final : public GenerationProvider {
 public:
  explicit ReplayProvider(const std::filesystem::path& dir);
  std::string name() const override { return "replay"; }
  std::string complete(const GenerationRequest& request) const override;
  std::size_t size() const { return records_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, std::string> records_;
};

// Reads <case_id>.md (or .txt) reply files regardless of prompt. Used for
// authoring fixtures and for offline experiments with hand-written replies.
class CannedProvider final : public GenerationProvider {
 public:
  explicit CannedProvider(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::string name() const override { return "canned"; }
  std::string complete(const GenerationRequest& request) const override;

 private:
  std::filesystem::path dir_;
};

// Forwards to another provider and writes a replay record for every reply.
class RecordingProvider final : public GenerationProvider {
 public:
  RecordingProvider(const GenerationProvider& inner, std::filesystem::path dir)
      : inner_(inner), dir_(std::move(dir)) {}
  std::string name() const override { return inner_.name(); }
  std::string complete(const GenerationRequest& request) const override;

 private:
  const GenerationProvider& inner_;
  std::filesystem::path dir_;
};

}  // namespace ragomp
