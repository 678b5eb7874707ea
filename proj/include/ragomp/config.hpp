#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ragomp {

enum class Profile { Augmented, Baseline };

// "augmented" (alias "p4omp") or "baseline"; UsageError otherwise.
Profile parse_profile(std::string_view s);
std::string_view to_string(Profile p);

// Flat key/value settings. Sources merge with flags over environment
// (RAGOMP_<KEY>) over config file.
using Settings = std::map<std::string, std::string>;

// Keys accepted in config files, environment and flags.
const std::vector<std::string>& known_setting_keys();

// INI file, keys at top level or under any section ("[pipeline] top_k = 4" and
// "top_k = 4" are equivalent). Unknown keys raise UsageError.
Settings load_settings_file(const std::filesystem::path& path);
Settings settings_from_env();
Settings merge_settings(const Settings& file, const Settings& env, const Settings& flags);

struct AppConfig {
  Profile profile = Profile::Augmented;
  std::size_t top_k = 4;
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.2;
  std::vector<int> threads_sweep{1, 2, 4, 8};
  std::vector<int> diff_threads{1, 8};
  int repetitions = 3;
  std::size_t workers = 4;
  double relative_tolerance = 1e-6;

  std::string provider = "replay";  // live | replay | canned
  std::filesystem::path replay_dir;
  std::filesystem::path canned_dir;
  std::filesystem::path record_dir;
  std::string chat_endpoint = "https://api.openai.com/v1/chat/completions";

  std::string embedder = "local";  // local | remote
  std::string embed_endpoint = "https://api.openai.com/v1/embeddings";
  std::string embed_model = "text-embedding-ada-002";

  std::filesystem::path corpus_dir;
  std::filesystem::path corpus_manifest = "out/corpus.jsonl";
  std::filesystem::path index_path = "out/index.jsonl";
  std::filesystem::path case_manifest = "cases.jsonl";
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> template_path;
  std::string compile_command = "g++ -fopenmp -std=c++17 -O2 {src} -o {bin}";
  int compile_timeout_s = 60;
  int run_timeout_s = 120;
  int bench_timeout_s = 600;
  std::size_t chunk_tokens = 400;
};

// Throws UsageError naming the key for malformed values.
AppConfig config_from_settings(const Settings& s);

std::vector<int> parse_int_list(std::string_view s);

}  // namespace ragomp
