#include "ragomp/config.hpp"

#include "ragomp/errors.hpp"
#include "ragomp/text_util.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace ragomp {

Profile parse_profile(std::string_view s) {
  if (s == "augmented" || s == "p4omp") return Profile::Augmented;
  if (s == "baseline") return Profile::Baseline;
  throw UsageError("unknown profile '" + std::string(s) + "' (expected augmented, p4omp or baseline)");
}

std::string_view to_string(Profile p) { return p == Profile::Augmented ? "augmented" : "baseline"; }

const std::vector<std::string>& known_setting_keys() {
  static const std::vector<std::string> keys{
      "profile",         "top_k",          "model",          "temperature",     "threads_sweep",
      "diff_threads",    "repetitions",    "workers",        "relative_tolerance", "provider",
      "replay_dir",      "canned_dir",     "record_dir",     "chat_endpoint",   "embedder",
      "embed_endpoint",  "embed_model",    "corpus_dir",     "corpus_manifest", "index_path",
      "case_manifest",   "out_dir",        "template_path",  "compile_command", "compile_timeout_s",
      "run_timeout_s",   "bench_timeout_s", "chunk_tokens",
  };
  return keys;
}

namespace {

bool is_known(const std::string& key) {
  const auto& keys = known_setting_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

template <class T>
T parse_number(const Settings& s, const std::string& key, T fallback) {
  auto it = s.find(key);
  if (it == s.end()) return fallback;
  const std::string v(text::trim(it->second));
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw UsageError("setting '" + key + "': '" + it->second + "' is not a valid number");
  }
  return out;
}

std::string get(const Settings& s, const std::string& key, std::string fallback) {
  auto it = s.find(key);
  return it == s.end() ? fallback : it->second;
}

}  // namespace

Settings load_settings_file(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  Settings out;
  auto take = [&](const std::string& key, const std::string& value) {
    if (!is_known(key)) throw UsageError("config file " + path.string() + ": unknown key '" + key + "'");
    out[key] = value;
  };
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      take(key, node.data());
    } else {
      for (const auto& [sub, leaf] : node) take(sub, leaf.data());
    }
  }
  return out;
}

Settings settings_from_env() {
  Settings out;
  for (const auto& key : known_setting_keys()) {
    std::string name = "RAGOMP_";
    for (char c : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(name.c_str()); v != nullptr && *v != '\0') out[key] = v;
  }
  return out;
}

Settings merge_settings(const Settings& file, const Settings& env, const Settings& flags) {
  Settings out = file;
  for (const auto& [k, v] : env) out[k] = v;
  for (const auto& [k, v] : flags) out[k] = v;
  return out;
}

std::vector<int> parse_int_list(std::string_view s) {
  std::vector<int> out;
  std::string token;
  auto flush = [&] {
    const std::string t(text::trim(token));
    token.clear();
    if (t.empty()) return;
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || v <= 0) {
      throw UsageError("'" + t + "' is not a positive integer");
    }
    out.push_back(v);
  };
  for (char c : s) {
    if (c == ',') flush();
    else token += c;
  }
  flush();
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

AppConfig config_from_settings(const Settings& s) {
  AppConfig c;
  c.profile = parse_profile(get(s, "profile", std::string(to_string(c.profile))));
  const long long k = parse_number<long long>(s, "top_k", static_cast<long long>(c.top_k));
  if (k <= 0) throw UsageError("setting 'top_k' must be positive");
  c.top_k = static_cast<std::size_t>(k);
  c.model = get(s, "model", c.model);
  c.temperature = parse_number<double>(s, "temperature", c.temperature);
  if (c.temperature < 0.0 || c.temperature > 2.0) throw UsageError("setting 'temperature' must be in [0, 2]");
  try {
    if (s.count("threads_sweep")) c.threads_sweep = parse_int_list(s.at("threads_sweep"));
    if (s.count("diff_threads")) c.diff_threads = parse_int_list(s.at("diff_threads"));
  } catch (const UsageError& e) {
    throw UsageError(std::string("thread list: ") + e.what());
  }
  c.repetitions = parse_number<int>(s, "repetitions", c.repetitions);
  if (c.repetitions <= 0) throw UsageError("setting 'repetitions' must be positive");
  const long long w = parse_number<long long>(s, "workers", static_cast<long long>(c.workers));
  if (w <= 0) throw UsageError("setting 'workers' must be positive");
  c.workers = static_cast<std::size_t>(w);
  c.relative_tolerance = parse_number<double>(s, "relative_tolerance", c.relative_tolerance);

  c.provider = get(s, "provider", c.provider);
  if (c.provider != "live" && c.provider != "replay" && c.provider != "canned") {
    throw UsageError("setting 'provider' must be live, replay or canned");
  }
  c.replay_dir = get(s, "replay_dir", c.replay_dir.string());
  c.canned_dir = get(s, "canned_dir", c.canned_dir.string());
  c.record_dir = get(s, "record_dir", c.record_dir.string());
  c.chat_endpoint = get(s, "chat_endpoint", c.chat_endpoint);
  c.embedder = get(s, "embedder", c.embedder);
  if (c.embedder != "local" && c.embedder != "remote") throw UsageError("setting 'embedder' must be local or remote");
  c.embed_endpoint = get(s, "embed_endpoint", c.embed_endpoint);
  c.embed_model = get(s, "embed_model", c.embed_model);

  c.corpus_dir = get(s, "corpus_dir", c.corpus_dir.string());
  c.corpus_manifest = get(s, "corpus_manifest", c.corpus_manifest.string());
  c.index_path = get(s, "index_path", c.index_path.string());
  c.case_manifest = get(s, "case_manifest", c.case_manifest.string());
  c.out_dir = get(s, "out_dir", c.out_dir.string());
  if (auto it = s.find("template_path"); it != s.end() && !it->second.empty()) c.template_path = it->second;
  c.compile_command = get(s, "compile_command", c.compile_command);
  c.compile_timeout_s = parse_number<int>(s, "compile_timeout_s", c.compile_timeout_s);
  c.run_timeout_s = parse_number<int>(s, "run_timeout_s", c.run_timeout_s);
  c.bench_timeout_s = parse_number<int>(s, "bench_timeout_s", c.bench_timeout_s);
  const long long ct = parse_number<long long>(s, "chunk_tokens", static_cast<long long>(c.chunk_tokens));
  if (ct <= 0) throw UsageError("setting 'chunk_tokens' must be positive");
  c.chunk_tokens = static_cast<std::size_t>(ct);
  return c;
}

}  // namespace ragomp
