#include "ragomp/harvester.hpp"

#include "ragomp/errors.hpp"
#include "ragomp/http_transport.hpp"
#include "ragomp/text_util.hpp"
#include "ragomp/workers.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <regex>
#include <set>
#include <thread>

namespace ragomp {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string>& harvest_categories() {
  static const std::vector<std::string> kCategories = {
      "dot product",   "matrix multiplication", "quicksort",       "histogram",         "prefix sum",
      "Jacobi 2D method", "Mandelbrot set",     "Monte Carlo simulation", "vector addition", "convolution",
  };
  return kCategories;
}

std::map<std::string, std::string> default_category_keywords() {
  return {
      {"dot product", "c++ dot product loop"},
      {"matrix multiplication", "c++ matrix multiplication loop"},
      {"quicksort", "c++ quicksort implementation"},
      {"histogram", "c++ histogram array loop"},
      {"prefix sum", "c++ prefix sum"},
      {"Jacobi 2D method", "c++ jacobi iteration 2d"},
      {"Mandelbrot set", "c++ mandelbrot set"},
      {"Monte Carlo simulation", "c++ monte carlo pi"},
      {"vector addition", "c++ vector addition loop"},
      {"convolution", "c++ 2d convolution loop"},
  };
}

std::string_view to_string(RejectionReason r) {
  switch (r) {
    case RejectionReason::NoInclude: return "NoInclude";
    case RejectionReason::NoForLoop: return "NoForLoop";
    case RejectionReason::TooShort: return "TooShort";
    case RejectionReason::CompileFail: return "CompileFail";
    case RejectionReason::Empty: return "Empty";
  }
  return "Empty";
}

// --- API access -----------------------------------------------------------------

namespace {

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string backoff_advice(const json& body, int status) {
  if (body.is_object() && body.contains("backoff")) {
    return "retry after " + std::to_string(body["backoff"].get<int>()) + " s backoff";
  }
  if (status == 429 || (body.is_object() && body.value("error_name", "") == "throttle_violation")) {
    return "request quota exceeded; back off exponentially before retrying";
  }
  return "check the API key and request parameters";
}

}  // namespace

json StackExchangeApi::get(const std::string& path_and_query) const {
  std::string url = config_.base_url + path_and_query;
  const std::string key = net::env_or_empty(config_.api_key_env);
  if (!key.empty()) url += "&key=" + url_encode(key);
  net::HttpResponse resp;
  try {
    resp = net::get(url, {{"Accept", "application/json"}}, config_.timeout);
  } catch (const ProviderError& e) {
    throw FetchError(e.what(), e.status(), "check network connectivity and retry later");
  }
  json body = json::parse(resp.body, nullptr, false);
  if (resp.status != 200) {
    throw FetchError("Q&A API returned HTTP " + std::to_string(resp.status) + " for " + path_and_query, resp.status,
                     backoff_advice(body, resp.status));
  }
  if (body.is_discarded()) throw FetchError("Q&A API returned malformed JSON", resp.status, "retry later");
  return body;
}

void StackExchangeApi::backoff(int seconds) const {
  if (seconds > 0) std::this_thread::sleep_for(std::chrono::seconds(seconds));
}

FixtureQaApi::FixtureQaApi(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InvalidInput("fixture directory does not exist: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      auto j = json::parse(text::read_file(f));
      responses_[j.at("request").get<std::string>()] = {j.value("status", 200), j.at("response")};
    } catch (const json::exception& e) {
      throw ParseError("fixture " + f.string() + ": " + e.what(), 1);
    }
  }
}

json FixtureQaApi::get(const std::string& path_and_query) const {
  auto it = responses_.find(path_and_query);
  if (it == responses_.end()) throw ReplayMiss("no fixture for request " + path_and_query, path_and_query);
  const auto& [status, body] = it->second;
  if (status != 200) {
    throw FetchError("Q&A API returned HTTP " + std::to_string(status) + " for " + path_and_query, status,
                     backoff_advice(body, status));
  }
  return body;
}

json RecordingQaApi::get(const std::string& path_and_query) const {
  json body = inner_.get(path_and_query);
  const json record{{"request", path_and_query}, {"status", 200}, {"response", body}};
  text::write_file(dir_ / (text::sha256_hex(path_and_query).substr(0, 16) + ".json"), record.dump(2) + "\n");
  return body;
}

std::string question_search_request(std::string_view keywords, int page, std::string_view site) {
  return "/2.3/search/advanced?order=desc&sort=relevance&accepted=True&q=" + url_encode(keywords) +
         "&site=" + std::string(site) + "&page=" + std::to_string(page) + "&pagesize=30";
}

std::string answers_request(const std::vector<long long>& answer_ids, std::string_view site) {
  std::string ids;
  for (std::size_t i = 0; i < answer_ids.size(); ++i) {
    if (i) ids += ';';
    ids += std::to_string(answer_ids[i]);
  }
  return "/2.3/answers/" + ids + "?order=desc&sort=votes&site=" + std::string(site) + "&filter=withbody";
}

std::vector<std::string> extract_html_code_blocks(std::string_view html) {
  static const std::regex block_re(R"(<pre[^>]*>\s*<code[^>]*>([\s\S]*?)</code>\s*</pre>)");
  static const std::regex entity_re(R"(&(#x[0-9a-fA-F]+|#[0-9]+|lt|gt|amp|quot|apos|nbsp);)");
  std::vector<std::string> out;
  const std::string doc(html);
  for (auto it = std::sregex_iterator(doc.begin(), doc.end(), block_re); it != std::sregex_iterator(); ++it) {
    const std::string encoded = (*it)[1].str();
    std::string decoded;
    std::size_t last = 0;
    for (auto e = std::sregex_iterator(encoded.begin(), encoded.end(), entity_re); e != std::sregex_iterator(); ++e) {
      decoded += encoded.substr(last, static_cast<std::size_t>(e->position(0)) - last);
      const std::string name = (*e)[1].str();
      if (name == "lt") decoded += '<';
      else if (name == "gt") decoded += '>';
      else if (name == "amp") decoded += '&';
      else if (name == "quot") decoded += '"';
      else if (name == "apos") decoded += '\'';
      else if (name == "nbsp") decoded += ' ';
      else {
        const long cp = name[1] == 'x' ? std::stol(name.substr(2), nullptr, 16) : std::stol(name.substr(1));
        if (cp < 0x80) decoded += static_cast<char>(cp);
      }
      last = static_cast<std::size_t>(e->position(0) + e->length(0));
    }
    decoded += encoded.substr(last);
    out.push_back(std::move(decoded));
  }
  return out;
}

std::vector<SnippetCandidate> fetch_candidates(const std::string& category, const std::string& keywords,
                                               int max_pages, const QaApi& api) {
  if (max_pages <= 0) throw InvalidInput("fetch_candidates: max_pages must be positive");
  std::vector<SnippetCandidate> out;
  for (int page = 1; page <= max_pages; ++page) {
    const json questions = api.get(question_search_request(keywords, page));
    std::vector<long long> accepted;
    for (const auto& q : questions.value("items", json::array())) {
      if (q.contains("accepted_answer_id")) accepted.push_back(q["accepted_answer_id"].get<long long>());
    }
    if (questions.contains("backoff")) api.backoff(questions["backoff"].get<int>());
    if (!accepted.empty()) {
      const json answers = api.get(answers_request(accepted));
      const json items = answers.value("items", json::array());
      std::map<long long, const json*> by_id;
      for (const auto& a : items) by_id[a.at("answer_id").get<long long>()] = &a;
      for (long long id : accepted) {
        auto it = by_id.find(id);
        if (it == by_id.end()) continue;
        for (auto& code : extract_html_code_blocks(it->second->value("body", ""))) {
          SnippetCandidate c;
          c.origin_url = "https://stackoverflow.com/a/" + std::to_string(id);
          c.category = category;
          c.raw_code = std::move(code);
          out.push_back(std::move(c));
        }
      }
      if (answers.contains("backoff")) api.backoff(answers["backoff"].get<int>());
    }
    if (!questions.value("has_more", false)) break;
  }
  return out;
}

// --- cleaning -------------------------------------------------------------------

namespace {

// Same-length copy of code with comment and literal contents blanked, so
// structural scans never match inside them. Newlines are preserved.
struct Masked {
  std::string code;
  std::vector<bool> in_comment;
};

Masked mask(std::string_view src) {
  Masked m{std::string(src), std::vector<bool>(src.size(), false)};
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto blank = [&](std::size_t from, std::size_t to, bool comment) {
    for (std::size_t k = from; k < to && k < n; ++k) {
      if (src[k] != '\n') m.code[k] = ' ';
      if (comment) m.in_comment[k] = true;
    }
  };
  while (i < n) {
    const char c = src[i];
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      std::size_t e = src.find('\n', i);
      if (e == std::string_view::npos) e = n;
      blank(i, e, true);
      i = e;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      std::size_t e = src.find("*/", i + 2);
      e = e == std::string_view::npos ? n : e + 2;
      blank(i, e, true);
      i = e;
    } else if (c == 'R' && i + 1 < n && src[i + 1] == '"' &&
               (i == 0 || !(std::isalnum(static_cast<unsigned char>(src[i - 1])) || src[i - 1] == '_'))) {
      const std::size_t open = src.find('(', i + 2);
      if (open == std::string_view::npos) {
        ++i;
        continue;
      }
      const std::string close = ")" + std::string(src.substr(i + 2, open - i - 2)) + "\"";
      std::size_t e = src.find(close, open);
      e = e == std::string_view::npos ? n : e + close.size();
      blank(i + 2, e - 1, false);
      i = e;
    } else if (c == '"' || (c == '\'' && (i == 0 || !std::isalnum(static_cast<unsigned char>(src[i - 1]))))) {
      std::size_t k = i + 1;
      while (k < n && src[k] != c && src[k] != '\n') k += (src[k] == '\\') ? 2 : 1;
      const std::size_t e = std::min(k, n);
      blank(i + 1, e, false);
      i = e + 1;
    } else {
      ++i;
    }
  }
  return m;
}

bool is_preprocessor_line(std::string_view code, std::size_t pos) {
  std::size_t b = code.rfind('\n', pos);
  b = b == std::string_view::npos ? 0 : b + 1;
  return text::trim(code.substr(b)).starts_with("#");
}

const std::regex& harness_line_re() {
  static const std::regex re(R"re(^\s*std::cout << "RESULT ([A-Za-z_]\w*) " << ([A-Za-z_]\w*) << '\\n';\s*$)re");
  return re;
}

bool is_harness_line(std::string_view code, std::size_t pos) {
  std::size_t b = code.rfind('\n', pos);
  b = b == std::string_view::npos ? 0 : b + 1;
  std::size_t e = code.find('\n', pos);
  const std::string line(code.substr(b, e == std::string_view::npos ? code.npos : e - b));
  return std::regex_match(line, harness_line_re());
}

std::size_t matching_close(std::string_view masked, std::size_t open, char o, char c) {
  int depth = 0;
  for (std::size_t k = open; k < masked.size(); ++k) {
    if (masked[k] == o) ++depth;
    if (masked[k] == c && --depth == 0) return k;
  }
  return std::string_view::npos;
}

// Whole statement around pos: back to the previous ; { } at paren depth 0, then
// forward to the terminating ; or through the attached compound block.
std::pair<std::size_t, std::size_t> statement_range(std::string_view masked, std::size_t pos) {
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t k = pos; k-- > 0;) {
    const char ch = masked[k];
    if (ch == ')') ++depth;
    else if (ch == '(') --depth;
    else if (depth <= 0 && (ch == ';' || ch == '{' || ch == '}')) {
      start = k + 1;
      break;
    }
    if (ch == '\n' && depth <= 0 && k > 0) {
      const std::size_t prev = masked.rfind('\n', k - 1);
      const std::size_t ls = prev == std::string_view::npos ? 0 : prev + 1;
      if (text::trim(masked.substr(ls, k - ls)).starts_with("#")) {
        start = k + 1;
        break;
      }
    }
  }
  depth = 0;
  std::size_t end = masked.size();
  for (std::size_t k = pos; k < masked.size(); ++k) {
    const char ch = masked[k];
    if (ch == '(') ++depth;
    else if (ch == ')') --depth;
    else if (depth <= 0 && ch == ';') {
      end = k + 1;
      break;
    } else if (depth <= 0 && ch == '{') {
      const std::size_t close = matching_close(masked, k, '{', '}');
      end = close == std::string_view::npos ? masked.size() : close + 1;
      break;
    } else if (depth <= 0 && ch == '}') {
      end = k;
      break;
    }
  }
  return {start, end};
}

std::vector<std::string> split_top_level(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char ch = s[k];
    if (ch == '(' || ch == '[' || ch == '{') ++depth;
    else if (ch == ')' || ch == ']' || ch == '}') --depth;
    else if (depth == 0 && s.substr(k, sep.size()) == sep) {
      out.emplace_back(s.substr(last, k - last));
      last = k + sep.size();
      k += sep.size() - 1;
    }
  }
  out.emplace_back(s.substr(last));
  return out;
}

bool is_simple_identifier(std::string_view s) {
  static const std::regex re(R"(^[A-Za-z_]\w*$)");
  static const std::set<std::string, std::less<>> kSkip = {"endl", "flush", "std", "ends"};
  const std::string t(text::trim(s));
  return std::regex_match(t, re) && !kSkip.contains(t);
}

// Identifiers printed by a stdout statement (stream chain or printf/puts args).
std::vector<std::string> printed_identifiers(std::string_view masked_stmt) {
  std::vector<std::string> out;
  static const std::regex stream_re(R"(\b(?:std\s*::\s*)?cout\b)");
  static const std::regex printf_re(R"(\bprintf\s*\()");
  const std::string stmt(masked_stmt);
  std::smatch m;
  if (std::regex_search(stmt, m, stream_re)) {
    auto parts = split_top_level(std::string_view(stmt).substr(static_cast<std::size_t>(m.position(0))), "<<");
    for (std::size_t k = 1; k < parts.size(); ++k) {
      std::string p(text::trim(parts[k]));
      if (!p.empty() && p.back() == ';') p.pop_back();
      if (p.starts_with("std::")) continue;
      if (is_simple_identifier(p)) out.emplace_back(text::trim(p));
    }
  } else if (std::regex_search(stmt, m, printf_re)) {
    const std::size_t open = static_cast<std::size_t>(m.position(0) + m.length(0)) - 1;
    const std::size_t close = matching_close(stmt, open, '(', ')');
    if (close != std::string::npos) {
      auto args = split_top_level(std::string_view(stmt).substr(open + 1, close - open - 1), ",");
      for (std::size_t k = 1; k < args.size(); ++k) {
        if (is_simple_identifier(args[k])) out.emplace_back(text::trim(args[k]));
      }
    }
  }
  return out;
}

std::string normalize_lines(std::string_view code) {
  std::vector<std::string> lines;
  for (const auto& raw : text::split_lines(code)) {
    std::string line(text::rtrim(raw));
    if (line.empty() && (lines.empty() || lines.back().empty())) continue;
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) return {};
  return text::join(lines, "\n") + "\n";
}

struct MainBody {
  std::size_t open = 0;
  std::size_t close = 0;
};

std::optional<MainBody> find_main(std::string_view masked) {
  static const std::regex main_re(R"(\bint\s+main\s*\()");
  const std::string s(masked);
  std::smatch m;
  if (!std::regex_search(s, m, main_re)) return std::nullopt;
  const std::size_t paren = static_cast<std::size_t>(m.position(0) + m.length(0)) - 1;
  const std::size_t paren_close = matching_close(masked, paren, '(', ')');
  if (paren_close == std::string_view::npos) return std::nullopt;
  const std::size_t open = masked.find('{', paren_close);
  if (open == std::string_view::npos) return std::nullopt;
  const std::size_t close = matching_close(masked, open, '{', '}');
  if (close == std::string_view::npos) return std::nullopt;
  return MainBody{open, close};
}

// True if name is declared at global scope or directly in main's outermost block.
bool declared_in_scope(std::string_view masked, const MainBody& main_body, const std::string& name) {
  const std::regex decl_re("[\\w>\\]*&]\\s+\\**&?\\s*" + name + "\\s*(=|;|\\(|\\[|\\{|,)");
  const std::string s(masked);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), decl_re); it != std::sregex_iterator(); ++it) {
    const std::size_t pos = static_cast<std::size_t>(it->position(0));
    int depth = 0;
    for (std::size_t k = 0; k < pos; ++k) {
      if (s[k] == '{') ++depth;
      if (s[k] == '}') --depth;
    }
    if (depth == 0 && pos < main_body.open) return true;
    if (depth == 1 && pos > main_body.open && pos < main_body.close) return true;
  }
  return false;
}

}  // namespace

IoStripResult strip_io_statements(std::string_view code) {
  static const std::regex io_re(
      R"(\b(?:std\s*::\s*)?(cout|cin|cerr|clog|wcout|wcin|printf|fprintf|scanf|fscanf|puts|fputs|putchar|getchar|gets|fgets|getline|ifstream|ofstream|fstream|freopen|fopen|fclose|fflush)\b)");
  const Masked m = mask(code);
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  IoStripResult result;
  for (auto it = std::sregex_iterator(m.code.begin(), m.code.end(), io_re); it != std::sregex_iterator(); ++it) {
    const std::size_t pos = static_cast<std::size_t>(it->position(0));
    if (is_preprocessor_line(m.code, pos) || is_harness_line(code, pos)) continue;
    if (!ranges.empty() && pos < ranges.back().second) continue;
    auto range = statement_range(m.code, pos);
    const std::string stmt = m.code.substr(range.first, range.second - range.first);
    for (auto& id : printed_identifiers(stmt)) {
      if (std::find(result.printed_identifiers.begin(), result.printed_identifiers.end(), id) ==
          result.printed_identifiers.end()) {
        result.printed_identifiers.push_back(std::move(id));
      }
    }
    ranges.push_back(range);
  }
  std::string out(code);
  for (auto r = ranges.rbegin(); r != ranges.rend(); ++r) out.erase(r->first, r->second - r->first);
  result.code = normalize_lines(out);
  return result;
}

std::string strip_comments(std::string_view code) {
  const Masked m = mask(code);
  std::string out;
  out.reserve(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (!m.in_comment[i] || code[i] == '\n') out.push_back(code[i]);
  }
  return normalize_lines(out);
}

bool has_include_directive(std::string_view code) {
  static const std::regex re(R"((^|\n)[ \t]*#[ \t]*include\b)");
  const std::string s(code);
  return std::regex_search(s, re);
}

bool has_for_loop_with_body(std::string_view code) {
  static const std::regex for_re(R"(\bfor\s*\()");
  const Masked m = mask(code);
  for (auto it = std::sregex_iterator(m.code.begin(), m.code.end(), for_re); it != std::sregex_iterator(); ++it) {
    const std::size_t open = static_cast<std::size_t>(it->position(0) + it->length(0)) - 1;
    const std::size_t close = matching_close(m.code, open, '(', ')');
    if (close == std::string::npos) continue;
    std::size_t k = close + 1;
    while (k < m.code.size() && std::isspace(static_cast<unsigned char>(m.code[k]))) ++k;
    if (k >= m.code.size() || m.code[k] == ';') continue;
    if (m.code[k] == '{') {
      const std::size_t end = matching_close(m.code, k, '{', '}');
      if (end != std::string::npos && !text::is_blank(std::string_view(m.code).substr(k + 1, end - k - 1))) return true;
      continue;
    }
    return true;
  }
  return false;
}

std::size_t non_blank_line_count(std::string_view code) {
  std::size_t n = 0;
  for (const auto& line : text::split_lines(code)) {
    if (!text::is_blank(line)) ++n;
  }
  return n;
}

std::string add_result_harness(std::string_view code, const std::vector<std::string>& identifiers) {
  const Masked m = mask(code);
  auto main_body = find_main(m.code);
  if (!main_body) return std::string(code);

  std::set<std::string> already;
  for (const auto& line : text::split_lines(code)) {
    std::smatch hm;
    if (std::regex_match(line, hm, harness_line_re())) already.insert(hm[1].str());
  }
  std::string harness;
  for (const auto& id : identifiers) {
    if (already.contains(id) || !declared_in_scope(m.code, *main_body, id)) continue;
    harness += "  std::cout << \"RESULT " + id + " \" << " + id + " << '\\n';\n";
    already.insert(id);
  }
  if (harness.empty()) return std::string(code);

  // Before the last outermost `return` in main, else before main's closing brace.
  static const std::regex return_re(R"(\breturn\b)");
  std::size_t insert_at = main_body->close;
  const std::string body = m.code.substr(main_body->open, main_body->close - main_body->open);
  for (auto it = std::sregex_iterator(body.begin(), body.end(), return_re); it != std::sregex_iterator(); ++it) {
    const std::size_t pos = main_body->open + static_cast<std::size_t>(it->position(0));
    int depth = 0;
    for (std::size_t k = main_body->open; k < pos; ++k) {
      if (m.code[k] == '{') ++depth;
      if (m.code[k] == '}') --depth;
    }
    if (depth == 1) insert_at = pos;
  }
  const std::size_t line_start = code.rfind('\n', insert_at == 0 ? 0 : insert_at - 1);
  const std::size_t at = line_start == std::string_view::npos ? 0 : line_start + 1;
  std::string out(code);
  if (text::is_blank(std::string_view(out).substr(at, insert_at - at))) {
    out.insert(at, harness);
  } else {
    out.insert(insert_at, "\n" + harness);
  }

  static const std::regex iostream_re(R"(#\s*include\s*<iostream>)");
  if (!std::regex_search(out, iostream_re)) out = "#include <iostream>\n" + out;
  return normalize_lines(out);
}

SnippetCandidate clean_and_filter(SnippetCandidate candidate, const FilterOptions& options) {
  candidate.cleaned_code.reset();
  candidate.rejection_reason.reset();
  auto reject = [&](RejectionReason r) {
    candidate.rejection_reason = r;
    return candidate;
  };
  if (text::is_blank(candidate.raw_code)) return reject(RejectionReason::Empty);

  // (i) input/output removal, (ii) comment removal
  IoStripResult io = strip_io_statements(candidate.raw_code);
  const std::string code = strip_comments(io.code);
  if (text::is_blank(code)) return reject(RejectionReason::Empty);
  // (iii) structural requirements
  if (!has_include_directive(code)) return reject(RejectionReason::NoInclude);
  if (!has_for_loop_with_body(code)) return reject(RejectionReason::NoForLoop);
  // (iv) minimum length
  if (non_blank_line_count(code) < options.min_lines) return reject(RejectionReason::TooShort);

  candidate.cleaned_code = add_result_harness(code, io.printed_identifiers);
  return candidate;
}

SnippetCandidate compile_filter(SnippetCandidate candidate, const fs::path& work_dir, const CompilerConfig& config) {
  if (!candidate.cleaned_code) throw InvalidInput("compile_filter: candidate has no cleaned code");
  const auto result = compile_gate(*candidate.cleaned_code, work_dir, config, "snippet");
  if (!result.compile_ok) {
    candidate.cleaned_code.reset();
    candidate.rejection_reason = RejectionReason::CompileFail;
  }
  return candidate;
}

CaseEntry append_survivor(std::vector<CaseEntry>& cases, const SnippetCandidate& survivor, const fs::path& cases_dir,
                          const fs::path& manifest_dir) {
  if (!survivor.cleaned_code || survivor.rejection_reason) {
    throw InvalidInput("append_survivor: candidate was rejected");
  }
  CaseEntry entry;
  entry.case_id = next_case_id(cases);
  const fs::path file = cases_dir / (entry.case_id + ".cc");
  text::write_file(file, *survivor.cleaned_code);
  entry.serial_path = fs::absolute(file).lexically_proximate(fs::absolute(manifest_dir)).generic_string();
  cases.push_back(entry);
  return entry;
}

HarvestResult harvest(const std::map<std::string, std::string>& keywords_by_category, const QaApi& api,
                      std::vector<CaseEntry>& cases, const fs::path& cases_dir, const fs::path& manifest_dir,
                      const fs::path& work_dir, const HarvestOptions& options) {
  std::vector<std::string> order;
  for (const auto& c : harvest_categories()) {
    if (keywords_by_category.contains(c)) order.push_back(c);
  }
  for (const auto& [c, _] : keywords_by_category) {
    if (std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);
  }

  HarvestResult result;
  for (const auto& category : order) {
    auto fetched = fetch_candidates(category, keywords_by_category.at(category), options.max_pages, api);
    const std::size_t first = result.candidates.size();
    for (auto& c : fetched) result.candidates.push_back(std::move(c));
    parallel_for(result.candidates.size() - first, options.workers, [&](std::size_t i) {
      auto& c = result.candidates[first + i];
      c = clean_and_filter(std::move(c), options.filter);
      if (c.cleaned_code) {
        c = compile_filter(std::move(c), work_dir / ("w" + std::to_string(first + i)), options.compiler);
      }
    });
  }
  for (const auto& c : result.candidates) {
    if (c.cleaned_code) result.added.push_back(append_survivor(cases, c, cases_dir, manifest_dir));
  }
  return result;
}

json candidate_to_json(const SnippetCandidate& c) {
  return json{{"origin_url", c.origin_url},
              {"category", c.category},
              {"raw_code", c.raw_code},
              {"cleaned_code", c.cleaned_code ? json(*c.cleaned_code) : json()},
              {"rejection_reason", c.rejection_reason ? json(std::string(to_string(*c.rejection_reason))) : json()}};
}

}  // namespace ragomp
