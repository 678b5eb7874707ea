#include "ragomp/validation_lab.hpp"

#include "ragomp/errors.hpp"
#include "ragomp/subprocess.hpp"
#include "ragomp/text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace ragomp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::pair<FailureCategory, std::string_view> kCategoryNames[] = {
    {FailureCategory::UndeclaredInClause, "UndeclaredInClause"},
    {FailureCategory::InvalidReduction, "InvalidReduction"},
    {FailureCategory::AtomicMisuse, "AtomicMisuse"},
    {FailureCategory::DefaultNoneViolation, "DefaultNoneViolation"},
    {FailureCategory::SyntaxError, "SyntaxError"},
    {FailureCategory::CollapseMisuse, "CollapseMisuse"},
    {FailureCategory::IteratorLimitation, "IteratorLimitation"},
    {FailureCategory::DeprecatedConstruct, "DeprecatedConstruct"},
    {FailureCategory::OtherCompileError, "OtherCompileError"},
};

constexpr std::pair<DifferentialVerdict, std::string_view> kVerdictNames[] = {
    {DifferentialVerdict::Pass, "Pass"},
    {DifferentialVerdict::Mismatch, "Mismatch"},
    {DifferentialVerdict::RuntimeError, "RuntimeError"},
    {DifferentialVerdict::Skipped, "Skipped"},
};

}  // namespace

std::string_view to_string(FailureCategory c) {
  for (const auto& [k, name] : kCategoryNames) {
    if (k == c) return name;
  }
  return "OtherCompileError";
}

FailureCategory parse_failure_category(std::string_view s) {
  for (const auto& [k, name] : kCategoryNames) {
    if (name == s) return k;
  }
  throw InvalidInput("unknown failure category: " + std::string(s));
}

std::string_view to_string(DifferentialVerdict v) {
  for (const auto& [k, name] : kVerdictNames) {
    if (k == v) return name;
  }
  return "Skipped";
}

DifferentialVerdict parse_verdict(std::string_view s) {
  for (const auto& [k, name] : kVerdictNames) {
    if (name == s) return k;
  }
  throw InvalidInput("unknown differential verdict: " + std::string(s));
}

void check_report(const ValidationReport& r) {
  if (r.compile_ok && r.failure_category) {
    throw IntegrityError(r.case_id + ": compiled report carries a failure category");
  }
  if (!r.compile_ok && !r.failure_category) {
    throw IntegrityError(r.case_id + ": failed compile without a failure category");
  }
  if (r.differential_verdict != DifferentialVerdict::Skipped && !r.compile_ok) {
    throw IntegrityError(r.case_id + ": differential verdict on a case that did not compile");
  }
}

void to_json(json& j, const ValidationReport& r) {
  j = json{{"case_id", r.case_id},
           {"compile_ok", r.compile_ok},
           {"failure_category", r.failure_category ? json(std::string(to_string(*r.failure_category))) : json()},
           {"diagnostics", r.diagnostics},
           {"differential_verdict", std::string(to_string(r.differential_verdict))},
           {"threads_tested", r.threads_tested},
           {"excluded_unparallelizable", r.excluded_unparallelizable}};
}

void from_json(const json& j, ValidationReport& r) {
  r.case_id = j.at("case_id").get<std::string>();
  r.compile_ok = j.at("compile_ok").get<bool>();
  const auto& fc = j.at("failure_category");
  r.failure_category = fc.is_null() ? std::nullopt
                                    : std::optional<FailureCategory>(parse_failure_category(fc.get<std::string>()));
  r.diagnostics = j.value("diagnostics", "");
  r.differential_verdict = parse_verdict(j.at("differential_verdict").get<std::string>());
  r.threads_tested = j.value("threads_tested", std::vector<int>{});
  r.excluded_unparallelizable = j.value("excluded_unparallelizable", false);
}

// --- compile gate -------------------------------------------------------------

CompileResult compile_gate(std::string_view source, const fs::path& work_dir, const CompilerConfig& config,
                           std::string_view stem) {
  fs::create_directories(work_dir);
  const fs::path src = work_dir / (std::string(stem) + ".cc");
  const fs::path bin = work_dir / std::string(stem);
  text::write_file(src, source);
  std::error_code ec;
  fs::remove(bin, ec);

  ProcessSpec spec;
  // Relative names inside work_dir keep diagnostics free of host-specific paths.
  spec.argv = expand_command(config.command_template,
                             {{"src", src.filename().string()}, {"bin", bin.filename().string()}});
  spec.cwd = work_dir;
  spec.timeout = config.timeout;
  spec.env["LC_ALL"] = "C";  // stable, untranslated diagnostics for the classifier
  ProcessResult r = run_process(spec);
  if (r.timed_out) {
    throw TimeoutError("compile of " + src.string() + " exceeded " + std::to_string(config.timeout.count()) + " ms");
  }
  CompileResult out;
  out.compile_ok = r.exit_code == 0 && r.term_signal == 0;
  out.diagnostics = std::move(r.err);
  if (out.compile_ok) out.binary = fs::absolute(bin);
  return out;
}

// --- failure taxonomy -----------------------------------------------------------

namespace {

bool has(std::string_view haystack, std::string_view needle) { return haystack.find(needle) != std::string_view::npos; }

std::vector<std::string> error_lines(std::string_view diagnostics) {
  std::vector<std::string> out;
  for (auto& line : text::split_lines(diagnostics)) {
    if (has(line, "error:") || has(line, "Error:")) out.push_back(std::move(line));
  }
  return out;
}

bool any_error(const std::vector<std::string>& errors, const std::function<bool(const std::string&)>& pred) {
  return std::any_of(errors.begin(), errors.end(), pred);
}

// Identifiers appearing inside clause parentheses of any OpenMP pragma.
std::set<std::string> clause_identifiers(std::string_view source) {
  static const std::regex pragma_re(R"(^\s*#\s*pragma\s+omp\b(.*)$)");
  static const std::regex ident_re(R"([A-Za-z_]\w*)");
  std::set<std::string> out;
  for (const auto& line : text::split_lines(source)) {
    std::smatch m;
    if (!std::regex_match(line, m, pragma_re)) continue;
    const std::string rest = m[1].str();
    int depth = 0;
    std::string inside;
    for (char c : rest) {
      if (c == '(') {
        ++depth;
        inside += ' ';
      } else if (c == ')') {
        depth = std::max(0, depth - 1);
        inside += ' ';
      } else if (depth > 0) {
        inside += c;
      } else {
        inside += ' ';
      }
    }
    for (auto it = std::sregex_iterator(inside.begin(), inside.end(), ident_re); it != std::sregex_iterator(); ++it) {
      out.insert(it->str());
    }
  }
  return out;
}

struct Rule {
  FailureCategory category;
  std::function<bool(const std::vector<std::string>& errors, std::string_view diagnostics, std::string_view source)>
      matches;
};

const std::vector<Rule>& rules() {
  static const std::vector<Rule> kRules = {
      {FailureCategory::DefaultNoneViolation,
       [](const auto& errors, auto, auto) {
         return any_error(errors, [](const std::string& l) {
           return has(l, "not specified in enclosing") ||
                  has(l, "must have explicitly specified data sharing attributes");
         });
       }},
      {FailureCategory::InvalidReduction,
       [](const auto& errors, auto, auto) {
         return any_error(errors, [](const std::string& l) {
           return has(l, "user defined reduction not found") || has(l, "has invalid type for 'reduction'") ||
                  has(l, "invalid type for reduction") || has(l, "appears more than once in data clauses") ||
                  has(l, "appears more than once in reduction clauses") ||
                  (has(l, "reduction") && has(l, "non-scalar"));
         });
       }},
      {FailureCategory::AtomicMisuse,
       [](const auto& errors, auto, auto) {
         return any_error(errors, [](const std::string& l) {
           return has(l, "'#pragma omp atomic'") || has(l, "omp atomic") ||
                  has(l, "the statement for 'atomic' must be");
         });
       }},
      {FailureCategory::CollapseMisuse,
       [](const auto& errors, auto, auto) {
         return any_error(errors, [](const std::string& l) {
           return has(l, "for loops to collapse") || has(l, "collapsed loops") ||
                  has(l, "not perfectly nested") || has(l, "expected 2 for loops") ||
                  (has(l, "collapse") && has(l, "nested"));
         });
       }},
      {FailureCategory::IteratorLimitation,
       [](const auto& errors, auto, auto) {
         return any_error(errors, [](const std::string& l) {
           return (has(l, "no match for 'operator-'") && has(l, "iterator")) ||
                  has(l, "invalid type for iteration variable") ||
                  has(l, "requires a random access iterator");
         });
       }},
      {FailureCategory::DeprecatedConstruct,
       [](const auto&, std::string_view diagnostics, auto) {
         static const std::regex legacy(
             R"(\b(bind1st|bind2nd|binder1st|binder2nd|ptr_fun|mem_fun|mem_fun_ref|auto_ptr|random_shuffle|unary_function|binary_function)\b|backward/binders\.h)");
         if (!has(diagnostics, "error:")) return false;
         for (const auto& line : text::split_lines(diagnostics)) {
           const bool context_line = has(line, "error:") || has(line, "In instantiation") ||
                                     has(line, "required from");
           if (context_line && std::regex_search(line, legacy)) return true;
         }
         return false;
       }},
      {FailureCategory::UndeclaredInClause,
       [](const auto& errors, auto, std::string_view source) {
         static const std::regex undeclared(
             R"('([A-Za-z_]\w*)' (?:has not been declared|was not declared in this scope|undeclared)|use of undeclared identifier '([A-Za-z_]\w*)')");
         const auto clause_ids = clause_identifiers(source);
         return any_error(errors, [&](const std::string& l) {
           std::smatch m;
           if (!std::regex_search(l, m, undeclared)) return false;
           const std::string name = m[1].matched ? m[1].str() : m[2].str();
           return clause_ids.contains(name);
         });
       }},
      {FailureCategory::SyntaxError,
       [](const auto& errors, auto, auto) {
         return any_error(errors, [](const std::string& l) {
           return has(l, "error: expected") || has(l, "invalid controlling predicate") ||
                  has(l, "invalid increment expression") || has(l, "invalid initialization") ||
                  has(l, "expected iteration declaration") || has(l, "missing '('") ||
                  has(l, "unknown pragma") || has(l, "before end of line");
         });
       }},
  };
  return kRules;
}

}  // namespace

FailureCategory classify_failure(std::string_view diagnostics, std::string_view source) {
  const auto errors = error_lines(diagnostics);
  for (const auto& rule : rules()) {
    if (rule.matches(errors, diagnostics, source)) return rule.category;
  }
  return FailureCategory::OtherCompileError;
}

// --- differential testing ---------------------------------------------------------

namespace {

bool is_number_start(std::string_view s, std::size_t i) {
  const char c = s[i];
  if (std::isdigit(static_cast<unsigned char>(c))) return true;
  if (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]))) return true;
  if (c == '-' && i + 1 < s.size() && (i == 0 || !std::isalnum(static_cast<unsigned char>(s[i - 1]))))
    return is_number_start(s, i + 1);
  return false;
}

struct Lexeme {
  bool numeric = false;
  std::string text;
  double value = 0.0;
};

// Splits one whitespace-free token into numeric and non-numeric lexemes.
std::vector<Lexeme> lex(std::string_view token) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  while (i < token.size()) {
    if (is_number_start(token, i)) {
      const std::string rest(token.substr(i));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      const std::size_t len = static_cast<std::size_t>(end - rest.c_str());
      if (len > 0) {
        out.push_back({true, rest.substr(0, len), v});
        i += len;
        continue;
      }
    }
    if (out.empty() || out.back().numeric) out.push_back({});
    out.back().text += token[i];
    ++i;
  }
  return out;
}

std::vector<Lexeme> lex_line(std::string_view line) {
  std::vector<Lexeme> out;
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) {
    auto parts = lex(token);
    out.insert(out.end(), parts.begin(), parts.end());
    out.push_back({false, " ", 0.0});
  }
  return out;
}

bool numbers_close(double a, double b, double rel) {
  if (a == b) return true;
  if (std::isnan(a) && std::isnan(b)) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string normalize_output(std::string_view out) {
  std::vector<std::string> lines;
  for (auto& line : text::split_lines(out)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto trimmed = std::string(text::rtrim(line));
    if (trimmed.starts_with("ELAPSED_SECONDS=")) continue;
    lines.push_back(std::move(trimmed));
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return text::join(lines, "\n");
}

bool outputs_match(std::string_view expected, std::string_view actual, double relative_tolerance) {
  const auto a = text::split_lines(normalize_output(expected));
  const auto b = text::split_lines(normalize_output(actual));
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    const auto la = lex_line(a[i]);
    const auto lb = lex_line(b[i]);
    if (la.size() != lb.size()) return false;
    for (std::size_t k = 0; k < la.size(); ++k) {
      if (la[k].numeric != lb[k].numeric) return false;
      if (la[k].numeric) {
        if (!numbers_close(la[k].value, lb[k].value, relative_tolerance)) return false;
      } else if (la[k].text != lb[k].text) {
        return false;
      }
    }
  }
  return true;
}

DifferentialResult differential_validate(const fs::path& serial_binary, const fs::path& parallel_binary,
                                         const std::vector<int>& thread_counts, const RunInput& input,
                                         double relative_tolerance) {
  if (thread_counts.empty()) throw InvalidInput("differential_validate: no thread counts");
  for (int t : thread_counts) {
    if (t <= 0) throw InvalidInput("differential_validate: thread counts must be positive");
  }
  auto run = [&](const fs::path& bin, int threads) {
    ProcessSpec spec;
    spec.argv.push_back(fs::absolute(bin).string());
    spec.argv.insert(spec.argv.end(), input.args.begin(), input.args.end());
    spec.env[std::string(kThreadEnvVar)] = std::to_string(threads);
    spec.timeout = input.timeout;
    return run_process(spec);
  };
  auto describe_failure = [](const ProcessResult& r) {
    if (r.timed_out) return std::string("timed out");
    if (r.term_signal) return "killed by signal " + std::to_string(r.term_signal);
    return "exit status " + std::to_string(r.exit_code);
  };

  DifferentialResult result;
  const ProcessResult serial = run(serial_binary, 1);
  if (!serial.ok()) {
    result.verdict = DifferentialVerdict::RuntimeError;
    result.detail = "serial run: " + describe_failure(serial);
    return result;
  }
  result.verdict = DifferentialVerdict::Pass;
  for (int t : thread_counts) {
    const ProcessResult par = run(parallel_binary, t);
    result.threads_tested.push_back(t);
    if (!par.ok()) {
      result.verdict = DifferentialVerdict::RuntimeError;
      result.detail = "parallel run at " + std::to_string(t) + " threads: " + describe_failure(par);
      return result;
    }
    if (!outputs_match(serial.out, par.out, relative_tolerance)) {
      result.verdict = DifferentialVerdict::Mismatch;
      result.detail = "output differs from serial at " + std::to_string(t) + " threads";
      return result;
    }
  }
  return result;
}

}  // namespace ragomp
