#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ragomp {

enum class FailureCategory {
  UndeclaredInClause,
  InvalidReduction,
  AtomicMisuse,
  DefaultNoneViolation,
  SyntaxError,
  CollapseMisuse,
  IteratorLimitation,
  DeprecatedConstruct,
  OtherCompileError,
};

std::string_view to_string(FailureCategory c);
FailureCategory parse_failure_category(std::string_view s);

enum class DifferentialVerdict { Pass, Mismatch, RuntimeError, Skipped };

std::string_view to_string(DifferentialVerdict v);
DifferentialVerdict parse_verdict(std::string_view s);

struct ValidationReport {
  std::string case_id;
  bool compile_ok = false;
  std::optional<FailureCategory> failure_category;
  std::string diagnostics;
  DifferentialVerdict differential_verdict = DifferentialVerdict::Skipped;
  std::vector<int> threads_tested;
  bool excluded_unparallelizable = false;

  bool operator==(const ValidationReport&) const = default;
};

// Throws IntegrityError when the report's own invariants do not hold.
void check_report(const ValidationReport& r);

void to_json(nlohmann::json& j, const ValidationReport& r);
void from_json(const nlohmann::json& j, ValidationReport& r);

// --- compile gate -------------------------------------------------------------

inline constexpr std::string_view kOpenMpCompileTemplate = "g++ -fopenmp -std=c++17 -O2 {src} -o {bin}";
inline constexpr std::string_view kSerialCompileTemplate = "g++ -std=c++17 -O2 {src} -o {bin}";

struct CompilerConfig {
  std::string command_template = std::string(kOpenMpCompileTemplate);
  std::chrono::milliseconds timeout{60'000};
};

struct CompileResult {
  bool compile_ok = false;
  std::string diagnostics;  // compiler stderr, verbatim
  std::filesystem::path binary;
};

// Writes <stem>.cc into work_dir and compiles it to <stem>. compile_ok is exactly
// "compiler exited with status 0". A missing compiler raises EnvironmentError and
// a compile exceeding the timeout raises TimeoutError.
CompileResult compile_gate(std::string_view source, const std::filesystem::path& work_dir,
                           const CompilerConfig& config = {}, std::string_view stem = "candidate");

// --- failure taxonomy -----------------------------------------------------------

// Ordered rules over compiler diagnostics and the offending source; the first
// matching rule wins and OtherCompileError catches everything else.
FailureCategory classify_failure(std::string_view diagnostics, std::string_view source);

// --- differential testing ---------------------------------------------------------

inline constexpr double kDefaultRelativeTolerance = 1e-6;
inline constexpr std::string_view kThreadEnvVar = "OMP_NUM_THREADS";

struct RunInput {
  std::vector<std::string> args;
  std::chrono::milliseconds timeout{120'000};
};

struct DifferentialResult {
  DifferentialVerdict verdict = DifferentialVerdict::Skipped;
  std::vector<int> threads_tested;
  std::string detail;
};

// Runs the serial binary once and the parallel binary once per thread count,
// comparing normalized outputs. Any nonzero exit or timeout is RuntimeError.
DifferentialResult differential_validate(const std::filesystem::path& serial_binary,
                                         const std::filesystem::path& parallel_binary,
                                         const std::vector<int>& thread_counts, const RunInput& input,
                                         double relative_tolerance = kDefaultRelativeTolerance);

// CRLF -> LF, trailing whitespace per line and trailing blank lines removed,
// ELAPSED_SECONDS= timing lines dropped.
std::string normalize_output(std::string_view out);

// Line-by-line comparison of normalized outputs. Numeric lexemes compare within
// relative tolerance; everything else must match exactly.
bool outputs_match(std::string_view expected, std::string_view actual,
                   double relative_tolerance = kDefaultRelativeTolerance);

}  // namespace ragomp
