#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ragomp {

struct ProcessSpec {
  std::vector<std::string> argv;
  // Applied on top of the parent environment.
  std::map<std::string, std::string> env;
  std::vector<std::string> unset_env;
  std::filesystem::path cwd;
  std::chrono::milliseconds timeout{60'000};
};

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal or on timeout
  int term_signal = 0;
  bool timed_out = false;
  std::string out;
  std::string err;
  std::chrono::nanoseconds wall{0};

  bool ok() const { return !timed_out && term_signal == 0 && exit_code == 0; }
};

// Runs argv[0] (PATH lookup) with stdin bound to /dev/null.
// Throws EnvironmentError when the program cannot be executed at all.
ProcessResult run_process(const ProcessSpec& spec);

// Whitespace-split command template with {name} placeholders substituted per token.
std::vector<std::string> expand_command(const std::string& command_template,
                                        const std::map<std::string, std::string>& vars);

}  // namespace ragomp
