#include "ragomp/bench_runner.hpp"

#include "ragomp/errors.hpp"
#include "ragomp/subprocess.hpp"
#include "ragomp/text_util.hpp"
#include "ragomp/validation_lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fcntl.h>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sys/file.h>
#include <thread>
#include <unistd.h>

namespace ragomp {

namespace fs = std::filesystem;

BenchLock::BenchLock(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw EnvironmentError("cannot open bench lock " + path.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw LockHeld("another benchmark runner holds " + path.string());
  }
}

BenchLock::~BenchLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

fs::path default_bench_lock_path() { return fs::temp_directory_path() / "ragomp-bench.lock"; }

double parse_elapsed_seconds(std::string_view program_output) {
  auto lines = text::split_lines(program_output);
  while (!lines.empty() && text::is_blank(lines.back())) lines.pop_back();
  if (lines.empty()) throw ParseError("benchmark produced no output", 0);
  const auto last = text::trim(lines.back());
  if (!last.starts_with(kElapsedPrefix)) {
    throw ParseError("final output line is not " + std::string(kElapsedPrefix) + "<float>", lines.size());
  }
  const auto number = last.substr(kElapsedPrefix.size());
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), v);
  if (ec != std::errc() || ptr != number.data() + number.size() || !std::isfinite(v)) {
    throw ParseError("malformed elapsed time '" + std::string(number) + "'", lines.size());
  }
  return v;
}

std::vector<BenchRecord> run_sweep(const std::string& case_id, const fs::path& binary,
                                   const std::vector<int>& thread_counts, int repetitions,
                                   const SweepOptions& options) {
  if (thread_counts.empty()) throw InvalidInput("run_sweep: empty thread sweep");
  if (repetitions <= 0) throw InvalidInput("run_sweep: repetitions must be positive");
  for (int t : thread_counts) {
    if (t <= 0) throw InvalidInput("run_sweep: thread counts must be positive");
  }
  std::optional<BenchLock> lock;
  if (!options.lock_path.empty()) lock.emplace(options.lock_path);

  const unsigned cores = options.host_cores ? options.host_cores : std::max(1U, std::thread::hardware_concurrency());
  std::vector<BenchRecord> records;
  for (int t : thread_counts) {
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < repetitions; ++rep) {
      ProcessSpec spec;
      spec.argv.push_back(fs::absolute(binary).string());
      spec.argv.insert(spec.argv.end(), options.args.begin(), options.args.end());
      spec.env[std::string(kThreadEnvVar)] = std::to_string(t);
      spec.timeout = options.timeout;
      const ProcessResult r = run_process(spec);
      if (!r.ok()) {
        throw BenchError(case_id + ": benchmark run at " + std::to_string(t) + " threads failed" +
                         (r.timed_out ? " (timeout)" : " (exit " + std::to_string(r.exit_code) + ")"));
      }
      const double secs = parse_elapsed_seconds(r.out);
      if (secs <= 0.0) throw BenchError(case_id + ": non-positive elapsed time reported");
      best = std::min(best, secs);
    }
    records.push_back({case_id, t, best, repetitions, RecordSource::Measured, static_cast<unsigned>(t) > cores});
  }
  return records;
}

std::vector<SpeedupRow> compute_speedups(const std::vector<BenchRecord>& records) {
  std::vector<std::string> case_order;
  std::map<std::string, std::map<int, double>> by_case;
  for (const auto& r : records) {
    if (!by_case.contains(r.case_id)) case_order.push_back(r.case_id);
    auto& times = by_case[r.case_id];
    if (!times.emplace(r.threads, r.wall_seconds).second) {
      throw InvalidInput("duplicate record for " + r.case_id + " at " + std::to_string(r.threads) + " threads");
    }
  }
  std::vector<SpeedupRow> rows;
  for (const auto& id : case_order) {
    const auto& times = by_case[id];
    auto base = times.find(1);
    if (base == times.end()) throw InvalidInput("no 1-thread baseline for " + id);
    for (const auto& [threads, secs] : times) rows.push_back({id, threads, base->second / secs});
  }
  return rows;
}

std::vector<BenchRecord> import_records(std::string_view csv) {
  std::vector<BenchRecord> out;
  std::size_t line_no = 0;
  for (const auto& raw : text::split_lines(csv)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    if (out.empty() && text::starts_with_ci(line, "case_id")) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (;;) {
      auto comma = line.find(',', pos);
      fields.emplace_back(text::trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (fields.size() < 3) throw ParseError("expected case_id,threads,wall_seconds", line_no);
    BenchRecord r;
    r.case_id = fields[0];
    r.source = RecordSource::Imported;
    if (r.case_id.empty()) throw ParseError("empty case_id", line_no);
    {
      const auto& f = fields[1];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), r.threads);
      if (ec != std::errc() || p != f.data() + f.size() || r.threads <= 0) {
        throw ParseError("threads must be a positive integer, got '" + f + "'", line_no);
      }
    }
    {
      const auto& f = fields[2];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), r.wall_seconds);
      if (ec != std::errc() || p != f.data() + f.size() || !std::isfinite(r.wall_seconds) || r.wall_seconds <= 0.0) {
        throw ParseError("wall_seconds must be a positive number, got '" + f + "'", line_no);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {
std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}
}  // namespace

std::string records_csv(const std::vector<BenchRecord>& records) {
  std::string out = "case_id,threads,wall_seconds,repetitions,source,oversubscribed\n";
  for (const auto& r : records) {
    out += r.case_id + "," + std::to_string(r.threads) + "," + fmt("%.6f", r.wall_seconds) + "," +
           std::to_string(r.repetitions) + "," + (r.source == RecordSource::Measured ? "Measured" : "Imported") + "," +
           (r.oversubscribed ? "true" : "false") + "\n";
  }
  return out;
}

std::string speedups_csv(const std::vector<SpeedupRow>& rows) {
  std::string out = "case_id,threads,speedup\n";
  for (const auto& r : rows) out += r.case_id + "," + std::to_string(r.threads) + "," + fmt("%.3f", r.speedup) + "\n";
  return out;
}

std::string runtime_table(const std::vector<BenchRecord>& records) {
  std::vector<std::string> case_order;
  std::set<int> thread_set;
  std::map<std::string, std::map<int, double>> cell;
  for (const auto& r : records) {
    if (!cell.contains(r.case_id)) case_order.push_back(r.case_id);
    cell[r.case_id][r.threads] = r.wall_seconds;
    thread_set.insert(r.threads);
  }
  std::size_t name_width = 4;
  for (const auto& id : case_order) name_width = std::max(name_width, id.size());

  std::vector<std::string> headers;
  for (int t : thread_set) headers.push_back(std::to_string(t) + (t == 1 ? " Thread (s)" : " Threads (s)"));
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string out = "| " + pad("Case", name_width) + " |";
  for (const auto& h : headers) out += " " + h + " |";
  out += "\n|" + std::string(name_width + 2, '-') + "|";
  for (const auto& h : headers) out += std::string(h.size() + 2, '-') + "|";
  out += "\n";
  for (const auto& id : case_order) {
    out += "| " + pad(id, name_width) + " |";
    std::size_t col = 0;
    for (int t : thread_set) {
      auto it = cell[id].find(t);
      std::string v = it == cell[id].end() ? "-" : fmt("%.3f", it->second);
      const std::size_t w = headers[col++].size();
      out += " " + std::string(w > v.size() ? w - v.size() : 0, ' ') + v + " |";
    }
    out += "\n";
  }
  return out;
}

std::string speedup_series(const std::vector<SpeedupRow>& rows) {
  std::string out = "# threads speedup\n";
  std::string current;
  for (const auto& r : rows) {
    if (r.case_id != current) {
      if (!current.empty()) out += "\n\n";
      out += "# " + r.case_id + "\n";
      current = r.case_id;
    }
    out += std::to_string(r.threads) + " " + fmt("%.6f", r.speedup) + "\n";
  }
  return out;
}

}  // namespace ragomp
