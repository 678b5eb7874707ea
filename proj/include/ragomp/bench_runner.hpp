#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ragomp {

enum class RecordSource { Measured, Imported };

struct BenchRecord {
  std::string case_id;
  int threads = 1;
  double wall_seconds = 0.0;
  int repetitions = 1;
  RecordSource source = RecordSource::Measured;
  // Set when the host had fewer logical cores than `threads`.
  bool oversubscribed = false;
};

struct SpeedupRow {
  std::string case_id;
  int threads = 1;
  double speedup = 1.0;
};

inline const std::vector<int> kDefaultThreadSweep{1, 2, 4, 8};
inline constexpr int kDefaultRepetitions = 3;
inline constexpr std::string_view kElapsedPrefix = "ELAPSED_SECONDS=";

// Exclusive advisory lock (flock) held for the lifetime of the object.
class BenchLock {
 public:
  explicit BenchLock(const std::filesystem::path& path);
  ~BenchLock();
  BenchLock(const BenchLock&) = delete;
  BenchLock& operator=(const BenchLock&) = delete;

 private:
  int fd_ = -1;
};

std::filesystem::path default_bench_lock_path();

struct SweepOptions {
  std::vector<std::string> args;
  std::chrono::milliseconds timeout{600'000};
  unsigned host_cores = 0;  // 0: query the host
  std::filesystem::path lock_path = default_bench_lock_path();  // empty: caller already serializes
};

// Runs `binary` `repetitions` times per thread count and keeps the minimum of the
// self-reported ELAPSED_SECONDS values. Throws LockHeld if another runner is active.
std::vector<BenchRecord> run_sweep(const std::string& case_id, const std::filesystem::path& binary,
                                   const std::vector<int>& thread_counts, int repetitions,
                                   const SweepOptions& options = {});

// Value of the ELAPSED_SECONDS= line, which must be the final non-empty line.
double parse_elapsed_seconds(std::string_view program_output);

// speedup(t) = wall(1) / wall(t), per case, ordered by first appearance then threads.
std::vector<SpeedupRow> compute_speedups(const std::vector<BenchRecord>& records);

// CSV rows case_id,threads,wall_seconds (optional header, extra columns ignored).
std::vector<BenchRecord> import_records(std::string_view csv);

std::string records_csv(const std::vector<BenchRecord>& records);
std::string speedups_csv(const std::vector<SpeedupRow>& rows);
// Runtime table: one row per case, one column per thread count, seconds to 3 decimals.
std::string runtime_table(const std::vector<BenchRecord>& records);
// Whitespace-separated "threads speedup" blocks, one per case, separated by blank lines.
std::string speedup_series(const std::vector<SpeedupRow>& rows);

}  // namespace ragomp
