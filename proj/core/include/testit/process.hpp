#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

namespace testit {

using Clock = std::chrono::steady_clock;

/// Buffered newline reader over a non-blocking file descriptor.
class LineReader {
 public:
  enum class Status { kLine, kEof, kTimeout };

  explicit LineReader(int fd = -1) : fd_(fd) {}

  /// Reads one line (without the terminator, trailing '\r' stripped).
  Status read_line(std::string& line, Clock::time_point deadline);

  /// Everything until EOF.
  std::string read_all();

  int fd() const { return fd_; }

 private:
  int fd_;
  std::string buffer_;
  bool eof_ = false;
};

/// A child process with optional pipes to its stdin and stdout.
class Subprocess {
 public:
  struct Options {
    std::filesystem::path cwd;
    bool pipe_stdin = false;
    bool pipe_stdout = false;
    bool merge_stderr = false;  // stderr goes wherever stdout goes
  };

  /// Throws Error(kSpawn) if the program cannot be executed.
  static Subprocess spawn(const std::vector<std::string>& argv, const Options& options);

  Subprocess(Subprocess&& other) noexcept;
  Subprocess& operator=(Subprocess&& other) noexcept;
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;
  ~Subprocess();

  /// False if the child closed its end (it exited or crashed).
  bool write_all(std::string_view data);
  LineReader::Status read_line(std::string& line, Clock::time_point deadline);
  std::string read_all();
  void close_stdin();

  /// Blocks until exit. Signals map to 128 + signo.
  int wait();
  /// Non-blocking; exit status if the child has already exited.
  std::optional<int> poll();
  void kill();

  pid_t pid() const { return pid_; }

 private:
  Subprocess() = default;
  void release();

  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  LineReader stdout_;
  std::optional<int> status_;
};

struct CapturedRun {
  int exit_code = 0;
  std::string output;  // stdout and stderr interleaved
};

/// Runs `argv` in `cwd` to completion, capturing combined output.
CapturedRun run_captured(const std::vector<std::string>& argv, const std::filesystem::path& cwd);

}  // namespace testit
