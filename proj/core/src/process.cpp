#include "testit/process.hpp"

#include "testit/error.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <mutex>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace testit {
namespace {

void ignore_sigpipe_once() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

}  // namespace

LineReader::Status LineReader::read_line(std::string& line, Clock::time_point deadline) {
  while (true) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      line.assign(buffer_, 0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return Status::kLine;
    }
    if (eof_ || fd_ < 0) {
      if (buffer_.empty()) return Status::kEof;
      line = std::move(buffer_);
      buffer_.clear();
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return Status::kLine;
    }

    auto remaining = std::chrono::ceil<std::chrono::milliseconds>(deadline - Clock::now());
    if (remaining.count() <= 0) return Status::kTimeout;
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining.count(), 1000)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      eof_ = true;
      continue;
    }
    if (rc == 0) continue;

    char chunk[4096];
    ssize_t n = ::read(fd_, chunk, sizeof chunk);
    if (n > 0) {
      buffer_.append(chunk, static_cast<std::size_t>(n));
    } else if (n == 0) {
      eof_ = true;
    } else if (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
      eof_ = true;
    }
  }
}

std::string LineReader::read_all() {
  std::string out = std::move(buffer_);
  buffer_.clear();
  if (fd_ < 0) return out;
  while (!eof_) {
    pollfd pfd{fd_, POLLIN, 0};
    if (::poll(&pfd, 1, -1) < 0 && errno != EINTR) break;
    char chunk[4096];
    ssize_t n = ::read(fd_, chunk, sizeof chunk);
    if (n > 0) {
      out.append(chunk, static_cast<std::size_t>(n));
    } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
      eof_ = true;
    }
  }
  return out;
}

Subprocess Subprocess::spawn(const std::vector<std::string>& argv, const Options& options) {
  ignore_sigpipe_once();
  if (argv.empty()) throw Error(ErrorCode::kSpawn, "empty command");

  int in_pipe[2] = {-1, -1};
  int out_pipe[2] = {-1, -1};
  int err_pipe[2] = {-1, -1};  // reports exec failure from the child
  auto cleanup = [&] {
    for (int* p : {in_pipe, out_pipe, err_pipe}) {
      close_fd(p[0]);
      close_fd(p[1]);
    }
  };
  if ((options.pipe_stdin && ::pipe2(in_pipe, O_CLOEXEC) != 0) ||
      (options.pipe_stdout && ::pipe2(out_pipe, O_CLOEXEC) != 0) ||
      ::pipe2(err_pipe, O_CLOEXEC) != 0) {
    int e = errno;
    cleanup();
    throw Error(ErrorCode::kSpawn, std::string("pipe: ") + std::strerror(e), argv[0]);
  }

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  const std::string cwd = options.cwd.string();

  pid_t pid = ::fork();
  if (pid < 0) {
    int e = errno;
    cleanup();
    throw Error(ErrorCode::kSpawn, std::string("fork: ") + std::strerror(e), argv[0]);
  }
  if (pid == 0) {
    if (options.pipe_stdin) ::dup2(in_pipe[0], STDIN_FILENO);
    if (options.pipe_stdout) {
      ::dup2(out_pipe[1], STDOUT_FILENO);
      if (options.merge_stderr) ::dup2(out_pipe[1], STDERR_FILENO);
    } else if (options.merge_stderr) {
      ::dup2(STDOUT_FILENO, STDERR_FILENO);
    }
    std::signal(SIGPIPE, SIG_DFL);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
      int e = errno;
      [[maybe_unused]] auto w = ::write(err_pipe[1], &e, sizeof e);
      ::_exit(127);
    }
    ::execvp(cargv[0], cargv.data());
    int e = errno;
    [[maybe_unused]] auto w = ::write(err_pipe[1], &e, sizeof e);
    ::_exit(127);
  }

  close_fd(err_pipe[1]);
  int child_errno = 0;
  ssize_t n;
  do {
    n = ::read(err_pipe[0], &child_errno, sizeof child_errno);
  } while (n < 0 && errno == EINTR);
  close_fd(err_pipe[0]);
  if (n == sizeof child_errno) {
    int status = 0;
    ::waitpid(pid, &status, 0);
    cleanup();
    throw Error(ErrorCode::kSpawn, std::strerror(child_errno), argv[0]);
  }

  Subprocess proc;
  proc.pid_ = pid;
  if (options.pipe_stdin) {
    close_fd(in_pipe[0]);
    proc.stdin_fd_ = in_pipe[1];
  }
  if (options.pipe_stdout) {
    close_fd(out_pipe[1]);
    ::fcntl(out_pipe[0], F_SETFL, ::fcntl(out_pipe[0], F_GETFL) | O_NONBLOCK);
    proc.stdout_ = LineReader(out_pipe[0]);
  }
  return proc;
}

Subprocess::Subprocess(Subprocess&& other) noexcept { *this = std::move(other); }

Subprocess& Subprocess::operator=(Subprocess&& other) noexcept {
  if (this != &other) {
    release();
    pid_ = other.pid_;
    stdin_fd_ = other.stdin_fd_;
    stdout_ = std::move(other.stdout_);
    status_ = other.status_;
    other.pid_ = -1;
    other.stdin_fd_ = -1;
    other.stdout_ = LineReader();
    other.status_.reset();
  }
  return *this;
}

Subprocess::~Subprocess() { release(); }

void Subprocess::release() {
  close_stdin();
  int out_fd = stdout_.fd();
  close_fd(out_fd);
  stdout_ = LineReader();
  if (pid_ > 0 && !status_) {
    if (!poll()) {
      ::kill(pid_, SIGKILL);
      wait();
    }
  }
  pid_ = -1;
}

bool Subprocess::write_all(std::string_view data) {
  if (stdin_fd_ < 0) return false;
  while (!data.empty()) {
    ssize_t n = ::write(stdin_fd_, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

LineReader::Status Subprocess::read_line(std::string& line, Clock::time_point deadline) {
  return stdout_.read_line(line, deadline);
}

std::string Subprocess::read_all() { return stdout_.read_all(); }

void Subprocess::close_stdin() { close_fd(stdin_fd_); }

int Subprocess::wait() {
  if (status_) return *status_;
  if (pid_ <= 0) return -1;
  int status = 0;
  while (::waitpid(pid_, &status, 0) < 0) {
    if (errno != EINTR) return -1;
  }
  status_ = decode_status(status);
  return *status_;
}

std::optional<int> Subprocess::poll() {
  if (status_) return status_;
  if (pid_ <= 0) return std::nullopt;
  int status = 0;
  pid_t r = ::waitpid(pid_, &status, WNOHANG);
  if (r == pid_) status_ = decode_status(status);
  return status_;
}

void Subprocess::kill() {
  if (pid_ > 0 && !poll()) ::kill(pid_, SIGKILL);
}

CapturedRun run_captured(const std::vector<std::string>& argv, const std::filesystem::path& cwd) {
  Subprocess::Options opts;
  opts.cwd = cwd;
  opts.pipe_stdout = true;
  opts.merge_stderr = true;
  Subprocess proc = Subprocess::spawn(argv, opts);
  CapturedRun run;
  run.output = proc.read_all();
  run.exit_code = proc.wait();
  return run;
}

}  // namespace testit
