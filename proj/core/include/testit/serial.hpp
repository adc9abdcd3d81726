#pragma once

#include "testit/process.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace testit {

inline constexpr std::string_view kLoopbackScheme = "loopback://";

/// Line-oriented receive side of a serial link (8N1). Either a real
/// device, configured raw through termios, or a loopback transport: a
/// pipe (anonymous, or a named FIFO that another process writes to) that
/// stands in for the board.
class SerialSession {
 public:
  /// Opens a tty (or any readable character/FIFO node) at `baudrate`.
  /// Throws Error(kSerialOpen).
  static SerialSession open_device(const std::string& path, long baudrate);

  /// Loopback over a named FIFO, created if absent. Held open read-write so
  /// that writers coming and going never produce EOF.
  static SerialSession open_loopback(const std::filesystem::path& fifo, long baudrate);

  /// Loopback over an anonymous in-process pipe; feed it with inject().
  static SerialSession open_loopback(long baudrate);

  SerialSession(SerialSession&& other) noexcept;
  SerialSession& operator=(SerialSession&& other) noexcept;
  SerialSession(const SerialSession&) = delete;
  SerialSession& operator=(const SerialSession&) = delete;
  ~SerialSession();

  LineReader::Status read_line(std::string& line, Clock::time_point deadline) {
    return reader_.read_line(line, deadline);
  }

  /// Writes into a loopback transport as if the board had sent it.
  void inject(std::string_view data);

  const std::string& device() const { return device_; }
  long baudrate() const { return baudrate_; }
  bool is_loopback() const { return loopback_; }

 private:
  SerialSession() = default;
  void release();

  std::string device_;
  long baudrate_ = 0;
  bool loopback_ = false;
  int read_fd_ = -1;
  int write_fd_ = -1;  // loopback only
  LineReader reader_;
};

/// Host serial devices (ttyUSB*, ttyACM*, cu.usb*) under `dev_dir`, sorted
/// by name with numeric suffixes compared as numbers.
std::vector<std::filesystem::path> enumerate_serial_devices(
    const std::filesystem::path& dev_dir = "/dev");

/// portPath when given (a `loopback://<fifo>` path selects the loopback
/// transport), else the usbPort-th entry of enumerate_serial_devices().
/// Throws Error(kSerialOpen).
SerialSession open_serial(const std::optional<std::string>& portPath,
                          const std::optional<std::int64_t>& usbPort, long baudrate,
                          const std::filesystem::path& base_dir = {},
                          const std::filesystem::path& dev_dir = "/dev");

}  // namespace testit
