#include "testit/serial.hpp"

#include "testit/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <optional>
#include <sys/stat.h>
#include <termios.h>
#include <unistd.h>

namespace testit {
namespace {

[[noreturn]] void open_error(const std::string& device, const std::string& what) {
  throw Error(ErrorCode::kSerialOpen, what, device);
}

std::optional<speed_t> speed_constant(long baud) {
  switch (baud) {
    case 1200: return B1200;
    case 2400: return B2400;
    case 4800: return B4800;
    case 9600: return B9600;
    case 19200: return B19200;
    case 38400: return B38400;
    case 57600: return B57600;
    case 115200: return B115200;
    case 230400: return B230400;
#ifdef B460800
    case 460800: return B460800;
#endif
#ifdef B921600
    case 921600: return B921600;
#endif
    default: return std::nullopt;
  }
}

void configure_8n1(int fd, long baud, const std::string& device) {
  auto speed = speed_constant(baud);
  if (!speed) open_error(device, "unsupported baudrate " + std::to_string(baud));
  termios tio{};
  if (::tcgetattr(fd, &tio) != 0) open_error(device, std::string("tcgetattr: ") + std::strerror(errno));
  ::cfmakeraw(&tio);
  tio.c_cflag &= ~(PARENB | CSTOPB | CSIZE);
  tio.c_cflag |= CS8 | CLOCAL | CREAD;
  ::cfsetispeed(&tio, *speed);
  ::cfsetospeed(&tio, *speed);
  if (::tcsetattr(fd, TCSANOW, &tio) != 0) {
    open_error(device, std::string("tcsetattr: ") + std::strerror(errno));
  }
  ::tcflush(fd, TCIFLUSH);
}

bool is_serial_name(const std::string& name) {
  for (std::string_view prefix : {"ttyUSB", "ttyACM", "cu.usb", "tty.usb"}) {
    if (name.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

// Splits "ttyUSB12" into ("ttyUSB", 12) for natural ordering.
std::pair<std::string, long> natural_key(const std::string& name) {
  auto digits = name.find_last_not_of("0123456789");
  std::size_t cut = digits == std::string::npos ? 0 : digits + 1;
  long n = cut < name.size() ? std::stol(name.substr(cut)) : -1;
  return {name.substr(0, cut), n};
}

}  // namespace

SerialSession SerialSession::open_device(const std::string& path, long baudrate) {
  int fd = ::open(path.c_str(), O_RDWR | O_NOCTTY | O_NONBLOCK | O_CLOEXEC);
  if (fd < 0) open_error(path, std::strerror(errno));
  SerialSession s;
  s.device_ = path;
  s.baudrate_ = baudrate;
  s.read_fd_ = fd;
  s.reader_ = LineReader(fd);
  if (::isatty(fd)) configure_8n1(fd, baudrate, path);
  return s;
}

SerialSession SerialSession::open_loopback(const std::filesystem::path& fifo, long baudrate) {
  struct stat st {};
  if (::stat(fifo.c_str(), &st) == 0) {
    if (!S_ISFIFO(st.st_mode)) open_error(fifo.string(), "exists and is not a FIFO");
  } else if (::mkfifo(fifo.c_str(), 0600) != 0) {
    open_error(fifo.string(), std::string("mkfifo: ") + std::strerror(errno));
  }
  int fd = ::open(fifo.c_str(), O_RDWR | O_NONBLOCK | O_CLOEXEC);
  if (fd < 0) open_error(fifo.string(), std::strerror(errno));
  SerialSession s;
  s.device_ = std::string(kLoopbackScheme) + fifo.string();
  s.baudrate_ = baudrate;
  s.loopback_ = true;
  s.read_fd_ = fd;
  s.reader_ = LineReader(fd);
  return s;
}

SerialSession SerialSession::open_loopback(long baudrate) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC | O_NONBLOCK) != 0) open_error("loopback", std::strerror(errno));
  SerialSession s;
  s.device_ = "loopback";
  s.baudrate_ = baudrate;
  s.loopback_ = true;
  s.read_fd_ = fds[0];
  s.write_fd_ = fds[1];
  s.reader_ = LineReader(fds[0]);
  return s;
}

SerialSession::SerialSession(SerialSession&& other) noexcept { *this = std::move(other); }

SerialSession& SerialSession::operator=(SerialSession&& other) noexcept {
  if (this != &other) {
    release();
    device_ = std::move(other.device_);
    baudrate_ = other.baudrate_;
    loopback_ = other.loopback_;
    read_fd_ = other.read_fd_;
    write_fd_ = other.write_fd_;
    reader_ = std::move(other.reader_);
    other.read_fd_ = other.write_fd_ = -1;
    other.reader_ = LineReader();
  }
  return *this;
}

SerialSession::~SerialSession() { release(); }

void SerialSession::release() {
  if (read_fd_ >= 0) ::close(read_fd_);
  if (write_fd_ >= 0) ::close(write_fd_);
  read_fd_ = write_fd_ = -1;
}

void SerialSession::inject(std::string_view data) {
  if (!loopback_) throw Error(ErrorCode::kSerialOpen, "inject() needs a loopback transport", device_);
  int fd = write_fd_ >= 0 ? write_fd_ : read_fd_;
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw Error(ErrorCode::kIo, std::string("loopback write: ") + std::strerror(errno), device_);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::vector<std::filesystem::path> enumerate_serial_devices(const std::filesystem::path& dev_dir) {
  std::vector<std::filesystem::path> found;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dev_dir, ec)) {
    if (is_serial_name(entry.path().filename().string())) found.push_back(entry.path());
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return natural_key(a.filename().string()) < natural_key(b.filename().string());
  });
  return found;
}

SerialSession open_serial(const std::optional<std::string>& portPath,
                          const std::optional<std::int64_t>& usbPort, long baudrate,
                          const std::filesystem::path& base_dir,
                          const std::filesystem::path& dev_dir) {
  if (portPath) {
    if (portPath->rfind(kLoopbackScheme, 0) == 0) {
      std::filesystem::path fifo = portPath->substr(kLoopbackScheme.size());
      if (fifo.empty()) return SerialSession::open_loopback(baudrate);
      if (fifo.is_relative() && !base_dir.empty()) fifo = base_dir / fifo;
      return SerialSession::open_loopback(fifo, baudrate);
    }
    return SerialSession::open_device(*portPath, baudrate);
  }
  if (!usbPort) open_error("target", "neither portPath nor usbPort is set");
  auto devices = enumerate_serial_devices(dev_dir);
  if (*usbPort < 0 || static_cast<std::size_t>(*usbPort) >= devices.size()) {
    open_error("usbPort " + std::to_string(*usbPort),
               "only " + std::to_string(devices.size()) + " serial device(s) found under " +
                   dev_dir.string());
  }
  return SerialSession::open_device(devices[static_cast<std::size_t>(*usbPort)].string(), baudrate);
}

}  // namespace testit
