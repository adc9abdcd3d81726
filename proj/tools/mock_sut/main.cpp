// Mock system-under-test.
//
//   mock_sut run --id N (--out FILE | --serial DEVICE)
//       Reads the sidecar named by MOCK_SUT_SIDECAR, self-checks it under
//       the fault in MOCK_SUT_FAULT, and emits `<id>:<cycles>:<outcome>`.
//   mock_sut scaffold DIR [--serial FIFO] [--output-file PATH] [--app NAME]...
//       Writes a fixture project around this binary.

#include "mock_sut.hpp"

#include "testit/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fcntl.h>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

namespace {

using namespace testit;

int run(std::uint32_t id, const std::string& out_path, const std::string& serial) {
  const char* sidecar_path = std::getenv("MOCK_SUT_SIDECAR");
  if (sidecar_path == nullptr) {
    std::cerr << "mock_sut: MOCK_SUT_SIDECAR is not set\n";
    return 3;
  }
  std::ifstream in(sidecar_path, std::ios::binary);
  if (!in) {
    std::cerr << "mock_sut: cannot read " << sidecar_path << '\n';
    return 3;
  }
  std::ostringstream text;
  text << in.rdbuf();

  std::optional<mock_sut::MockResult> result;
  try {
    result = mock_sut::mock_run(parse_sidecar(text.str()), id, mock_sut::fault_from_env());
  } catch (const std::exception& e) {
    std::cerr << "mock_sut: " << e.what() << '\n';
    return 3;
  }
  const std::string line = result ? mock_sut::format_line(*result) : std::string();

  if (!serial.empty()) {
    // Device or FIFO held open by the harness.
    int fd = ::open(serial.c_str(), O_WRONLY | O_NOCTTY);
    if (fd < 0) {
      std::cerr << "mock_sut: cannot open " << serial << '\n';
      return 4;
    }
    std::string_view rest = line;
    while (!rest.empty()) {
      ssize_t n = ::write(fd, rest.data(), rest.size());
      if (n <= 0) break;
      rest.remove_prefix(static_cast<std::size_t>(n));
    }
    ::close(fd);
    return rest.empty() ? 0 : 4;
  }

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  out << line;
  return out ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock system-under-test for testit campaigns", "mock_sut"};
  app.require_subcommand(1, 1);

  std::uint32_t id = 0;
  std::string out_path, serial;
  auto* run_cmd = app.add_subcommand("run", "Self-check the current sidecar and report");
  run_cmd->add_option("--id", id, "Test ID printed in the result line")->required();
  auto* out_opt = run_cmd->add_option("--out", out_path, "Result file (simulation dump)");
  run_cmd->add_option("--serial", serial, "Serial device or FIFO to write to")->excludes(out_opt);

  std::string dir;
  mock_sut::FixtureOptions fixture;
  std::vector<std::string> apps;
  auto* scaffold = app.add_subcommand("scaffold", "Write a fixture project");
  scaffold->add_option("dir", dir, "Project directory")->required();
  scaffold->add_option("--serial", fixture.serialDevice, "FIFO used by sw-fpga");
  scaffold->add_option("--output-file", fixture.outputFile, "Simulation dump path");
  scaffold->add_option("--app", apps, "Application names (IDs follow the order)");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    if (out_path.empty() && serial.empty()) {
      std::cerr << "mock_sut run: one of --out or --serial is required\n";
      return 2;
    }
    return run(id, out_path, serial);
  }

  fixture.mockSutBinary = std::filesystem::absolute(argv[0]);
  if (!apps.empty()) {
    fixture.apps.clear();
    for (std::size_t i = 0; i < apps.size(); ++i) {
      fixture.apps.push_back({apps[i], static_cast<std::uint32_t>(i + 1)});
    }
  }
  try {
    mock_sut::write_fixture_project(dir, fixture);
  } catch (const Error& e) {
    std::cerr << "mock_sut scaffold: " << e.what() << '\n';
    return 1;
  }
  std::cout << "wrote fixture project to " << dir << '\n';
  return 0;
}
