#include "mock_sut.hpp"

#include "testit/error.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace testit::mock_sut {

namespace fs = std::filesystem;

std::optional<FaultMode> parse_fault(std::string_view name) {
  if (name == "none" || name.empty()) return FaultMode::kNone;
  if (name == "trunc8") return FaultMode::kTrunc8;
  if (name == "stuckFail") return FaultMode::kStuckFail;
  if (name == "silent") return FaultMode::kSilent;
  return std::nullopt;
}

std::string_view to_string(FaultMode mode) {
  switch (mode) {
    case FaultMode::kNone: return "none";
    case FaultMode::kTrunc8: return "trunc8";
    case FaultMode::kStuckFail: return "stuckFail";
    case FaultMode::kSilent: return "silent";
  }
  return "none";
}

FaultMode fault_from_env() {
  const char* v = std::getenv("MOCK_SUT_FAULT");
  if (v == nullptr) return FaultMode::kNone;
  auto mode = parse_fault(v);
  if (!mode) throw std::invalid_argument(std::string("unknown MOCK_SUT_FAULT '") + v + "'");
  return *mode;
}

std::size_t row_increment_bytes(const MaterializedDataset& d) {
  std::size_t per_row = 1;
  for (std::size_t i = 1; i < d.shape.size(); ++i) per_row *= d.shape[i];
  return per_row * byte_size(d.dataType);
}

std::vector<double> walk_copy(const MaterializedDataset& d, FaultMode fault) {
  const std::size_t elem = byte_size(d.dataType);
  const std::size_t row_bytes = row_increment_bytes(d);
  const std::size_t rows = d.shape.empty() ? 0 : d.shape[0];
  const std::size_t row_elems = row_bytes / elem;

  std::size_t increment = row_bytes;
  if (fault == FaultMode::kTrunc8) increment = static_cast<std::uint8_t>(row_bytes);

  std::vector<double> out(d.values.size());
  std::size_t src_offset = 0;  // bytes
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t src = src_offset / elem;
    for (std::size_t k = 0; k < row_elems; ++k) out[r * row_elems + k] = d.values[src + k];
    src_offset += increment;
  }
  return out;
}

std::optional<MockResult> mock_run(const Sidecar& sidecar, std::uint32_t testId, FaultMode fault) {
  if (fault == FaultMode::kSilent) return std::nullopt;

  std::size_t elements = 0;
  for (const auto& d : sidecar.inputs) elements += d.values.size();

  bool ok = sidecar.goldens.size() <= sidecar.inputs.size();
  for (std::size_t i = 0; ok && i < sidecar.goldens.size(); ++i) {
    ok = walk_copy(sidecar.inputs[i], fault) == sidecar.goldens[i].values;
  }
  if (fault == FaultMode::kStuckFail) ok = false;

  MockResult r;
  r.testId = testId;
  r.pseudoCycles = static_cast<std::uint32_t>(elements * 3 + testId);
  r.outcome = ok ? 1 : 0;
  return r;
}

std::string format_line(const MockResult& r) {
  return std::to_string(r.testId) + ":" + std::to_string(r.pseudoCycles) + ":" +
         std::to_string(r.outcome) + "\n";
}

std::string fixture_makefile(const FixtureOptions& o) {
  const std::string g = o.genFilesName;
  std::ostringstream mk;
  mk << "# Mock system-under-test implementing the eight-target contract.\n"
     << "MOCK_SUT ?= " << o.mockSutBinary.string() << "\n"
     << "OUTPUT_FILE ?= " << o.outputFile << "\n"
     << "SERIAL_DEV ?= " << o.serialDevice << "\n"
     << "BUILD := build\n\n"
     << ".PHONY: sw-sim sw-fpga sim-build sim-run fpga-build fpga-load gdb-setup deb-setup\n\n"
     << "define enter\n"
     << "\t@mkdir -p $(BUILD) && echo \"$(1)\" >> $(BUILD)/make.log\n"
     << "\t@if [ \"$(MOCK_FAIL_TARGET)\" = \"$(firstword $(1))\" ]; then "
        "echo \"injected failure in $(firstword $(1))\" >&2; exit $(or $(MOCK_FAIL_CODE),2); fi\n"
     << "endef\n\n"
     << "define compile\n"
     << "\t@test -n \"$(app)\" || { echo \"app= is required\" >&2; exit 1; }\n"
     << "\t@test -f apps/$(app)/" << g << ".json || { echo \"apps/$(app): no generated files\" >&2; exit 1; }\n"
     << "\t@cp apps/$(app)/" << g << ".json $(BUILD)/app.json\n"
     << "\t@cp apps/$(app)/app.id $(BUILD)/app.id\n"
     << "\t@cat apps/$(app)/" << g << ".h apps/$(app)/" << g << ".c apps/$(app)/" << g
     << ".json >> $(BUILD)/generated.log\n"
     << "endef\n\n"
     << "sw-sim:\n"
     << "\t$(call enter,sw-sim app=$(app))\n"
     << "\t$(compile)\n\n"
     << "# Compiling for the board also flashes and starts it; results stream\n"
     << "# out over the serial device.\n"
     << "sw-fpga:\n"
     << "\t$(call enter,sw-fpga app=$(app))\n"
     << "\t$(compile)\n"
     << "\t@MOCK_SUT_SIDECAR=$(BUILD)/app.json $(MOCK_SUT) run --id $$(cat $(BUILD)/app.id) "
        "--serial $(SERIAL_DEV)\n\n"
     << "sim-build:\n"
     << "\t$(call enter,sim-build tool=$(tool))\n\n"
     << "sim-run:\n"
     << "\t$(call enter,sim-run tool=$(tool))\n"
     << "\t@mkdir -p $(dir $(OUTPUT_FILE))\n"
     << "\t@MOCK_SUT_SIDECAR=$(BUILD)/app.json $(MOCK_SUT) run --id $$(cat $(BUILD)/app.id) "
        "--out $(OUTPUT_FILE)\n\n"
     << "fpga-build:\n"
     << "\t$(call enter,fpga-build target=$(target))\n\n"
     << "fpga-load:\n"
     << "\t$(call enter,fpga-load target=$(target))\n\n"
     << "gdb-setup:\n"
     << "\t$(call enter,gdb-setup)\n\n"
     << "deb-setup:\n"
     << "\t$(call enter,deb-setup)\n";
  return mk.str();
}

void write_fixture_project(const fs::path& dir, const FixtureOptions& options) {
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  };
  fs::create_directories(dir);
  write(dir / "Makefile", fixture_makefile(options));
  for (const FixtureApp& app : options.apps) {
    fs::create_directories(dir / "apps" / app.name);
    write(dir / "apps" / app.name / "app.id", std::to_string(app.testId) + "\n");
  }
}

}  // namespace testit::mock_sut
