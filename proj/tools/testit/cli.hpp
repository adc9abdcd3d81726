#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace testit::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInfrastructure = 2;

int cmd_setup(const std::filesystem::path& workdir, std::ostream& out, std::ostream& err);

struct RunFlags {
  bool nobuild = false;
  bool sweep = false;
  std::optional<std::uint64_t> seed;
};

int cmd_run(const std::filesystem::path& workdir, const RunFlags& flags, std::ostream& out,
            std::ostream& err);

struct ReportFlags {
  std::optional<std::string> sortKey;
  bool descending = false;
};

int cmd_report(const std::filesystem::path& workdir, const ReportFlags& flags, std::ostream& out,
               std::ostream& err);

/// Seed used when --seed is absent.
std::uint64_t time_seed();

/// Parses `testit setup | run [...] | report [...]` and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace testit::cli
