#include "cli.hpp"

#include "testit/config.hpp"
#include "testit/error.hpp"
#include "testit/orchestrator.hpp"
#include "testit/results.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace testit::cli {

namespace fs = std::filesystem;

namespace {

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax:
    case ErrorCode::kSchema:
    case ErrorCode::kRegex:
    case ErrorCode::kArity:
    case ErrorCode::kUnboundDimension:
      return true;
    default:
      return false;
  }
}

std::optional<TestConfig> load_workdir_config(const fs::path& workdir, std::ostream& err) {
  const fs::path path = workdir / kConfigFileName;
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    err << "testit: no " << kConfigFileName << " in " << workdir.string()
        << "; run `testit setup` to create a template\n";
    return std::nullopt;
  }
  try {
    return load_config(path);
  } catch (const Error& e) {
    err << "testit: " << kConfigFileName << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

std::uint64_t time_seed() {
  auto ns = std::chrono::system_clock::now().time_since_epoch().count();
  std::uint64_t x = static_cast<std::uint64_t>(ns);
  // splitmix finalizer so that close start times give unrelated seeds
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

int cmd_setup(const fs::path& workdir, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> written;
  try {
    written = write_templates(workdir, /*overwrite=*/false);
  } catch (const Error& e) {
    err << "testit setup: " << e.what() << '\n';
    return kExitUserError;
  }
  for (std::string_view name : {kConfigFileName, kGoldenTemplateName}) {
    const bool created = std::find(written.begin(), written.end(), workdir / name) != written.end();
    out << (created ? "created " : "already present ") << (workdir / name).string() << '\n';
  }
  if (written.empty()) out << "nothing to do: both files are already present\n";
  return kExitOk;
}

int cmd_run(const fs::path& workdir, const RunFlags& flags, std::ostream& out, std::ostream& err) {
  auto config = load_workdir_config(workdir, err);
  if (!config) return kExitUserError;

  CampaignOptions opts;
  opts.nobuild = flags.nobuild;
  opts.sweep = flags.sweep;
  opts.seed = flags.seed.value_or(time_seed());
  opts.projectRoot = workdir;

  std::size_t passed = 0, failed = 0;
  std::uint64_t completed = 0, total = 0;
  opts.onProgress = [&](const CampaignProgress& p) {
    total = p.totalIterations;
    completed = p.iteration + 1;
    for (const RunRecord& r : *p.records) {
      (r.passed ? passed : failed) += 1;
      out << "[" << p.iteration + 1 << "/" << p.totalIterations << "] " << p.test->appName << " "
          << r.bindings.to_string() << " " << (r.passed ? "PASS" : "FAIL") << " (" << std::fixed
          << std::setprecision(3) << r.wallTime << " s)\n";
    }
    out.flush();
  };
  auto summary = [&] {
    out << completed << "/" << total << " iterations, " << passed << " passed, " << failed
        << " failed\n";
  };

  out << "seed: " << opts.seed << '\n';
  out << "mode: " << (flags.sweep ? "sweep" : "random") << (flags.nobuild ? " (no build)" : "")
      << '\n';
  try {
    Campaign campaign(*config, opts);
    campaign.run();
    summary();
    out << "results: " << (campaign.report_dir() / kResultsFileName).string() << '\n';
    return kExitOk;
  } catch (const CampaignAborted& e) {
    summary();
    err << "testit run: aborted: " << e.what() << '\n';
    return kExitInfrastructure;
  } catch (const Error& e) {
    err << "testit run: " << e.what() << '\n';
    return is_config_error(e.code()) ? kExitUserError : kExitInfrastructure;
  }
}

int cmd_report(const fs::path& workdir, const ReportFlags& flags, std::ostream& out,
               std::ostream& err) {
  auto config = load_workdir_config(workdir, err);
  if (!config) return kExitUserError;

  fs::path dir(config->report.dir);
  if (dir.is_relative()) dir = workdir / dir;
  const fs::path file = dir / kResultsFileName;
  CampaignDatabase db;
  try {
    db = load_database(file);
  } catch (const Error& e) {
    err << "testit report: no campaign database (" << e.what() << "); run `testit run` first\n";
    return kExitUserError;
  }
  try {
    out << "campaign: seed " << db.seed << ", " << db.targetName << " (" << to_string(db.targetType)
        << "), " << to_string(db.mode) << " mode, started " << db.startedAt << '\n';
    out << render_report(db, flags.sortKey, flags.descending);
  } catch (const Error& e) {
    err << "testit report: " << e.what() << '\n';
    return kExitUserError;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"SBST integration-test campaign runner", "testit"};
  app.require_subcommand(1, 1);
  std::string workdir = ".";
  app.add_option("-C,--directory", workdir, "Project directory holding config.test")
      ->check(CLI::ExistingDirectory);

  auto* setup = app.add_subcommand("setup", "Create config.test and golden plugin templates");

  RunFlags run_flags;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Run the campaign described by config.test");
  run->add_flag("--nobuild", run_flags.nobuild, "Skip sim-build / fpga-build");
  run->add_flag("--sweep", run_flags.sweep, "Enumerate every parameter combination");
  auto* seed_opt = run->add_option("--seed", seed, "Campaign seed (default: time-derived)");

  ReportFlags report_flags;
  std::string sort_key;
  auto* report = app.add_subcommand("report", "Print the campaign report");
  auto* sort_opt = report->add_option("--sort_key", sort_key, "Tag or field to sort rows by");
  report->add_flag("--descending", report_flags.descending, "Sort in descending order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);  // --help
    err << "testit: " << e.what() << "\n\n" << app.help();
    return kExitUserError;
  }

  const fs::path dir = workdir;
  if (*setup) return cmd_setup(dir, out, err);
  if (*run) {
    if (*seed_opt) run_flags.seed = seed;
    return cmd_run(dir, run_flags, out, err);
  }
  if (*sort_opt) report_flags.sortKey = sort_key;
  return cmd_report(dir, report_flags, out, err);
}

}  // namespace testit::cli
