// Command-line front end: run, sweep, check, version.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure (or a
// failed audit), 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>

#include <CLI11.hpp>

#include "relpur/audit.hpp"
#include "relpur/errors.hpp"
#include "relpur/parallel.hpp"
#include "relpur/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

relpur::OutputFormat parse_format(const std::string& s) {
  return s == "json" ? relpur::OutputFormat::Json : relpur::OutputFormat::Csv;
}

void print_report(const relpur::AuditReport& r, bool verbose) {
  std::cout << (r.passed() ? "PASS " : "FAIL ") << r.subject << "\n";
  for (const auto& note : r.notes) std::cout << "  note: " << note << "\n";
  for (const auto& item : r.items) {
    if (!verbose && item.passed()) continue;
    std::cout << "  " << (item.passed() ? "ok   " : "FAIL ") << item.name << " = "
              << relpur::format_real(item.value) << " (tol " << relpur::format_real(item.tolerance)
              << ")\n";
  }
}

int run_command(const std::string& config, const std::filesystem::path& out,
                const std::string& format, unsigned threads) {
  const auto cfg = relpur::load_config(config);
  const auto result = relpur::run_scenario(cfg, threads);
  relpur::emit(result, parse_format(format), out);
  std::cout << cfg.id << ": tau_QSL = " << relpur::format_real(result.bounds.tau_qsl.value)
            << " (index " << result.bounds.tau_qsl.index
            << "), tau_eq = " << relpur::format_real(result.bounds.tau_eq_unified.value)
            << " (index " << result.bounds.tau_eq_unified.index << ")\n";
  for (const auto& note : result.notes) std::cout << "  note: " << note << "\n";
  return 0;
}

int sweep_command(const std::string& config, const std::filesystem::path& out,
                  const std::string& format, unsigned threads) {
  const auto cfg = relpur::load_config(config);
  if (cfg.sweep_sites.empty()) throw relpur::ConfigError("sweep: config has no \"sweep\" block");
  const auto fmt = parse_format(format);
  std::mutex io;
  const auto result = relpur::sweep(relpur::expand_sweep(cfg), threads,
                                    [&](const relpur::RunResult& r) {
                                      relpur::emit(r, fmt, out);
                                      std::lock_guard lock(io);
                                      std::cout << "finished " << r.config.id << "\n";
                                    });
  relpur::emit_sweep(cfg.id, result, fmt, out);
  std::cout << relpur::summary_csv(result.summary);
  return 0;
}

int check_command(const std::string& config, bool has_seed, std::uint64_t seed, int count,
                  bool verbose, unsigned threads) {
  bool ok = true;
  if (!config.empty()) {
    const auto cfg = relpur::load_config(config);
    for (const auto& c : relpur::expand_sweep(cfg)) {
      const auto report = relpur::check_scenario(c);
      print_report(report, verbose);
      ok = ok && report.passed();
    }
  }
  if (has_seed) {
    int failures = 0;
    for (const auto& report : relpur::random_audit(seed, count, threads)) {
      if (!report.passed() || verbose) print_report(report, verbose);
      failures += report.passed() ? 0 : 1;
    }
    std::cout << "random audit (seed " << seed << "): " << count - failures << "/" << count
              << " passed\n";
    ok = ok && failures == 0;
  }
  return ok ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local equilibration of closed spin chains by exact diagonalization"};
  app.require_subcommand(1);

  std::string out = "results";
  std::string format = "csv";
  unsigned threads = 1;
  std::string config;
  std::uint64_t seed = 0;
  int count = 50;
  bool verbose = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--format", format, "Series format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "Run one scenario and write its artifacts");
  run->add_option("config", config, "Scenario JSON")->required();
  add_common(run);

  auto* sw = app.add_subcommand("sweep", "Run a size sweep and write a summary table");
  sw->add_option("config", config, "Scenario JSON with a sweep block")->required();
  add_common(sw);

  auto* check = app.add_subcommand("check", "Gap scan and invariant audit");
  check->add_option("config", config, "Scenario JSON");
  auto* seed_opt = check->add_option("--seed", seed, "Run the randomized bound audit with this seed");
  check->add_option("--count", count, "Random systems in the audit")->capture_default_str();
  check->add_flag("--verbose", verbose, "List passing items too");
  check->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return run_command(config, out, format, threads);
    if (sw->parsed()) return sweep_command(config, out, format, threads);
    if (check->parsed()) {
      if (config.empty() && seed_opt->count() == 0) {
        throw relpur::ConfigError("check: give a config, --seed, or both");
      }
      return check_command(config, seed_opt->count() > 0, seed, count, verbose, threads);
    }
    std::cout << "relpur " << relpur::kVersion << "\n";
    return 0;
  } catch (const relpur::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const relpur::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
