#include "superqd/config.hpp"
#include "superqd/export.hpp"
#include "superqd/harness.hpp"
#include "superqd/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace superqd;

namespace {

struct CommonFlags {
  std::string out;
  std::string format = "csv";
  bool headline = false;
  int threads = 0;
  bool fail_fast = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--out", f.out, "Output directory (default: $SUPERQD_OUT_DIR, else ./superqd-out)");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv"}));
  cmd->add_flag("--headline", f.headline, "Run convergence gates on every point");
  cmd->add_option("--threads", f.threads, "Worker threads for the sweep pool")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--fail-fast", f.fail_fast, "Abort on the first failing point");
}

fs::path out_dir(const CommonFlags& f) {
  if (!f.out.empty()) return f.out;
  if (const char* env = std::getenv("SUPERQD_OUT_DIR"); env && *env) return env;
  return "superqd-out";
}

// Returns the number of failed rows.
int run_and_export(const Scenario& s, const CommonFlags& f) {
  RunOptions opt;
  opt.headline = f.headline;
  opt.threads = f.threads;
  opt.fail_fast = f.fail_fast;
  std::cerr << "running " << s.name << " (" << sweep_points(s).size() << " point(s))\n";
  const auto result = run_scenario(s, opt);
  const auto files = export_result(result, out_dir(f), parse_export_format(f.format));

  int failed = 0, unconverged = 0;
  double wall = 0.0;
  for (const auto& row : result.rows) {
    wall += row.wall_s;
    if (!row.error.empty()) {
      ++failed;
      std::cerr << "  error: " << row.error << "\n";
    } else if (!row.converged) {
      ++unconverged;
      std::cerr << "  not converged: point " << row.point.index << "\n";
    }
  }
  std::cout << s.name << ": " << result.rows.size() << " rows, " << failed << " failed, " << unconverged
            << " not converged, " << wall << " s -> " << files.rows.string() << "\n";
  return failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum dot cavity photon source simulator"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;
  std::string preset_name;

  auto* run = app.add_subcommand("run", "Run one scenario from a YAML config");
  run->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  add_common(run, flags);

  auto* sweep = app.add_subcommand("sweep", "Run a YAML config that declares sweep axes");
  sweep->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  add_common(sweep, flags);

  auto* pre = app.add_subcommand("preset", "Run a built-in preset");
  pre->add_option("name", preset_name, "Preset name (see list-presets)")->required();
  add_common(pre, flags);

  auto* list = app.add_subcommand("list-presets", "Print the built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    int failed = 0;
    if (*list) {
      for (const auto& p : presets()) {
        std::cout << p.name << "\t" << p.description << "\n";
        for (const auto& s : p.scenarios) std::cout << "    " << s.name << " (" << sweep_points(s).size() << ")\n";
      }
      return 0;
    }
    if (*run || *sweep) {
      const auto s = load_scenario(config_path);
      if (*sweep && s.axes.empty()) {
        std::cerr << "sweep: '" << config_path << "' declares no sweep axes\n";
        return 2;
      }
      failed += run_and_export(s, flags);
    } else if (*pre) {
      for (const auto& s : preset(preset_name).scenarios) failed += run_and_export(s, flags);
    }
    return failed == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
