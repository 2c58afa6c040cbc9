// qwalk: run presets or config files, optimize coins, list presets.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qwalk/config.hpp"
#include "qwalk/emit.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/presets.hpp"
#include "qwalk/runner.hpp"
#include "qwalk/version.hpp"

namespace {

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<int> steps;
  int threads = 0;
  bool quiet = false;
};

int fail(const std::string& kind, const std::string& message, int code) {
  nlohmann::json err = {{"error", kind}, {"message", message}};
  std::cerr << err.dump() << '\n';
  return code;
}

qwalk::RunConfig prepare(const std::string& target, const Flags& flags) {
  qwalk::RunConfig config = qwalk::load_config(target);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.steps) config.steps = *flags.steps;
  if (flags.format) config.format = qwalk::parse_format(*flags.format);
  config.validate();
  return config;
}

qwalk::RunOptions options(const Flags& flags) {
  qwalk::RunOptions o;
  if (flags.out_dir) o.out_dir = *flags.out_dir;
  o.threads = flags.threads;
  if (!flags.quiet) o.log = [](const std::string& msg) { std::cerr << msg << '\n'; };
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-walk Parrondo simulator (kicked-rotor and ideal walks)"};
  app.set_version_flag("--version", std::string(qwalk::kVersion) + " (" + qwalk::kGitDescribe + ")");
  app.require_subcommand(1);

  Flags flags;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "64-bit seed for noise and quasimomentum streams");
    cmd->add_option("--out-dir", flags.out_dir, "output root (default: $QWALK_OUT_DIR or ./qwalk-out)");
    cmd->add_option("--format", flags.format, "data format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--steps", flags.steps, "override the step count N")->check(CLI::NonNegativeNumber);
    cmd->add_option("--threads", flags.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    cmd->add_flag("-q,--quiet", flags.quiet, "no progress lines on stderr");
  };

  std::string target;
  auto* run = app.add_subcommand("run", "simulate a preset, config file or manifest");
  run->add_option("target", target, "preset name or path")->required();
  add_common(run);

  auto* optimize = app.add_subcommand("optimize", "grid search over coin angles");
  optimize->add_option("target", target, "preset name or config path with an optimizer section")->required();
  add_common(optimize);

  bool presets_json = false;
  auto* list = app.add_subcommand("list-presets", "print the available presets");
  list->add_flag("--json", presets_json, "print presets as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      if (presets_json) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& p : qwalk::presets()) out.push_back({{"name", p.name}, {"summary", p.summary}});
        std::cout << out.dump(2) << '\n';
      } else {
        for (const auto& p : qwalk::presets()) std::cout << p.name << "\t" << p.summary << '\n';
      }
      return 0;
    }
    const qwalk::RunConfig config = prepare(target, flags);
    if (run->parsed()) {
      const auto result = qwalk::run_experiment(config, options(flags));
      std::cout << (result.directory / "manifest.json").string() << '\n';
      return 0;
    }
    const auto result = qwalk::run_optimization(config, options(flags));
    const auto& best = result.report.best();
    std::cout << "best gamma_deg=" << qwalk::format_number(best.gamma_deg)
              << " chi_deg=" << qwalk::format_number(best.chi_deg)
              << " value=" << qwalk::format_number(best.eval.value)
              << (best.eval.feasible ? "" : " (no feasible candidate)") << '\n'
              << (result.directory / "manifest.json").string() << '\n';
    return 0;
  } catch (const qwalk::ConfigError& e) {
    return fail(std::string(qwalk::to_string(e.kind())), e.what(), 2);
  } catch (const qwalk::LatticeTooSmall& e) {
    return fail("lattice-too-small", e.what(), 3);
  } catch (const qwalk::IoError& e) {
    return fail("io-error", e.what(), 4);
  } catch (const qwalk::InvalidArgument& e) {
    return fail("invalid-argument", e.what(), 5);
  } catch (const std::exception& e) {
    return fail("internal-error", e.what(), 1);
  }
}
