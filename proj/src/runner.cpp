#include "qwalk/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include "qwalk/emit.hpp"
#include "qwalk/version.hpp"

namespace qwalk {

using nlohmann::json;

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("QWALK_OUT_DIR"); env && *env) return env;
  return "qwalk-out";
}

namespace {

std::filesystem::path resolve_dir(const RunConfig& config, const RunOptions& options) {
  std::filesystem::path root = options.out_dir;
  if (root.empty()) root = config.out_dir;
  if (root.empty()) root = default_out_dir();
  return root / config.name;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json base_manifest(const RunConfig& config) {
  return {{"qwalk_manifest", 1},
          {"version", kVersion},
          {"git", kGitDescribe},
          {"config", to_json(config)},
          {"seeds", {{"noise", config.seed}, {"quasimomentum", config.seed}}}};
}

void log(const RunOptions& options, const std::string& msg) {
  if (options.log) options.log(msg);
}

std::string extension(OutputFormat f) { return f == OutputFormat::kCsv ? ".csv" : ".json"; }

}  // namespace

RunResult run_experiment(const RunConfig& config, const RunOptions& options) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_now();

  RunResult result;
  result.directory = resolve_dir(config, options);
  const std::string ext = extension(config.format);
  for (const auto& s : config.scenarios) {
    for (const auto& w : s.walks) {
      result.files.push_back({s.name, w.label, "series", s.name + "/series_" + w.label + ext});
      result.files.push_back({s.name, w.label, "distribution", s.name + "/distribution_" + w.label + ext});
    }
  }

  json manifest = base_manifest(config);
  json index = json::array();
  for (const auto& f : result.files) {
    index.push_back({{"scenario", f.scenario}, {"walk", f.walk}, {"kind", f.kind}, {"path", f.path}});
  }
  manifest["files"] = index;
  // Data files embed the manifest without wall-clock fields so reruns stay byte-identical.
  const json embedded = manifest;

  json lattice = json::object();
  for (const auto& s : config.scenarios) {
    log(options, "scenario " + s.name + ": " + std::to_string(s.realizations * s.beta_samples) +
                     " trajectories x " + std::to_string(s.walks.size()) + " walks, N = " +
                     std::to_string(config.steps));
    EnsembleOptions eo;
    eo.threads = options.threads;
    eo.half_width = s.half_width;
    eo.initial_state = s.initial_state;
    EnsembleResult ens = run_ensemble(s.schedules(), s.walk_params(), s.noise(config.seed),
                                      s.quasimomentum(config.seed), config.steps, eo);
    lattice[s.name] = ens.half_width;

    for (const auto& w : ens.walks) {
      const auto base = result.directory / s.name;
      if (config.format == OutputFormat::kCsv) {
        std::ostringstream series;
        write_series_csv(series, w.mean_winning, w.mean_time_average);
        write_file(base / ("series_" + w.label + ext), series.str());
        std::ostringstream dist;
        write_distribution_csv(dist, w.mean_final_distribution);
        write_file(base / ("distribution_" + w.label + ext), dist.str());
      } else {
        json series = series_json(w.mean_winning, w.mean_time_average);
        series["scenario"] = s.name;
        series["walk"] = w.label;
        series["manifest"] = embedded;
        write_file(base / ("series_" + w.label + ext), series.dump(1) + "\n");
        json dist = distribution_json(w.mean_final_distribution);
        dist["scenario"] = s.name;
        dist["walk"] = w.label;
        dist["manifest"] = embedded;
        write_file(base / ("distribution_" + w.label + ext), dist.dump(1) + "\n");
      }
    }
    result.scenarios.push_back({s.name, std::move(ens)});
  }

  manifest["half_width"] = lattice;
  manifest["started_utc"] = started_utc;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_file(result.directory / "manifest.json", manifest.dump(2) + "\n");
  result.manifest = std::move(manifest);
  return result;
}

OptimizeResult run_optimization(const RunConfig& config, const RunOptions& options) {
  config.validate();
  const CoinSearch search = config.coin_search(options.threads);
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_now();

  OptimizeResult result;
  result.directory = resolve_dir(config, options);
  log(options, "optimizing coin " + search.free_coin + " over " + std::to_string(search.grid.size()) +
                   " grid points, N = " + std::to_string(search.steps));
  result.report = optimize_coins(search);

  std::vector<std::string> labels;
  for (const auto& [label, pattern] : search.walks) labels.push_back(label);

  std::ostringstream csv;
  csv << "rank,gamma_deg,chi_deg,value,feasible";
  for (const auto& l : labels) csv << ",Obar_" << l;
  csv << ",violations\n";
  std::size_t rank = 1;
  for (const auto& c : result.report.ranking) {
    csv << rank++ << ',' << format_number(c.gamma_deg) << ',' << format_number(c.chi_deg) << ','
        << format_number(c.eval.value) << ',' << (c.eval.feasible ? 1 : 0);
    for (const auto& l : labels) csv << ',' << format_number(c.eval.time_averages.at(l));
    csv << ',';
    for (std::size_t i = 0; i < c.eval.violations.size(); ++i) csv << (i ? ";" : "") << c.eval.violations[i];
    csv << '\n';
  }
  write_file(result.directory / "optimization.csv", csv.str());

  auto candidate_json = [&](const Candidate& c) {
    return json{{"alpha_deg", search.alpha_deg}, {"gamma_deg", c.gamma_deg}, {"chi_deg", c.chi_deg},
                {"value", c.eval.value},         {"feasible", c.eval.feasible}, {"time_averages", c.eval.time_averages},
                {"violations", c.eval.violations}};
  };
  json manifest = base_manifest(config);
  manifest["files"] = json::array({{{"kind", "ranking"}, {"path", "optimization.csv"}},
                                   {{"kind", "summary"}, {"path", "optimization.json"}}});
  json summary = {{"evaluated", result.report.ranking.size()},
                  {"has_feasible", result.report.has_feasible()},
                  {"best", candidate_json(result.report.best())},
                  {"manifest", manifest}};
  json top = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(20, result.report.ranking.size()); ++i) {
    top.push_back(candidate_json(result.report.ranking[i]));
  }
  summary["top"] = top;
  write_file(result.directory / "optimization.json", summary.dump(2) + "\n");

  manifest["started_utc"] = started_utc;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_file(result.directory / "manifest.json", manifest.dump(2) + "\n");
  result.manifest = std::move(manifest);
  return result;
}

}  // namespace qwalk
