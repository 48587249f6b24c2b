#include "osl/cli.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "osl/config.hpp"
#include "osl/io.hpp"
#include "osl/swarm.hpp"

namespace osl {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<Variant> parse_algos(const std::string& text) {
  std::vector<Variant> out;
  for (const auto& name : split_list(text)) {
    const auto v = parse_variant(name);
    if (!v) {
      throw std::invalid_argument("unknown --algo '" + name +
                                  "'; valid variants: muc-osl, col-inf, col-pf, adap-pp");
    }
    out.push_back(*v);
  }
  return out;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir);
  }
  const fs::path probe = fs::path(dir) / ".osl_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory is not writable: " + dir);
  }
  fs::remove(probe, ec);
}

std::string safe_name(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.')) c = '_';
  }
  return s;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Multi-agent odor source localization simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string algo;
  int runs = 200;
  std::string sweep_spec;
  std::string out_dir = ".";
  int workers = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--algo", algo, "muc-osl | col-inf | col-pf | adap-pp");
    sub->add_option("--out-dir", out_dir, "directory for output files");
  };
  auto* run_cmd = app.add_subcommand("run", "run one episode");
  add_common(run_cmd);
  auto* mc_cmd = app.add_subcommand("mc", "run a Monte Carlo batch");
  add_common(mc_cmd);
  mc_cmd->add_option("--runs", runs, "number of episodes")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  auto* sweep_cmd = app.add_subcommand("sweep", "one Monte Carlo batch per swept value");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--sweep", sweep_spec, "KEY=v1,v2,...")->required();
  sweep_cmd->add_option("--runs", runs, "episodes per batch")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) config.swarm.seed = *seed;
    std::vector<Variant> variants;
    if (!algo.empty()) {
      variants = parse_algos(algo);
      if (variants.size() > 1 && !sweep_cmd->parsed()) {
        throw std::invalid_argument("run and mc accept a single --algo");
      }
      config.swarm.variant = variants.front();
    }
    config.validate();
    ensure_out_dir(out_dir);
    const fs::path dir(out_dir);

    if (run_cmd->parsed()) {
      const RunResult result = run_episode(config, config.swarm.seed);
      write_trajectory(result, config, (dir / "trajectory.csv").string());
      write_summary(aggregate({result}), config, (dir / "summary.json").string());
      std::cout << to_string(config.swarm.variant) << " seed " << config.swarm.seed
                << ": " << (result.success ? "success" : "failure");
      if (result.search_time) std::cout << ", search time " << format_number(*result.search_time) << " s";
      std::cout << ", " << result.iterations << " iterations\n";
      return 0;
    }

    if (mc_cmd->parsed()) {
      const MCStats stats = monte_carlo(config, runs, config.swarm.seed, workers);
      write_summary(stats, config, (dir / "summary.json").string());
      std::cout << to_string(config.swarm.variant) << ": SR "
                << format_number(stats.success_rate) << ", MST "
                << (stats.mean_search_time ? format_number(*stats.mean_search_time) : "n/a")
                << " s over " << stats.run_count << " runs\n";
      return 0;
    }

    // sweep
    const auto eq = sweep_spec.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--sweep expects KEY=v1,v2,...");
    }
    const std::string key = sweep_spec.substr(0, eq);
    if (!is_config_key(key) || key == "algo" || key == "seed") {
      throw std::invalid_argument("invalid sweep key '" + key + "'");
    }
    const auto values = split_list(sweep_spec.substr(eq + 1));
    if (variants.empty()) variants = all_variants();

    std::vector<SweepRow> rows;
    for (const auto& value : values) {
      RunConfig point = config;
      set_config_value(point, key, value);
      point.validate();
      for (Variant v : variants) {
        point.swarm.variant = v;
        SweepRow row{key, value, v, monte_carlo(point, runs, point.swarm.seed, workers)};
        write_summary(row.stats, point,
                      (dir / ("summary_" + safe_name(key) + "_" + safe_name(value) + "_" +
                              std::string(to_string(v)) + ".json"))
                          .string());
        std::cout << key << '=' << value << ' ' << to_string(v) << ": SR "
                  << format_number(row.stats.success_rate) << ", MST "
                  << (row.stats.mean_search_time ? format_number(*row.stats.mean_search_time)
                                                 : "n/a")
                  << '\n';
        row.stats.runs.clear();
        rows.push_back(std::move(row));
      }
    }
    write_sweep_table(rows, config, (dir / "sweep.csv").string());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "osl: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace osl
