#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "osl/cli.hpp"
#include "osl/io.hpp"

using namespace osl;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "osl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("osl_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("canonical text round-trips") {
  RunConfig c;
  c.plume.release_rate = 7.25;
  c.swarm.variant = Variant::AdapPp;
  c.swarm.initial_positions = {Vec3(1, 2, 3), Vec3(4.5, 6, 7), Vec3(0.1, 0.2, 0.3)};
  c.estimator.drift_scale = 0.05;
  c.swarm.seed = 18446744073709551615ull;
  const std::string text = serialize_config(c);
  const RunConfig back = parse_config(text);
  CHECK(serialize_config(back) == text);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(back.swarm.initial_positions[1].x() == 4.5);
  CHECK(back.estimator.drift_scale == 0.05);

  RunConfig d = c;
  d.plume.release_rate = 7.26;
  CHECK(config_hash(d) != config_hash(c));
  CHECK(config_hash(c).size() == 16);
}

TEST_CASE("every key is serialized") {
  const std::string text = serialize_config(RunConfig{});
  for (const auto& k : config_keys()) {
    CHECK(text.find(k + " = ") != std::string::npos);
    CHECK(is_config_key(k));
  }
  CHECK(is_config_key("volume"));
  CHECK_FALSE(is_config_key("colour"));
}

TEST_CASE("invalid configurations name the key and line") {
  auto error_of = [](const std::string& text) -> std::pair<std::string, int> {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return {e.key(), e.line()};
    }
    return {"", -1};
  };
  CHECK(error_of("# grid\ng = 25\n") == std::pair<std::string, int>{"g", 2});
  CHECK(error_of("uav_count = 0\n").first == "uav_count");
  CHECK(error_of("\n\nwind = 3\n") == std::pair<std::string, int>{"wind", 3});
  CHECK(error_of("release_rate = abc\n").first == "release_rate");
  CHECK(error_of("algo = pso\n").first == "algo");
  CHECK(error_of("lx 100\n").second == 1);
  CHECK(error_of("drift_scale = 1.5\n").first == "drift_scale");
  CHECK(error_of("uav_count = 2\ninitial_positions = 1,1,1\n").first == "initial_positions");
  CHECK(error_of("source_y = 61\n").first == "source_y");
  CHECK(error_of("lx = 100 # comment\n").second == -1);
}

TEST_CASE("volume alias") {
  const RunConfig c = parse_config("volume = 100x200x50\n");
  CHECK(c.volume.lx == 100);
  CHECK(c.volume.ly == 200);
  CHECK(c.volume.lz == 50);
  CHECK_THROWS_AS(parse_config("volume = 100x200\n"), ConfigError);
}

TEST_CASE("default placement") {
  const auto p = default_initial_positions(5, SearchVolume{});
  CHECK(p[0] == Vec3(10, 10, 5));
  CHECK(p[1] == Vec3(30, 10, 5));
  CHECK(p[2] == Vec3(60, 10, 5));
  CHECK(p[3] == Vec3(80, 10, 5));
  for (const auto& q : p) CHECK(SearchVolume{}.contains(q));
}

TEST_CASE("trajectory csv") {
  RunConfig cfg;
  cfg.swarm.k_max = 5;
  const auto r = run_episode(cfg, 4);
  std::ostringstream a, b;
  write_trajectory(a, r, cfg);
  write_trajectory(b, run_episode(cfg, 4), cfg);
  CHECK(a.str() == b.str());

  std::istringstream lines(a.str());
  std::string first, header, row;
  std::getline(lines, first);
  std::getline(lines, header);
  CHECK(first == "# seed=4 config_hash=" + config_hash(cfg));
  CHECK(header == kTrajectoryHeader);
  int count = 0;
  while (std::getline(lines, row)) {
    CHECK(std::count(row.begin(), row.end(), ',') == 16);
    ++count;
  }
  CHECK(count == static_cast<int>(r.trajectory.size()));

  cfg.swarm.k_max = 0;
  std::ostringstream empty;
  write_trajectory(empty, run_episode(cfg, 4), cfg);
  const std::string text = empty.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1476.27) == "1476.27");
  CHECK(format_number(1.0 / 3.0) == "0.333333");
  CHECK(format_number(12345678.0) == "1.23457e+07");
}

TEST_CASE("summary json") {
  RunConfig cfg;
  cfg.swarm.k_max = 20;
  const auto stats = monte_carlo(cfg, 3, 7, 1);
  const std::string text = summary_json(stats, cfg);
  CHECK(text == summary_json(monte_carlo(cfg, 3, 7, 2), cfg));
  const auto j = nlohmann::json::parse(text);
  CHECK(j["seed"] == 7);
  CHECK(j["run_count"] == 3);
  CHECK(j["algo"] == "muc-osl");
  CHECK(j["search_times"].size() == 3);
  CHECK(j["agent_energy"].size() == 3);
  CHECK(j["payload_values"]["nominal"] == 12);
  CHECK(j["config"]["g"] == "10");
  const double em = j["team_energy"]["E_M"];
  const double parts = double(j["team_energy"]["E_f"]) + double(j["team_energy"]["E_h"]) +
                       double(j["team_energy"]["E_b"]);
  CHECK(em == doctest::Approx(parts).epsilon(1e-5));
}

TEST_CASE("command line outputs are byte-identical across invocations") {
  const auto d1 = scratch("cli1");
  const auto d2 = scratch("cli2");
  CHECK(run_cli({"run", "--seed", "11", "--algo", "col-pf", "--out-dir", d1.string()}) == 0);
  CHECK(run_cli({"run", "--seed", "11", "--algo", "col-pf", "--out-dir", d2.string()}) == 0);
  CHECK(slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv"));
  CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));
  CHECK_FALSE(slurp(d1 / "trajectory.csv").empty());

  const auto m1 = scratch("mc1");
  const auto m2 = scratch("mc2");
  CHECK(run_cli({"mc", "--runs", "6", "--workers", "1", "--out-dir", m1.string()}) == 0);
  CHECK(run_cli({"mc", "--runs", "6", "--workers", "4", "--out-dir", m2.string()}) == 0);
  CHECK(slurp(m1 / "summary.json") == slurp(m2 / "summary.json"));

  const auto s = scratch("sweep");
  CHECK(run_cli({"sweep", "--sweep", "uav_count=1,2", "--algo", "muc-osl,col-inf", "--runs",
                 "2", "--out-dir", s.string()}) == 0);
  const std::string table = slurp(s / "sweep.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 6);
  CHECK(std::filesystem::exists(s / "summary_uav_count_2_col-inf.json"));

  for (const auto& p : {d1, d2, m1, m2, s}) std::filesystem::remove_all(p);
}

TEST_CASE("command line rejects bad input") {
  const auto d = scratch("bad");
  CHECK(run_cli({"run", "--algo", "pso", "--out-dir", d.string()}) == 2);
  CHECK(run_cli({"run", "--config", "/nonexistent/osl.cfg"}) == 2);
  CHECK(run_cli({"sweep", "--sweep", "bogus=1", "--out-dir", d.string()}) == 2);
  CHECK(run_cli({"sweep", "--sweep", "g=25", "--runs", "1", "--out-dir", d.string()}) == 2);
  CHECK(run_cli({"mc", "--runs", "0"}) != 0);
  std::filesystem::remove_all(d);
}

}
