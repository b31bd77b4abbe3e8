#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qmix/json_io.hpp"
#include "qmix/state.hpp"

#ifdef _WIN32
#error "the CLI test driver assumes a POSIX shell"
#endif
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "qmix_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path out = work_dir() / ("stdout." + std::to_string(counter));
  const fs::path err = work_dir() / ("stderr." + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string(QMIX_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path p = work_dir() / name;
  std::ofstream(p) << body;
  return p;
}

fs::path write_json(const std::string& name, const nlohmann::json& j) {
  return write_file(name, j.dump(2));
}

}  // namespace

TEST_CASE("solve reports an exact member with distance zero") {
  const qmix::StateSet set = qmix::random_state_set(2, 4, 31);
  const fs::path set_path = write_json("set_a.json", qmix::state_set_to_json(set));
  const fs::path target_path =
      write_json("target_a.json", qmix::state_to_json(set.member(2)));

  const RunResult r = run("solve --target " + target_path.string() + " --set " +
                          set_path.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("distance ") != std::string::npos);
  CHECK(r.out.find("minimal_n 1") != std::string::npos);
  CHECK(r.out.find("support 2") != std::string::npos);
}

TEST_CASE("solve --json emits a parseable report") {
  const qmix::StateSet set = qmix::random_state_set(3, 5, 32);
  const fs::path set_path = write_json("set_b.json", qmix::state_set_to_json(set));
  const fs::path target_path = write_json(
      "target_b.json", qmix::state_to_json(qmix::random_density(3, 77)));

  const RunResult r = run("solve --json --verify --target " +
                          target_path.string() + " --set " + set_path.string());
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("distance").is_number());
  CHECK(j.at("minimal_n").is_number_integer());
  CHECK(j.at("weights").size() == 5);
  CHECK(j.at("verify").at("discrepancy").get<double>() < 1e-6);
}

TEST_CASE("malformed inputs exit with code 2") {
  const fs::path bad = write_file("bad.json", "{ not json");
  const qmix::StateSet set = qmix::random_state_set(2, 3, 33);
  const fs::path set_path = write_json("set_c.json", qmix::state_set_to_json(set));

  CHECK(run("solve --target " + bad.string() + " --set " + set_path.string())
            .exit_code == 2);
  CHECK(run("solve --target /nonexistent.json --set " + set_path.string())
            .exit_code == 2);

  const fs::path short_state =
      write_json("short.json", {{"dim", 2}, {"coeffs", {0.7, 0.0}}});
  CHECK(run("solve --target " + short_state.string() + " --set " +
            set_path.string())
            .exit_code == 2);
  // Missing required option is a CLI parse failure.
  CHECK(run("solve --set " + set_path.string()).exit_code != 0);
}

TEST_CASE("strict validation rejects a nonphysical target with code 3") {
  const qmix::StateSet set = qmix::random_state_set(2, 3, 34);
  const fs::path set_path = write_json("set_d.json", qmix::state_set_to_json(set));
  // Bloch vector of length ~2.8: unit trace, not a density matrix.
  const double s = 1.0 / std::sqrt(2.0);
  const fs::path target = write_json(
      "target_d.json", {{"dim", 2}, {"coeffs", {s, 2.0, 0.0, 0.0}}});

  const RunResult strict = run("solve --strict --target " + target.string() +
                               " --set " + set_path.string());
  CHECK(strict.exit_code == 3);
  // Without --strict the same instance is accepted.
  CHECK(run("solve --target " + target.string() + " --set " + set_path.string())
            .exit_code == 0);
}

TEST_CASE("random generation is deterministic and parseable") {
  const RunResult a = run("random --d 3 --n 6 --seed 5");
  const RunResult b = run("random --d 3 --n 6 --seed 5");
  const RunResult c = run("random --d 3 --n 6 --seed 6");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  const qmix::StateSet parsed =
      qmix::state_set_from_json(nlohmann::json::parse(a.out));
  CHECK(parsed.dim == 3);
  CHECK(parsed.size() == 6);
}

TEST_CASE("fixtures subcommand lists and dumps") {
  const RunResult list = run("fixtures --list");
  CHECK(list.exit_code == 0);
  for (const char* name : {"example-i", "example-ii", "example-iii", "example-iv"}) {
    CHECK(list.out.find(name) != std::string::npos);
  }

  const RunResult dump = run("fixtures --dump example-ii");
  CHECK(dump.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(dump.out);
  CHECK(j.at("states").size() == 6);
  CHECK(j.at("targets").contains("r01_1"));

  CHECK(run("fixtures --dump no-such-fixture").exit_code == 2);
  CHECK(run("fixtures").exit_code == 2);
}

TEST_CASE("sweep writes a stable CSV for a fixture") {
  const fs::path out1 = work_dir() / "sweep1.csv";
  const fs::path out2 = work_dir() / "sweep2.csv";
  const std::string args =
      "sweep --fixture example-i --variant r02_1 --k-steps 11 --out ";
  CHECK(run(args + out1.string()).exit_code == 0);
  CHECK(run(args + out2.string()).exit_code == 0);
  const std::string text = slurp(out1);
  CHECK(text == slurp(out2));

  std::istringstream is(text);
  const auto records = qmix::read_sweep_csv(is);
  REQUIRE(records.size() == 11);
  CHECK(records.front().k == 0.0);
  CHECK(records.back().k == 1.0);

  CHECK(run("sweep --k-steps 5").exit_code == 2);
  CHECK(run("sweep --fixture no-such-fixture").exit_code == 2);
}

TEST_CASE("APPROX_BUDGET reroutes through the oracle without changing the answer") {
  const qmix::StateSet set = qmix::random_state_set(2, 5, 35);
  const fs::path set_path = write_json("set_e.json", qmix::state_set_to_json(set));
  const fs::path target = write_json(
      "target_e.json", qmix::state_to_json(qmix::random_density(2, 36)));
  const std::string base =
      "solve --json --target " + target.string() + " --set " + set_path.string();

  const RunResult direct = run(base);

  static int counter = 0;
  const fs::path out = work_dir() / ("budget_out." + std::to_string(counter++));
  const std::string cmd = "APPROX_BUDGET=1 " + std::string(QMIX_CLI_PATH) + " " +
                          base + " > " + out.string() + " 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const nlohmann::json a = nlohmann::json::parse(direct.out);
  const nlohmann::json b = nlohmann::json::parse(slurp(out));
  CHECK(b.at("oracle_fallback").get<bool>());
  CHECK(std::abs(a.at("distance").get<double>() -
                 b.at("distance").get<double>()) < 1e-7);
}
