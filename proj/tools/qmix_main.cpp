#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmix/basis.hpp"
#include "qmix/fixtures.hpp"
#include "qmix/json_io.hpp"
#include "qmix/oracle.hpp"
#include "qmix/search.hpp"
#include "qmix/state.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitVerify = 4;

qmix::SolveOptions options_from_env() {
  qmix::SolveOptions opts;
  if (const char* env = std::getenv("APPROX_BUDGET")) {
    try {
      opts.budget = std::stoll(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable APPROX_BUDGET\n";
    }
  }
  return opts;
}

// Writes to the file when a path is given, otherwise to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw qmix::ParseError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ';';
    os << v[i];
  }
  return os.str();
}

int run_solve(const std::string& target_path, const std::string& set_path,
              bool strict, bool verify, const std::string& out_path, bool as_json) {
  const qmix::CoeffVector target = qmix::load_state(target_path);
  const qmix::StateSet set = qmix::load_state_set(set_path);

  if (strict) {
    const qmix::HermitianBasis basis = qmix::HermitianBasis::build(set.dim);
    const auto check = [&](const qmix::CoeffVector& v, const std::string& what) {
      const qmix::ValidationReport rep = qmix::validate_state(v, basis, true);
      if (!rep.valid()) {
        std::cerr << "strict validation failed for " << what << ": trace=" << rep.trace
                  << " purity=" << rep.purity << " min_eig=" << rep.min_eigenvalue
                  << "\n";
        return false;
      }
      return true;
    };
    bool ok = check(target, "target");
    for (int i = 0; i < set.size(); ++i) {
      ok = check(set.member(i), "set member " + std::to_string(i)) && ok;
    }
    if (!ok) return kExitValidation;
  }

  const qmix::ApproxSolution sol = qmix::solve(target, set, options_from_env());
  for (const auto& w : sol.warnings) std::cerr << "warning: " << w << "\n";

  double oracle_distance = 0.0;
  double discrepancy = 0.0;
  if (verify) {
    const qmix::OracleResult oracle = qmix::projected_gradient(target, set);
    oracle_distance = oracle.distance;
    discrepancy = std::abs(sol.distance - oracle.distance);
  }

  Output out(out_path);
  if (as_json) {
    nlohmann::json j;
    j["distance"] = sol.distance;
    j["weights"] = std::vector<double>(sol.weights.data(),
                                       sol.weights.data() + sol.weights.size());
    j["support"] = sol.support;
    j["minimal_n"] = sol.minimal_n;
    j["evaluated_supports"] = sol.evaluated_supports;
    j["outcomes"] = {{"feasible", sol.feasible_count},
                     {"infeasible_sign", sol.infeasible_count},
                     {"rank_deficient", sol.rank_deficient_count}};
    j["oracle_fallback"] = sol.oracle_fallback;
    if (verify) {
      j["verify"] = {{"oracle_distance", oracle_distance},
                     {"discrepancy", discrepancy}};
    }
    out.stream() << j.dump(2) << "\n";
  } else {
    std::ostream& os = out.stream();
    os << "distance " << qmix::format_number(sol.distance) << "\n";
    os << "minimal_n " << sol.minimal_n << "\n";
    os << "support " << join_ints(sol.support) << "\n";
    os << "weights ";
    for (int i = 0; i < sol.weights.size(); ++i) {
      if (i) os << ';';
      os << qmix::format_number(sol.weights[i]);
    }
    os << "\n";
    os << "evaluated_supports " << sol.evaluated_supports << " (feasible "
       << sol.feasible_count << ", infeasible " << sol.infeasible_count
       << ", rank-deficient " << sol.rank_deficient_count << ")\n";
    if (sol.oracle_fallback) os << "oracle_fallback 1\n";
    if (verify) {
      os << "oracle_distance " << qmix::format_number(oracle_distance) << "\n";
      os << "verify_discrepancy " << qmix::format_number(discrepancy) << "\n";
    }
  }
  return verify && discrepancy > 1e-6 ? kExitVerify : kExitOk;
}

std::vector<double> uniform_grid(int steps) {
  std::vector<double> grid(steps);
  for (int i = 0; i < steps; ++i) grid[i] = double(i) / (steps - 1);
  return grid;
}

int run_sweep(const std::string& fixture_name, const std::string& variant,
              const std::string& target_a, const std::string& target_b,
              const std::string& set_path, int k_steps, const std::string& out_path) {
  qmix::TargetFamily family;
  qmix::StateSet set;
  if (!fixture_name.empty()) {
    const qmix::Fixture& fx = qmix::find_fixture(fixture_name);
    set = fx.set;
    family = variant.empty() ? fx.variants.front().second : fx.variant(variant);
  } else {
    family.a = qmix::load_state(target_a);
    family.b = qmix::load_state(target_b);
    set = qmix::load_state_set(set_path);
  }
  const auto records = qmix::minimal_support_profile(family, set,
                                                     uniform_grid(k_steps),
                                                     options_from_env());
  Output out(out_path);
  qmix::write_sweep_csv(out.stream(), records);
  return kExitOk;
}

int run_random(int d, int n, std::uint64_t seed, const std::string& out_path) {
  const qmix::StateSet set = qmix::random_state_set(d, n, seed);
  Output out(out_path);
  out.stream() << qmix::state_set_to_json(set).dump(2) << "\n";
  return kExitOk;
}

int run_fixtures(bool list, const std::string& dump_name) {
  if (list) {
    for (const qmix::Fixture& f : qmix::fixture_catalog()) {
      std::cout << f.name << " d=" << f.set.dim << " N=" << f.set.size()
                << " variants=";
      for (std::size_t i = 0; i < f.variants.size(); ++i) {
        if (i) std::cout << ',';
        std::cout << f.variants[i].first;
      }
      std::cout << "\n";
    }
    return kExitOk;
  }
  const qmix::Fixture& f = qmix::find_fixture(dump_name);
  nlohmann::json j = qmix::state_set_to_json(f.set);
  j["name"] = f.name;
  for (const auto& [id, fam] : f.variants) {
    j["targets"][id] = {{"a", qmix::state_to_json(fam.a)},
                        {"b", qmix::state_to_json(fam.b)},
                        {"description", fam.description}};
  }
  if (!f.notes.empty()) j["notes"] = f.notes;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closest convex mixture of quantum states under the "
               "squared Hilbert-Schmidt distance"};
  app.require_subcommand(1);

  std::string target_path, set_path, out_path;
  bool strict = false, verify = false, as_json = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve one target against a state set");
  solve_cmd->add_option("--target", target_path, "target state JSON file")->required();
  solve_cmd->add_option("--set", set_path, "state set JSON file")->required();
  solve_cmd->add_flag("--strict", strict, "require physically valid states");
  solve_cmd->add_flag("--verify", verify, "cross-check against the numerical oracle");
  solve_cmd->add_option("--out", out_path, "write the report to a file");
  solve_cmd->add_flag("--json", as_json, "emit the report as JSON");

  std::string fixture_name, variant, target_a, target_b, sweep_set, sweep_out;
  int k_steps = 101;
  auto* sweep_cmd = app.add_subcommand("sweep", "solve a k-interpolated target family");
  sweep_cmd->add_option("--fixture", fixture_name, "built-in fixture name");
  sweep_cmd->add_option("--variant", variant, "fixture target variant");
  sweep_cmd->add_option("--target-a", target_a, "k=1 endpoint state file");
  sweep_cmd->add_option("--target-b", target_b, "k=0 endpoint state file");
  sweep_cmd->add_option("--set", sweep_set, "state set JSON file");
  sweep_cmd->add_option("--k-steps", k_steps, "grid points including endpoints")
      ->check(CLI::Range(2, 1000000));
  sweep_cmd->add_option("--out", sweep_out, "CSV output file");

  int rand_d = 0, rand_n = 0;
  std::uint64_t rand_seed = 0;
  std::string rand_out;
  auto* random_cmd = app.add_subcommand("random", "generate a random Ginibre state set");
  random_cmd->add_option("--d", rand_d, "Hilbert-space dimension")->required()
      ->check(CLI::Range(2, 64));
  random_cmd->add_option("--n", rand_n, "number of states")->required()
      ->check(CLI::Range(1, 100000));
  random_cmd->add_option("--seed", rand_seed, "generator seed")->required();
  random_cmd->add_option("--out", rand_out, "output JSON file");

  bool list = false;
  std::string dump_name;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "inspect built-in fixtures");
  fixtures_cmd->add_flag("--list", list, "list available fixtures");
  fixtures_cmd->add_option("--dump", dump_name, "dump one fixture as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      return run_solve(target_path, set_path, strict, verify, out_path, as_json);
    }
    if (sweep_cmd->parsed()) {
      if (fixture_name.empty() && (target_a.empty() || target_b.empty() ||
                                   sweep_set.empty())) {
        std::cerr << "sweep needs --fixture or all of --target-a/--target-b/--set\n";
        return kExitParse;
      }
      return run_sweep(fixture_name, variant, target_a, target_b, sweep_set,
                       k_steps, sweep_out);
    }
    if (random_cmd->parsed()) {
      return run_random(rand_d, rand_n, rand_seed, rand_out);
    }
    if (fixtures_cmd->parsed()) {
      if (!list && dump_name.empty()) {
        std::cerr << "fixtures needs --list or --dump NAME\n";
        return kExitParse;
      }
      return run_fixtures(list, dump_name);
    }
  } catch (const qmix::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
