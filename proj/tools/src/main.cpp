#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "glround/errors.hpp"
#include "records.hpp"

namespace {

using nlohmann::json;
using namespace glround::cli;

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long x = std::stoll(item, &used);
      if (used != item.size() || x < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(x));
    } catch (const std::exception&) {
      throw glround::ValidationError("bad count '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw glround::ValidationError("bad number '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glround: word problems on vectors, dynamical diagnostics and the TSP reduction"};
  app.set_version_flag("--version", kToolVersion);

  std::string output_dir = "glround-out";
  std::string format = "both";
  std::string config_file;
  std::size_t record_index = 0;
  app.add_option("-o,--output-dir", output_dir, "Directory for result files and records.jsonl");
  app.add_option("--format", format, "Table output: json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  app.add_option("--config", config_file, "Re-run from a saved config or records.jsonl");
  app.add_option("--record", record_index, "1-based line of a records.jsonl to re-run (default: last)");
  app.require_subcommand(0, 1);
  app.fallthrough();

  json config = json::object();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a word-problem instance");
  std::string gen_set = "example1", gen_v = "1,0,0", gen_out = "instance.json";
  std::size_t gen_L = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--set", gen_set, "Fixture name (example1, example2) or generator-set JSON file");
  gen->add_option("--v", gen_v, "Start vector, comma separated");
  gen->add_option("--L", gen_L, "Word length")->required();
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "Master seed (drawn at random when omitted)");
  gen->add_option("--out", gen_out, "Instance file, relative to the output directory");

  // solve
  auto* solve = app.add_subcommand("solve", "Run norm reduction on an instance file");
  std::string solve_instance, solve_out = "solve.json";
  std::size_t solve_t = 0;
  double solve_budget = 1e7;
  solve->add_option("instance,--instance", solve_instance, "Instance JSON file")->required();
  solve->add_option("--t", solve_t, "Length of the exhaustive tail");
  solve->add_option("--tail-budget", solve_budget, "Word budget for the tail search");
  solve->add_option("--out", solve_out, "Result file, relative to the output directory");

  // bench
  auto* bench = app.add_subcommand("bench", "Success rates over random instances");
  std::string bench_set = "example1", bench_v = "1,0,0", bench_L = "2,10,50,100,200";
  std::size_t bench_trials = 100, bench_t = 0;
  std::uint64_t bench_seed = 0;
  bench->add_option("--set", bench_set, "Fixture name or generator-set JSON file");
  bench->add_option("--v", bench_v, "Start vector, comma separated");
  bench->add_option("--L", bench_L, "Comma-separated word lengths");
  bench->add_option("--trials", bench_trials, "Trials per length");
  bench->add_option("--t", bench_t, "Length of the exhaustive tail");
  auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "Master seed (drawn at random when omitted)");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "Dynamical diagnostics of a generator set");
  std::string diag_set = "example1", diag_n = "2", diag_alpha = "0.4";
  std::size_t diag_mesh = 2000, diag_lyap_n = 200, diag_lyap_trials = 100, diag_max_len = 4;
  double diag_mesh_budget = 1e9;
  std::uint64_t diag_seed = 0;
  std::size_t bound_L = 0, bound_t = 0;
  double bound_alpha = 0.4, bound_K = 7.0, bound_rho = 0.83;
  diag->add_option("--set", diag_set, "Fixture name or generator-set JSON file");
  diag->add_option("--S-n", diag_n, "Comma-separated word lengths n for S(n)");
  diag->add_option("--alpha", diag_alpha, "Comma-separated exponents alpha for S(n)");
  diag->add_option("--mesh", diag_mesh, "Mesh points on projective space");
  diag->add_option("--mesh-budget", diag_mesh_budget, "Budget for words x mesh pairs");
  diag->add_option("--lyapunov-n", diag_lyap_n, "Word length for the Lyapunov estimate");
  diag->add_option("--lyapunov-trials", diag_lyap_trials, "Trials for the Lyapunov estimate");
  diag->add_option("--max-word-len", diag_max_len, "Longest word searched for a contraction witness");
  auto* diag_seed_opt = diag->add_option("--seed", diag_seed, "Master seed (drawn at random when omitted)");
  auto* bound_L_opt = diag->add_option("--bound-L", bound_L, "Evaluate the error bound at this L");
  diag->add_option("--bound-t", bound_t, "Tail length t for the error bound");
  diag->add_option("--bound-alpha", bound_alpha, "alpha for the error bound");
  diag->add_option("--bound-K", bound_K, "K for the error bound");
  diag->add_option("--bound-rho", bound_rho, "rho for the t threshold");

  // tsp
  auto* tsp = app.add_subcommand("tsp", "Build (and verify) the TSP reduction instance");
  std::string tsp_graph, tsp_variant = "exact", tsp_out = "cgep_instance.json";
  std::size_t tsp_n = 0;
  std::int64_t tsp_lo = 1, tsp_hi = 20;
  std::uint64_t tsp_seed = 0;
  bool tsp_build = false, tsp_verify = false;
  double tsp_budget = 1e7;
  auto* graph_opt = tsp->add_option("--graph", tsp_graph, "Graph file (JSON or triangular text)");
  auto* random_opt = tsp->add_option("--random-n", tsp_n, "Use a random graph on this many vertices");
  graph_opt->excludes(random_opt);
  tsp->add_option("--weight-lo", tsp_lo, "Smallest random weight");
  tsp->add_option("--weight-hi", tsp_hi, "Largest random weight");
  auto* tsp_seed_opt = tsp->add_option("--seed", tsp_seed, "Seed for the random graph");
  tsp->add_option("--variant", tsp_variant, "Parameter variant")->check(CLI::IsMember({"i", "ii", "iii", "exact"}));
  tsp->add_flag("--build", tsp_build, "Write the instance (always done)");
  tsp->add_flag("--verify", tsp_verify, "Brute-force CGEP and TSP and compare");
  tsp->add_option("--budget", tsp_budget, "Word budget for the CGEP search");
  tsp->add_option("--out", tsp_out, "Instance file, relative to the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  std::string command;
  if (gen->parsed()) {
    command = "gen";
    config = {{"set", gen_set}, {"v", gen_v}, {"L", gen_L}, {"out", gen_out}};
    if (*gen_seed_opt) config["seed"] = gen_seed;
  } else if (solve->parsed()) {
    command = "solve";
    config = {{"instance", solve_instance}, {"t", solve_t}, {"tail_budget", solve_budget}, {"out", solve_out}};
  } else if (bench->parsed()) {
    command = "bench";
    config = {{"set", bench_set}, {"v", bench_v}, {"trials", bench_trials}, {"t", bench_t}};
    if (*bench_seed_opt) config["seed"] = bench_seed;
  } else if (diag->parsed()) {
    command = "diagnose";
    config = {{"set", diag_set},
              {"mesh", diag_mesh},
              {"mesh_budget", diag_mesh_budget},
              {"lyapunov_n", diag_lyap_n},
              {"lyapunov_trials", diag_lyap_trials},
              {"max_word_len", diag_max_len}};
    if (*diag_seed_opt) config["seed"] = diag_seed;
    if (*bound_L_opt)
      config["bound"] = {{"L", bound_L}, {"t", bound_t}, {"alpha", bound_alpha}, {"K", bound_K}, {"rho", bound_rho}};
  } else if (tsp->parsed()) {
    command = "tsp";
    config = {{"variant", tsp_variant}, {"verify", tsp_verify}, {"budget", tsp_budget}, {"out", tsp_out}};
    if (*graph_opt) config["graph"] = tsp_graph;
    if (*random_opt) {
      config["random"] = {{"n", tsp_n}, {"lo", tsp_lo}, {"hi", tsp_hi}};
      if (*tsp_seed_opt) config["random"]["seed"] = tsp_seed;
    }
  }

  Context ctx;
  ctx.out = &std::cout;
  try {
    if (command == "bench") config["L"] = parse_size_list(bench_L);
    if (command == "diagnose") {
      config["S_n"] = parse_size_list(diag_n);
      config["alpha"] = parse_double_list(diag_alpha);
    }
    if (command.empty()) {
      if (config_file.empty()) {
        std::cerr << app.help();
        return kInputError;
      }
      const json saved = load_run_config(config_file, record_index);
      command = saved.at("command").get<std::string>();
      config = saved.at("config");
      if (app.get_option("--output-dir")->count() == 0 && config.contains("output_dir"))
        output_dir = config["output_dir"].get<std::string>();
      if (app.get_option("--format")->count() == 0 && config.contains("format"))
        format = config["format"].get<std::string>();
    }
    config.erase("output_dir");
    config.erase("format");
    config = resolve_config(command, config);
    ctx.output_dir = output_dir;
    ctx.format = format;
    std::filesystem::create_directories(ctx.output_dir);
    const Outcome outcome = run_command(command, config, ctx);
    json recorded = config;
    recorded["output_dir"] = output_dir;
    recorded["format"] = format;
    append_record(ctx.output_dir, command, recorded, outcome.payload);
    return outcome.exit_code;
  } catch (const glround::BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << '\n'
              << "required budget: " << static_cast<long long>(e.required()) << " (budget "
              << static_cast<long long>(e.budget()) << ", raise with GLROUND_BUDGET)\n";
    return kBudgetExceeded;
  } catch (const glround::ConsistencyError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const glround::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternalError;
  } catch (const glround::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}
