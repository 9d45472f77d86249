#include "commands.hpp"

#include <random>
#include <sstream>

#include "glround/bench.hpp"
#include "glround/cgep.hpp"
#include "glround/dynamics.hpp"
#include "glround/errors.hpp"
#include "glround/json_codec.hpp"
#include "glround/word_solver.hpp"
#include "records.hpp"

namespace glround::cli {

namespace {

using nlohmann::json;

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void set_default(json& config, const char* key, json value) {
  if (!config.contains(key) || config[key].is_null()) config[key] = std::move(value);
}

template <class T>
T get(const json& config, const char* key) {
  try {
    return config.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config field '") + key + "' is missing or has the wrong type");
  }
}

std::filesystem::path output_path(const Context& ctx, const std::string& name) {
  const std::filesystem::path p(name);
  return p.is_absolute() ? p : ctx.output_dir / p;
}

ExactVector parse_vector(const std::string& text) {
  ExactVector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
  if (v.empty()) throw ValidationError("vector '" + text + "' has no entries");
  return v;
}

std::ostream& out(const Context& ctx) { return *ctx.out; }

bool wants_json(const Context& ctx) { return ctx.format == "json" || ctx.format == "both"; }
bool wants_csv(const Context& ctx) { return ctx.format == "csv" || ctx.format == "both"; }

}  // namespace

json resolve_config(const std::string& command, json config) {
  if (config.is_null()) config = json::object();
  if (!config.is_object()) throw ValidationError("config must be a JSON object");
  if (command == "gen") {
    set_default(config, "set", "example1");
    set_default(config, "v", "1,0,0");
    if (!config.contains("L")) throw ValidationError("gen needs L");
    set_default(config, "seed", fresh_seed());
    set_default(config, "out", "instance.json");
  } else if (command == "solve") {
    if (!config.contains("instance")) throw ValidationError("solve needs an instance file");
    set_default(config, "t", 0);
    set_default(config, "tail_budget", 1e7);
    set_default(config, "out", "solve.json");
  } else if (command == "bench") {
    set_default(config, "set", "example1");
    set_default(config, "v", "1,0,0");
    set_default(config, "L", json::array({2, 10, 50, 100, 200}));
    set_default(config, "trials", 100);
    set_default(config, "t", 0);
    set_default(config, "seed", fresh_seed());
  } else if (command == "diagnose") {
    set_default(config, "set", "example1");
    set_default(config, "S_n", json::array({2}));
    set_default(config, "alpha", json::array({0.4}));
    set_default(config, "mesh", 2000);
    set_default(config, "mesh_budget", 1e9);
    set_default(config, "lyapunov_n", 200);
    set_default(config, "lyapunov_trials", 100);
    set_default(config, "max_word_len", 4);
    set_default(config, "seed", fresh_seed());
    if (!config.contains("bound")) config["bound"] = nullptr;
  } else if (command == "tsp") {
    if (!config.contains("graph")) config["graph"] = nullptr;
    if (!config.contains("random")) config["random"] = nullptr;
    if (config["graph"].is_null() && config["random"].is_null())
      throw ValidationError("tsp needs a graph file or a random graph size");
    if (config["random"].is_object()) {
      auto& r = config["random"];
      set_default(r, "lo", 1);
      set_default(r, "hi", 20);
      set_default(r, "seed", fresh_seed());
    }
    set_default(config, "variant", "exact");
    set_default(config, "verify", false);
    set_default(config, "budget", 1e7);
    set_default(config, "out", "cgep_instance.json");
  } else {
    throw ValidationError("unknown command '" + command + "'");
  }
  return config;
}

Outcome run_command(const std::string& command, const json& config, const Context& ctx) {
  if (command == "gen") return cmd_gen(config, ctx);
  if (command == "solve") return cmd_solve(config, ctx);
  if (command == "bench") return cmd_bench(config, ctx);
  if (command == "diagnose") return cmd_diagnose(config, ctx);
  if (command == "tsp") return cmd_tsp(config, ctx);
  throw ValidationError("unknown command '" + command + "'");
}

Outcome cmd_gen(const json& config, const Context& ctx) {
  const auto seed = get<std::uint64_t>(config, "seed");
  out(ctx) << "master_seed: " << seed << '\n';
  auto set = std::make_shared<const GeneratorSet>(load_generator_set(get<std::string>(config, "set")));
  const auto inst = make_instance(set, parse_vector(get<std::string>(config, "v")), get<std::size_t>(config, "L"), seed);
  const json j = inst.to_json();
  const std::string text = j.dump(2) + "\n";
  const auto name = get<std::string>(config, "out");
  write_text(output_path(ctx, name), text);
  std::size_t digits = 0;
  for (const auto& x : inst.w) digits = std::max(digits, Integer(abs(x.get_num())).get_str().size());
  const std::string digest = digest_hex(text);
  out(ctx) << "instance: " << output_path(ctx, name).string() << '\n' << "digest: " << digest << '\n';
  return {kOk, {{"instance_file", name}, {"digest", digest}, {"master_seed", seed}, {"w_max_digits", digits}}};
}

Outcome cmd_solve(const json& config, const Context& ctx) {
  WordInstance inst;
  try {
    inst = WordInstance::from_json(read_json(get<std::string>(config, "instance")));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
  SolverConfig cfg;
  cfg.t = get<std::size_t>(config, "t");
  cfg.tail_budget = get<double>(config, "tail_budget");
  const auto result = norm_reduce_solve(inst, cfg);
  const auto name = get<std::string>(config, "out");
  write_json(output_path(ctx, name), result.to_json());
  out(ctx) << "status: " << to_string(result.status) << '\n' << "word: " << encode_word(result.word).dump() << '\n';
  return {result.status == SolveStatus::failed ? kSolveFailed : kOk,
          {{"status", to_string(result.status)},
           {"word", encode_word(result.word)},
           {"steps_taken", result.steps_taken},
           {"result_file", name}}};
}

Outcome cmd_bench(const json& config, const Context& ctx) {
  const auto seed = get<std::uint64_t>(config, "seed");
  out(ctx) << "master_seed: " << seed << '\n';
  auto set = std::make_shared<const GeneratorSet>(load_generator_set(get<std::string>(config, "set")));
  const ExactVector v = parse_vector(get<std::string>(config, "v"));
  SolverConfig cfg;
  cfg.t = get<std::size_t>(config, "t");
  const auto trials = get<std::size_t>(config, "trials");
  if (trials < 1) throw ValidationError("bench needs trials >= 1");
  std::vector<BenchRow> rows;
  out(ctx) << kBenchCsvHeader << '\n';
  for (auto L : get<std::vector<std::size_t>>(config, "L")) {
    rows.push_back(bench_success_rate(set, v, L, trials, cfg, seed));
    out(ctx) << bench_csv_row(rows.back()) << std::endl;
  }
  if (wants_csv(ctx)) write_text(ctx.output_dir / "bench.csv", bench_csv(rows));
  const json j = bench_json(rows);
  if (wants_json(ctx)) write_json(ctx.output_dir / "bench.json", j);
  return {kOk, j};
}

Outcome cmd_diagnose(const json& config, const Context& ctx) {
  const auto seed = get<std::uint64_t>(config, "seed");
  out(ctx) << "master_seed: " << seed << '\n';
  const GeneratorSet set = load_generator_set(get<std::string>(config, "set"));
  DiagnosticsOptions opt;
  opt.s_lengths = get<std::vector<std::size_t>>(config, "S_n");
  opt.alphas = get<std::vector<double>>(config, "alpha");
  opt.mesh_resolution = get<std::size_t>(config, "mesh");
  opt.mesh_budget = get<double>(config, "mesh_budget");
  opt.lyapunov_n = get<std::size_t>(config, "lyapunov_n");
  opt.lyapunov_trials = get<std::size_t>(config, "lyapunov_trials");
  opt.contracting_max_len = get<std::size_t>(config, "max_word_len");
  opt.seed = seed;
  if (config.at("bound").is_object()) {
    const auto& b = config.at("bound");
    DiagnosticsOptions::BoundInputs in;
    in.L = get<std::size_t>(b, "L");
    in.t = b.value("t", std::size_t{0});
    in.alpha = b.value("alpha", 0.4);
    in.K = b.value("K", 7.0);
    in.rho = b.value("rho", 0.83);
    opt.bound = in;
  }
  const auto report = diagnose(set, opt);
  const json j = report.to_json();
  if (wants_json(ctx)) write_json(ctx.output_dir / "diagnostics.json", j);
  if (wants_csv(ctx)) write_text(ctx.output_dir / "s_table.csv", report.s_table_csv());
  auto& o = out(ctx);
  o.precision(10);
  o << "N: " << report.N << (report.a3_holds ? "" : "  (N <= 1)") << '\n';
  o << "ell_max: " << report.ell_max << '\n';
  o << "contracting witness: "
    << (report.contracting_witness ? "length " + std::to_string(report.contracting_witness->word.size()) : "none")
    << '\n';
  o << "irreducibility: " << to_string(report.irreducibility.flag) << " (span rank " << report.irreducibility.span_rank
    << ")\n";
  o << "gamma1: " << report.lyapunov.gamma1 << "  gamma2: " << report.lyapunov.gamma2
    << "  std_err: " << report.lyapunov.combined_std_err() << '\n';
  o << report.s_table_csv();
  return {kOk, j};
}

Outcome cmd_tsp(const json& config, const Context& ctx) {
  std::optional<TspGraph> graph;
  if (!config.at("graph").is_null()) {
    graph = load_graph(get<std::string>(config, "graph"));
  } else {
    const auto& r = config.at("random");
    const auto seed = get<std::uint64_t>(r, "seed");
    out(ctx) << "master_seed: " << seed << '\n';
    graph = random_graph(get<std::size_t>(r, "n"), get<std::int64_t>(r, "lo"), get<std::int64_t>(r, "hi"), seed);
  }
  const Variant variant = parse_variant(get<std::string>(config, "variant"));
  const auto params = choose_params(*graph, variant);
  const auto inst = build_instance(*graph, params);
  const auto name = get<std::string>(config, "out");
  write_json(output_path(ctx, name), inst.to_json());
  out(ctx) << "instance: " << output_path(ctx, name).string() << " (d = " << inst.dim() << ", "
           << inst.generators.size() << " generators)\n";
  json payload{{"instance_file", name},
               {"graph", graph->to_json()},
               {"params", params.to_json()},
               {"conditions", verify_conditions(params).to_json()}};
  if (get<bool>(config, "verify")) {
    CgepOptions opt;
    opt.budget = get<double>(config, "budget");
    const auto report = verify_reduction(inst, opt);
    const json rj = report.to_json();
    write_json(ctx.output_dir / "verify.json", rj);
    out(ctx) << "cgep cycle weight: " << (report.cgep_weight ? std::to_string(*report.cgep_weight) : "none")
             << "  tsp weight: " << report.tsp.weight << "  match: " << (report.match ? "true" : "false") << '\n';
    payload["verification"] = rj;
  }
  return {kOk, payload};
}

}  // namespace glround::cli
