#pragma once

// Command implementations. Each takes its fully resolved config (all
// defaults filled in) and returns the payload stored in the run record.

#include <filesystem>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

namespace glround::cli {

enum ExitCode : int {
  kOk = 0,
  kSolveFailed = 1,
  kInputError = 2,
  kBudgetExceeded = 3,
  kInternalError = 4,
};

struct Context {
  std::filesystem::path output_dir;
  std::string format = "both";  // json, csv or both
  std::ostream* out = nullptr;
};

struct Outcome {
  int exit_code = kOk;
  nlohmann::json payload;
};

/// Fills defaults and draws a fresh master seed where the config has none.
nlohmann::json resolve_config(const std::string& command, nlohmann::json config);

Outcome run_command(const std::string& command, const nlohmann::json& config, const Context& ctx);

Outcome cmd_gen(const nlohmann::json& config, const Context& ctx);
Outcome cmd_solve(const nlohmann::json& config, const Context& ctx);
Outcome cmd_bench(const nlohmann::json& config, const Context& ctx);
Outcome cmd_diagnose(const nlohmann::json& config, const Context& ctx);
Outcome cmd_tsp(const nlohmann::json& config, const Context& ctx);

}  // namespace glround::cli
