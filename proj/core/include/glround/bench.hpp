#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glround/word_solver.hpp"

namespace glround {

/// One row of a success-rate table.
struct BenchRow {
  std::size_t L = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;          // any word of length <= L reproducing w
  std::size_t strict_recoveries = 0;  // the hidden word itself
  double seconds = 0.0;
  std::uint64_t master_seed = 0;

  double success_rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

/// Runs `trials` independent make_instance + norm_reduce_solve pairs. Trial i
/// uses seed derive_seed(master_seed, i); counts are merged in trial order.
BenchRow bench_success_rate(std::shared_ptr<const GeneratorSet> set, const ExactVector& v, std::size_t L,
                            std::size_t trials, const SolverConfig& cfg, std::uint64_t master_seed);

inline constexpr const char* kBenchCsvHeader = "L,trials,successes,strict_recoveries,seconds,master_seed";

std::string bench_csv_row(const BenchRow& row);
std::string bench_csv(const std::vector<BenchRow>& rows);
nlohmann::json bench_json(const std::vector<BenchRow>& rows);

}  // namespace glround
