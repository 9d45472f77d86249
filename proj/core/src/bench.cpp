#include "glround/bench.hpp"

#include <chrono>
#include <cstdio>

#include "glround/json_codec.hpp"
#include "glround/parallel.hpp"
#include "glround/random.hpp"

namespace glround {

BenchRow bench_success_rate(std::shared_ptr<const GeneratorSet> set, const ExactVector& v, std::size_t L,
                            std::size_t trials, const SolverConfig& cfg, std::uint64_t master_seed) {
  if (trials == 0) throw DomainError("bench_success_rate: trials must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  std::vector<unsigned char> outcome(trials, 0);  // bit 0: functional, bit 1: strict
  parallel_for(trials, [&](std::size_t i) {
    const auto inst = make_instance(set, v, L, derive_seed(master_seed, i));
    const auto result = norm_reduce_solve(inst, cfg);
    outcome[i] = static_cast<unsigned char>((functional_success(result) ? 1 : 0) | (strict_recovery(result) ? 2 : 0));
  });
  BenchRow row;
  row.L = L;
  row.trials = trials;
  row.master_seed = master_seed;
  for (unsigned char o : outcome) {
    row.successes += o & 1;
    row.strict_recoveries += (o >> 1) & 1;
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::string bench_csv_row(const BenchRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%.3f,%llu", row.L, row.trials, row.successes,
                row.strict_recoveries, row.seconds, static_cast<unsigned long long>(row.master_seed));
  return buf;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = std::string(kBenchCsvHeader) + "\n";
  for (const auto& r : rows) out += bench_csv_row(r) + "\n";
  return out;
}

nlohmann::json bench_json(const std::vector<BenchRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"L", r.L},
                   {"trials", r.trials},
                   {"successes", r.successes},
                   {"strict_recoveries", r.strict_recoveries},
                   {"success_rate", r.success_rate()},
                   {"seconds", r.seconds},
                   {"master_seed", r.master_seed}});
  }
  return {{"schema_version", kSchemaVersion}, {"rows", std::move(arr)}};
}

}  // namespace glround
