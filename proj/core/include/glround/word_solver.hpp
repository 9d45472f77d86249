#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glround/generator_set.hpp"

namespace glround {

/// A Word-Problem-on-Vectors instance: find a word of length <= L mapping v to w.
struct WordInstance {
  std::shared_ptr<const GeneratorSet> set;
  ExactVector v;
  ExactVector w;
  std::size_t L = 0;
  std::optional<Word> hidden_word;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  /// Validates the generator set and the vectors; throws ValidationError.
  static WordInstance from_json(const nlohmann::json& j);
};

struct SolverConfig {
  /// Length of the exhaustive-search tail. Ties at the argmin go to the lowest index.
  std::size_t t = 0;
  double tail_budget = 1e7;
};

enum class SolveStatus { recovered, wrong_word_found, failed };

std::string to_string(SolveStatus s);
SolveStatus parse_status(const std::string& s);

struct StepChoice {
  std::size_t chosen = 0;
  /// |g_i^{-1} w| / |w| for every candidate i, in floating point.
  std::vector<double> norm_ratios;
  /// Exact comparison: |w_next|^2 < |w|^2.
  bool norm_decreased = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::failed;
  Word word;
  std::size_t steps_taken = 0;
  std::vector<StepChoice> per_step_choices;

  nlohmann::json to_json() const;
  static SolveResult from_json(const nlohmann::json& j);
};

/// L i.i.d. uniform indices in [0, k) from a SplitMix64 stream seeded with `seed`.
Word sample_word(const GeneratorSet& set, std::size_t L, std::uint64_t seed);

/// w = g_{s_1} ... g_{s_L} v for a sampled hidden word. Throws ValidationError
/// for a zero or non-integer v.
WordInstance make_instance(std::shared_ptr<const GeneratorSet> set, ExactVector v, std::size_t L, std::uint64_t seed);

/// Norm Reduction: repeatedly replace w by the candidate g_i^{-1} w of least
/// exact squared norm until w = v or L - t steps were taken, then search the
/// last t letters exhaustively.
SolveResult norm_reduce_solve(const WordInstance& inst, const SolverConfig& cfg = {});

/// Shortest word (lexicographically least among shortest) of length <= max_len
/// with g_word v = w, or nullopt. Throws BudgetExceededError when k^max_len > budget.
std::optional<Word> brute_force_solve(const GeneratorSet& set, const ExactVector& v, const ExactVector& w,
                                      std::size_t max_len, double budget = 1e7);

/// Success grades of a finished solve against an instance.
bool functional_success(const SolveResult& r);
bool strict_recovery(const SolveResult& r);

/// 1-based word encoding used in files.
nlohmann::json encode_word(const Word& w);
Word decode_word(const nlohmann::json& j, std::size_t k);

}  // namespace glround
