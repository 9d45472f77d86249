#pragma once

// Exhaustive closest-word search for reduction instances and the end-to-end
// check against exhaustive TSP.

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "glround/reduction.hpp"

namespace glround {

/// A word whose edges form a Hamiltonian cycle from vertex 1.
struct HamiltonianWord {
  std::vector<std::size_t> word;   // generator slots
  std::vector<std::size_t> cycle;  // 0-based vertices
  std::int64_t weight = 0;
  Rational distance_sq;
};

struct CgepStats {
  std::uint64_t words = 0;
  std::uint64_t non_double_touch = 0;
  /// Words not touching every vertex twice whose distance^2 fell below K^2.
  std::uint64_t separation_violations = 0;
  std::uint64_t hamiltonian = 0;
  /// Hamiltonian words whose distance^2 exceeded
  /// (n alpha beta^(n-1) 2^n)^2 + (n epsilon)^2 + weight^2.
  std::uint64_t hamiltonian_bound_violations = 0;
  std::vector<HamiltonianWord> cycles;  // filled when requested
};

struct CgepResult {
  std::vector<std::size_t> word;  // generator slots, 0-based
  Rational distance_sq;           // exact for exact_rational params
  double distance_sq_approx = 0.0;
  bool exact = false;
  CgepStats stats;
};

struct CgepOptions {
  double budget = 1e7;  // GLROUND_BUDGET overrides
  bool collect_cycles = false;
};

/// Exhaustive search over words of length 0..L. Ties go to the
/// lexicographically least word (slot order). Exact instances are searched in
/// scaled integer arithmetic; float variants in double. Throws
/// BudgetExceededError when sum_l (n(n-1))^l exceeds the budget.
CgepResult cgep_brute_force(const CgepInstance& inst, const CgepOptions& options = {});

/// Exact (n(n-1))^L word count that cgep_brute_force compares against the budget.
double cgep_required_budget(const CgepInstance& inst);

std::vector<Edge> word_edges(const CgepInstance& inst, const std::vector<std::size_t>& word);

struct VerificationReport {
  ConditionReport conditions;
  std::vector<Edge> cgep_word;
  CycleDecoding decoded;
  std::optional<std::int64_t> cgep_weight;
  TspSolution tsp;
  bool match = false;
  CgepResult search;

  nlohmann::json to_json() const;
};

VerificationReport verify_reduction(const CgepInstance& inst, const CgepOptions& options = {});

}  // namespace glround
