#pragma once

// Construction of the closest-group-element instance encoding a TSP instance:
// parameter selection, edge generators, target matrix and their checks.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glround/matrix.hpp"
#include "glround/rational.hpp"
#include "glround/tsp_graph.hpp"

namespace glround {

enum class Variant { i, ii, iii, exact_rational };
std::string to_string(Variant v);
/// Accepts "i", "ii", "iii", "exact" and "exact_rational".
Variant parse_variant(const std::string& s);

/// Parameter bundle. Every value is stored as an exact rational; for the
/// float variants these are the exact values of the doubles the formulas
/// produced, and `exact()` is false.
struct ReductionParams {
  Variant variant = Variant::exact_rational;
  std::size_t n = 0;
  Rational alpha, beta, epsilon, K, T;
  Integer m, M;

  bool exact() const noexcept { return variant == Variant::exact_rational; }
  nlohmann::json to_json() const;
  static ReductionParams from_json(const nlohmann::json& j);
  friend bool operator==(const ReductionParams&, const ReductionParams&) = default;
};

struct HamiltonianBounds {
  Integer m;  // n * lightest edge
  Integer M;  // canonical cycle weight + 1
};

/// M is always the canonical cycle weight plus one, so M >= m_0 + 1 holds
/// for the true optimum m_0.
HamiltonianBounds hamiltonian_bounds(const TspGraph& g);

/// Throws ValidationError naming the violated condition if the chosen
/// parameters fail verification.
ReductionParams choose_params(const TspGraph& g, Variant variant);

struct ConditionResult {
  std::string name;
  std::string statement;
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;       // rhs - lhs
  std::string exact_slack;  // set when evaluated exactly
};

struct ConditionReport {
  bool exact = false;
  std::vector<ConditionResult> conditions;
  bool all_hold() const;
  /// First violated condition, if any.
  std::optional<std::string> first_violation() const;
  nlohmann::json to_json() const;
};

/// Conditions 1-3 and the approximation hypothesis with factor A.
/// Exact variants are evaluated in rational arithmetic with the strict
/// inequality kept strict; float variants are evaluated in double with a
/// relative tolerance of 1e-9 on every inequality.
ConditionReport verify_conditions(const ReductionParams& p, const Rational& A = 1);

/// Weight carried by generator rows: w_e * T.
Rational scaled_weight(const TspGraph& g, const Edge& e, const ReductionParams& p);

/// M_e = alpha I + beta E_ij (n x n).
ExactMatrix edge_block(const Edge& e, const ReductionParams& p);
/// The (2n+3) x (2n+3) edge generator. Throws DomainError when from == to.
ExactMatrix build_generator(const TspGraph& g, const Edge& e, const ReductionParams& p);
ExactMatrix build_target(const TspGraph& g, const ReductionParams& p);

struct WordFeatures {
  ExactMatrix m_product;  // product of the M_e blocks
  ExactVector touch;      // sum of v_e
  Rational weight;        // sum of w_e
};

/// Multiplies the full generators, extracts the three feature blocks and
/// compares them against the directly computed block product and sums. Any
/// mismatch, or a nonzero off-block entry, throws ConsistencyError.
WordFeatures word_to_features(const std::vector<Edge>& word, const ReductionParams& p, const TspGraph& g);

/// True when the edges trace a path, each starting where the previous ended.
bool traces_path(const std::vector<Edge>& edges);

/// Computes the M_e product exactly and checks every entry against
/// alpha beta^(l-1) 2^l, after subtracting beta^l at (i_1, j_l) for paths.
/// Throws DomainError for more than 12 edges.
bool crude_detect_bound_check(const std::vector<Edge>& edges, const ReductionParams& p);

/// Generated instance: one generator per directed edge, in the order of
/// TspGraph::directed_edges().
struct CgepInstance {
  TspGraph graph;
  ReductionParams params;
  std::vector<Edge> edge_index;
  std::vector<ExactMatrix> generators;
  ExactMatrix target;
  std::size_t L = 0;

  std::size_t dim() const { return 2 * graph.n() + 3; }
  nlohmann::json to_json() const;
  static CgepInstance from_json(const nlohmann::json& j);
};

CgepInstance build_instance(const TspGraph& g, const ReductionParams& p);

}  // namespace glround
