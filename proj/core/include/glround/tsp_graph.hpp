#pragma once

// Weighted complete graphs, exhaustive TSP and cycle decoding of edge sequences.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace glround {

/// Directed edge between 0-based vertices.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Complete graph on n >= 3 vertices with symmetric positive integer weights.
class TspGraph {
 public:
  /// `weights` is the full n x n matrix; throws ValidationError unless it is
  /// symmetric with zero diagonal and positive off-diagonal entries.
  explicit TspGraph(std::vector<std::vector<std::int64_t>> weights);

  /// Upper-triangular list: row i holds w(i, j) for j > i.
  static TspGraph from_upper(std::size_t n, const std::vector<std::int64_t>& upper);
  /// {n, weights}, weights either a flat upper-triangular list or a list of rows.
  static TspGraph from_json(const nlohmann::json& j);
  /// One line per vertex with the weights to higher-numbered vertices; the last line may be empty or absent.
  static TspGraph from_text(const std::string& text);
  nlohmann::json to_json() const;

  std::size_t n() const noexcept { return w_.size(); }
  std::int64_t weight(std::size_t i, std::size_t j) const { return w_.at(i).at(j); }
  std::int64_t weight(const Edge& e) const { return weight(e.from, e.to); }
  std::int64_t min_weight() const;
  /// Weight of 1 -> 2 -> ... -> n -> 1.
  std::int64_t canonical_cycle_weight() const;
  /// Weight of the closed walk through `cycle` (vertex list whose last entry repeats the first).
  std::int64_t cycle_weight(const std::vector<std::size_t>& cycle) const;
  TspGraph scaled(std::int64_t factor) const;

  /// Directed edges (i, j), i != j, in lexicographic order.
  std::vector<Edge> directed_edges() const;

 private:
  std::vector<std::vector<std::int64_t>> w_;
};

/// Loads JSON or the plain-text triangular format, chosen by content.
TspGraph load_graph(const std::string& path);

/// Weights uniform in [lo, hi] from SplitMix64(seed).
TspGraph random_graph(std::size_t n, std::int64_t lo, std::int64_t hi, std::uint64_t seed);

struct TspSolution {
  std::vector<std::size_t> cycle;  // 0-based, starts and ends at vertex 0
  std::int64_t weight = 0;
};

/// Enumerates the (n-1)!/2 cycles through vertex 0; ties go to the
/// lexicographically least vertex sequence. Throws DomainError for n > 10.
TspSolution tsp_brute_force(const TspGraph& g);

/// Every Hamiltonian cycle once, oriented so that the second vertex is below the last.
std::vector<TspSolution> all_cycles(const TspGraph& g);

struct CycleDecoding {
  bool ok = false;
  std::vector<std::size_t> cycle;  // 0-based when ok
  std::string failure;
};

/// Succeeds when the edges form a closed walk from vertex 0 that visits each
/// of the n vertices exactly once.
CycleDecoding extract_cycle(const std::vector<Edge>& edges, std::size_t n);

/// 1-based [[from, to], ...].
nlohmann::json edges_to_json(const std::vector<Edge>& edges);
nlohmann::json vertices_to_json(const std::vector<std::size_t>& vertices);

}  // namespace glround
