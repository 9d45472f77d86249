#include "glround/tsp_graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "glround/errors.hpp"
#include "glround/random.hpp"

namespace glround {

TspGraph::TspGraph(std::vector<std::vector<std::int64_t>> weights) : w_(std::move(weights)) {
  const std::size_t n = w_.size();
  if (n < 3) throw ValidationError("graph needs at least 3 vertices, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (w_[i].size() != n) throw ValidationError("weight row " + std::to_string(i + 1) + " has wrong length");
    if (w_[i][i] != 0) throw ValidationError("weight diagonal entry " + std::to_string(i + 1) + " is not zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (w_[i][j] <= 0)
        throw ValidationError("weight (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not positive");
      if (w_[i][j] != w_[j][i])
        throw ValidationError("weights (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") not symmetric");
    }
  }
}

TspGraph TspGraph::from_upper(std::size_t n, const std::vector<std::int64_t>& upper) {
  if (n < 3) throw ValidationError("graph needs at least 3 vertices");
  if (upper.size() != n * (n - 1) / 2)
    throw ValidationError("expected " + std::to_string(n * (n - 1) / 2) + " upper-triangular weights, got " +
                          std::to_string(upper.size()));
  std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, 0));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = upper[k++];
  return TspGraph(std::move(w));
}

TspGraph TspGraph::from_json(const nlohmann::json& j) {
  try {
    const auto& weights = j.at("weights");
    std::vector<std::int64_t> upper;
    for (const auto& entry : weights) {
      if (entry.is_array()) {
        for (const auto& x : entry) upper.push_back(x.get<std::int64_t>());
      } else {
        upper.push_back(entry.get<std::int64_t>());
      }
    }
    std::size_t n = 0;
    if (j.contains("n")) {
      n = j.at("n").get<std::size_t>();
    } else {
      while (n * (n - 1) / 2 < upper.size()) ++n;
    }
    return from_upper(n, upper);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
}

TspGraph TspGraph::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::int64_t>> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::int64_t> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("graph text: line " + std::to_string(rows.size() + 1) + ": bad integer '" + tok + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("graph text: no weights");
  const std::size_t n = rows.front().size() + 1;
  std::vector<std::int64_t> upper;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n - 1 - i)
      throw ParseError("graph text: line " + std::to_string(i + 1) + " should hold " + std::to_string(n - 1 - i) +
                       " weights");
    upper.insert(upper.end(), rows[i].begin(), rows[i].end());
  }
  return from_upper(n, upper);
}

nlohmann::json TspGraph::to_json() const {
  std::vector<std::int64_t> upper;
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = i + 1; j < n(); ++j) upper.push_back(w_[i][j]);
  return {{"n", n()}, {"weights", upper}};
}

std::int64_t TspGraph::min_weight() const {
  std::int64_t best = w_[0][1];
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = i + 1; j < n(); ++j) best = std::min(best, w_[i][j]);
  return best;
}

std::int64_t TspGraph::canonical_cycle_weight() const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n(); ++i) total += w_[i][(i + 1) % n()];
  return total;
}

std::int64_t TspGraph::cycle_weight(const std::vector<std::size_t>& cycle) const {
  std::int64_t total = 0;
  for (std::size_t r = 0; r + 1 < cycle.size(); ++r) total += weight(cycle[r], cycle[r + 1]);
  return total;
}

TspGraph TspGraph::scaled(std::int64_t factor) const {
  if (factor <= 0) throw DomainError("scale factor must be positive");
  auto w = w_;
  for (auto& row : w)
    for (auto& x : row) x *= factor;
  return TspGraph(std::move(w));
}

std::vector<Edge> TspGraph::directed_edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < n(); ++j)
      if (i != j) out.push_back({i, j});
  return out;
}

TspGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return TspGraph::from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("graph JSON: ") + e.what());
    }
  }
  return TspGraph::from_text(text);
}

TspGraph random_graph(std::size_t n, std::int64_t lo, std::int64_t hi, std::uint64_t seed) {
  if (lo < 1 || hi < lo) throw DomainError("random_graph: need 1 <= lo <= hi");
  SplitMix64 rng(seed);
  std::vector<std::int64_t> upper;
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  for (std::size_t k = 0; k < n * (n - 1) / 2; ++k) upper.push_back(lo + static_cast<std::int64_t>(rng.uniform_index(span)));
  return TspGraph::from_upper(n, upper);
}

std::vector<TspSolution> all_cycles(const TspGraph& g) {
  const std::size_t n = g.n();
  if (n > 10) throw DomainError("cycle enumeration limited to n <= 10, got n = " + std::to_string(n));
  std::vector<std::size_t> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1);
  std::vector<TspSolution> out;
  do {
    if (rest.front() > rest.back()) continue;
    TspSolution s;
    s.cycle.push_back(0);
    s.cycle.insert(s.cycle.end(), rest.begin(), rest.end());
    s.cycle.push_back(0);
    s.weight = g.cycle_weight(s.cycle);
    out.push_back(std::move(s));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

TspSolution tsp_brute_force(const TspGraph& g) {
  auto cycles = all_cycles(g);
  // Enumeration is in lexicographic order, so the first minimum is the lex-least.
  std::size_t best = 0;
  for (std::size_t c = 1; c < cycles.size(); ++c)
    if (cycles[c].weight < cycles[best].weight) best = c;
  return std::move(cycles[best]);
}

CycleDecoding extract_cycle(const std::vector<Edge>& edges, std::size_t n) {
  CycleDecoding out;
  if (edges.empty()) {
    out.failure = "empty word";
    return out;
  }
  for (const auto& e : edges)
    if (e.from >= n || e.to >= n || e.from == e.to) {
      out.failure = "invalid edge";
      return out;
    }
  for (std::size_t r = 0; r + 1 < edges.size(); ++r)
    if (edges[r].to != edges[r + 1].from) {
      out.failure = "disconnected";
      return out;
    }
  std::vector<char> touched(n, 0);
  for (const auto& e : edges) touched[e.from] = touched[e.to] = 1;
  for (std::size_t v = 0; v < n; ++v)
    if (!touched[v]) {
      out.failure = "vertex " + std::to_string(v + 1) + " untouched";
      return out;
    }
  if (edges.front().from != 0) {
    out.failure = "does not start at vertex 1";
    return out;
  }
  if (edges.back().to != 0) {
    out.failure = "does not return to vertex 1";
    return out;
  }
  if (edges.size() != n) {
    out.failure = "revisits a vertex";
    return out;
  }
  std::vector<char> seen(n, 0);
  for (const auto& e : edges) {
    if (seen[e.to]) {
      out.failure = "revisits a vertex";
      return out;
    }
    seen[e.to] = 1;
  }
  out.ok = true;
  out.cycle.push_back(0);
  for (const auto& e : edges) out.cycle.push_back(e.to);
  return out;
}

nlohmann::json edges_to_json(const std::vector<Edge>& edges) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : edges) out.push_back({e.from + 1, e.to + 1});
  return out;
}

nlohmann::json vertices_to_json(const std::vector<std::size_t>& vertices) {
  nlohmann::json out = nlohmann::json::array();
  for (auto v : vertices) out.push_back(v + 1);
  return out;
}

}  // namespace glround
