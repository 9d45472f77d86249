#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glround/matrix.hpp"

namespace glround {

/// Generator indices, 0-based internally. A word s acts on v as
/// g[s[0]] * g[s[1]] * ... * g[s.back()] * v.
using Word = std::vector<std::size_t>;

/// Ordered, immutable set S = {g_1, ..., g_k} of invertible integer matrices
/// with exact inverses cached at construction.
class GeneratorSet {
 public:
  /// Validates squareness, common dimension, integrality and invertibility.
  /// Throws ValidationError naming the offending matrix and entry.
  explicit GeneratorSet(std::vector<ExactMatrix> generators, std::vector<std::string> labels = {});

  /// Reads {generators: [...], labels?: [...]} in the shared matrix encoding.
  static GeneratorSet from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t size() const noexcept { return generators_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  const ExactMatrix& generator(std::size_t i) const { return generators_.at(i); }
  const ExactMatrix& inverse(std::size_t i) const { return inverses_.at(i); }
  const RealMatrix& real_generator(std::size_t i) const { return real_generators_.at(i); }
  const RealMatrix& real_inverse(std::size_t i) const { return real_inverses_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  ExactVector apply(const Word& word, const ExactVector& v) const;
  ExactMatrix product(const Word& word) const;
  RealMatrix real_product(const Word& word) const;

 private:
  std::size_t dim_ = 0;
  std::vector<ExactMatrix> generators_;
  std::vector<ExactMatrix> inverses_;
  std::vector<RealMatrix> real_generators_;
  std::vector<RealMatrix> real_inverses_;
  std::vector<std::string> labels_;
};

/// Loads a bundled fixture by name ("example1", "example2") or a JSON file path.
/// Fixture files are looked up in $GLROUND_DATA_DIR, then the build-time data directory.
GeneratorSet load_generator_set(const std::string& name_or_path);

std::string fixture_directory();

}  // namespace glround
