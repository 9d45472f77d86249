#include "glround/generator_set.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "glround/json_codec.hpp"

#ifndef GLROUND_SOURCE_DATA_DIR
#define GLROUND_SOURCE_DATA_DIR "data"
#endif
#ifndef GLROUND_INSTALL_DATA_DIR
#define GLROUND_INSTALL_DATA_DIR "/usr/local/share/glround"
#endif

namespace glround {

GeneratorSet::GeneratorSet(std::vector<ExactMatrix> generators, std::vector<std::string> labels)
    : generators_(std::move(generators)), labels_(std::move(labels)) {
  if (generators_.empty()) throw ValidationError("generator set is empty");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < generators_.size(); ++i) labels_.push_back("g" + std::to_string(i + 1));
  }
  if (labels_.size() != generators_.size()) throw ValidationError("label count does not match generator count");

  dim_ = generators_.front().rows();
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& g = generators_[i];
    const std::string name = "generator '" + labels_[i] + "'";
    if (!g.square()) throw ValidationError(name + " is not square");
    if (g.rows() != dim_) throw ValidationError(name + " has dimension " + std::to_string(g.rows()) +
                                                ", expected " + std::to_string(dim_));
    if (dim_ == 0) throw ValidationError(name + " is empty");
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (std::size_t c = 0; c < g.cols(); ++c) {
        if (!is_integer(g(r, c))) {
          throw ValidationError(name + " row " + std::to_string(r + 1) + " col " + std::to_string(c + 1) +
                                ": non-integer entry " + to_string(g(r, c)));
        }
      }
    }
    if (determinant(g) == 0) throw ValidationError(name + " is singular");
    inverses_.push_back(mat_inverse(g));
    real_generators_.push_back(to_real(g));
    real_inverses_.push_back(to_real(inverses_.back()));
  }
}

GeneratorSet GeneratorSet::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("generators")) throw ValidationError("generator set: missing 'generators'");
  const auto& gens = j.at("generators");
  if (!gens.is_array()) throw ValidationError("generator set: 'generators' must be an array");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  std::vector<ExactMatrix> mats;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string name = i < labels.size() ? labels[i] : "g" + std::to_string(i + 1);
    try {
      mats.push_back(decode_matrix(gens[i], "generator '" + name + "'"));
    } catch (const ParseError& e) {
      throw ValidationError(e.what());
    } catch (const DimensionError& e) {
      throw ValidationError("generator '" + name + "': " + e.what());
    }
  }
  if (j.contains("dim") && !mats.empty() && j.at("dim").get<std::size_t>() != mats.front().rows()) {
    throw ValidationError("generator set: 'dim' does not match the generators");
  }
  return GeneratorSet(std::move(mats), std::move(labels));
}

nlohmann::json GeneratorSet::to_json() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : generators_) gens.push_back(encode(g));
  return {{"dim", dim_}, {"generators", std::move(gens)}, {"labels", labels_}};
}

ExactVector GeneratorSet::apply(const Word& word, const ExactVector& v) const {
  ExactVector x = v;
  for (auto it = word.rbegin(); it != word.rend(); ++it) x = mat_vec(generator(*it), x);
  return x;
}

ExactMatrix GeneratorSet::product(const Word& word) const {
  ExactMatrix m = ExactMatrix::identity(dim_);
  for (std::size_t s : word) m = mat_mul(m, generator(s));
  return m;
}

RealMatrix GeneratorSet::real_product(const Word& word) const {
  RealMatrix m = RealMatrix::identity(dim_);
  for (std::size_t s : word) m = mat_mul(m, real_generator(s));
  return m;
}

std::string fixture_directory() {
  if (const char* env = std::getenv("GLROUND_DATA_DIR")) return env;
  if (std::filesystem::exists(GLROUND_SOURCE_DATA_DIR)) return GLROUND_SOURCE_DATA_DIR;
  return GLROUND_INSTALL_DATA_DIR;
}

GeneratorSet load_generator_set(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  fs::path path(name_or_path);
  if (!fs::exists(path)) {
    const fs::path fixture = fs::path(fixture_directory()) / (name_or_path + ".json");
    if (!fs::exists(fixture)) throw ValidationError("no generator set file or fixture named '" + name_or_path + "'");
    path = fixture;
  }
  std::ifstream in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return GeneratorSet::from_json(j);
}

}  // namespace glround
