#include "glround/word_solver.hpp"

#include <algorithm>
#include <cmath>

#include "glround/json_codec.hpp"
#include "glround/random.hpp"

namespace glround {

using nlohmann::json;

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::recovered:
      return "recovered";
    case SolveStatus::wrong_word_found:
      return "wrong_word_found";
    case SolveStatus::failed:
      return "failed";
  }
  return "failed";
}

SolveStatus parse_status(const std::string& s) {
  if (s == "recovered") return SolveStatus::recovered;
  if (s == "wrong_word_found") return SolveStatus::wrong_word_found;
  if (s == "failed") return SolveStatus::failed;
  throw ParseError("unknown solve status '" + s + "'");
}

json encode_word(const Word& w) {
  json out = json::array();
  for (std::size_t s : w) out.push_back(s + 1);
  return out;
}

Word decode_word(const json& j, std::size_t k) {
  if (!j.is_array()) throw ParseError("word must be an array of generator indices");
  Word w;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ParseError("word entries must be integers");
    const long long s = x.get<long long>();
    if (s < 1 || static_cast<std::size_t>(s) > k) {
      throw ParseError("word index " + std::to_string(s) + " outside [1, " + std::to_string(k) + "]");
    }
    w.push_back(static_cast<std::size_t>(s - 1));
  }
  return w;
}

json WordInstance::to_json() const {
  json j = set->to_json();
  j["schema_version"] = kSchemaVersion;
  j["v"] = encode(v);
  j["w"] = encode(w);
  j["L"] = L;
  j["seed"] = seed;
  if (hidden_word) j["hidden_word"] = encode_word(*hidden_word);
  return j;
}

WordInstance WordInstance::from_json(const json& j) {
  try {
    WordInstance inst;
    inst.set = std::make_shared<const GeneratorSet>(GeneratorSet::from_json(j));
    inst.v = decode_vector(j.at("v"), "v");
    inst.w = decode_vector(j.at("w"), "w");
    inst.L = j.at("L").get<std::size_t>();
    inst.seed = j.value("seed", std::uint64_t{0});
    if (inst.v.size() != inst.set->dim() || inst.w.size() != inst.set->dim()) {
      throw ValidationError("instance: v and w must have dimension " + std::to_string(inst.set->dim()));
    }
    if (is_zero(inst.v)) throw ValidationError("instance: v must be nonzero");
    if (j.contains("hidden_word")) {
      inst.hidden_word = decode_word(j.at("hidden_word"), inst.set->size());
      if (inst.hidden_word->size() > inst.L) throw ValidationError("instance: hidden_word longer than L");
      if (inst.set->apply(*inst.hidden_word, inst.v) != inst.w) {
        throw ValidationError("instance: hidden_word does not map v to w");
      }
    }
    return inst;
  } catch (const ParseError& e) {
    throw ValidationError(std::string("instance: ") + e.what());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance: ") + e.what());
  }
}

json SolveResult::to_json() const {
  json steps = json::array();
  for (std::size_t i = 0; i < per_step_choices.size(); ++i) {
    const auto& c = per_step_choices[i];
    steps.push_back({{"step", i + 1},
                     {"chosen", c.chosen + 1},
                     {"norm_ratios", c.norm_ratios},
                     {"norm_decreased", c.norm_decreased}});
  }
  return {{"schema_version", kSchemaVersion},
          {"status", to_string(status)},
          {"word", encode_word(word)},
          {"length", word.size()},
          {"steps_taken", steps_taken},
          {"per_step_choices", std::move(steps)}};
}

SolveResult SolveResult::from_json(const json& j) {
  SolveResult r;
  r.status = parse_status(j.at("status").get<std::string>());
  for (const auto& x : j.at("word")) r.word.push_back(x.get<std::size_t>() - 1);
  r.steps_taken = j.at("steps_taken").get<std::size_t>();
  for (const auto& s : j.at("per_step_choices")) {
    StepChoice c;
    c.chosen = s.at("chosen").get<std::size_t>() - 1;
    c.norm_ratios = s.at("norm_ratios").get<std::vector<double>>();
    c.norm_decreased = s.at("norm_decreased").get<bool>();
    r.per_step_choices.push_back(std::move(c));
  }
  return r;
}

Word sample_word(const GeneratorSet& set, std::size_t L, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Word w(L);
  for (auto& s : w) s = static_cast<std::size_t>(rng.uniform_index(set.size()));
  return w;
}

WordInstance make_instance(std::shared_ptr<const GeneratorSet> set, ExactVector v, std::size_t L,
                           std::uint64_t seed) {
  if (v.size() != set->dim()) throw ValidationError("make_instance: v has the wrong dimension");
  if (is_zero(v)) throw ValidationError("make_instance: v must be nonzero");
  for (const auto& q : v) {
    if (!is_integer(q)) throw ValidationError("make_instance: v must have integer entries");
  }
  WordInstance inst;
  inst.hidden_word = sample_word(*set, L, seed);
  inst.w = set->apply(*inst.hidden_word, v);
  inst.v = std::move(v);
  inst.L = L;
  inst.seed = seed;
  inst.set = std::move(set);
  return inst;
}

namespace {

SolveStatus grade(const WordInstance& inst, const Word& word) {
  if (inst.hidden_word && *inst.hidden_word != word) return SolveStatus::wrong_word_found;
  return SolveStatus::recovered;
}

}  // namespace

SolveResult norm_reduce_solve(const WordInstance& inst, const SolverConfig& cfg) {
  const GeneratorSet& set = *inst.set;
  if (cfg.t > inst.L) throw DomainError("norm_reduce_solve: tail length t exceeds L");
  SolveResult result;
  ExactVector w = inst.w;
  if (w == inst.v) {
    result.status = grade(inst, result.word);
    return result;
  }

  Rational w_norm = vec_norm_sq(w);
  const std::size_t greedy_steps = inst.L - cfg.t;
  std::vector<ExactVector> candidates(set.size());
  std::vector<Rational> norms(set.size());
  while (result.steps_taken < greedy_steps) {
    ++result.steps_taken;
    std::size_t best = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      candidates[i] = mat_vec(set.inverse(i), w);
      norms[i] = vec_norm_sq(candidates[i]);
      if (norms[i] < norms[best]) best = i;
    }
    StepChoice choice;
    choice.chosen = best;
    const double log_w = 0.5 * log_abs(w_norm);
    for (const auto& n : norms) {
      choice.norm_ratios.push_back(n == 0 ? 0.0 : std::exp(0.5 * log_abs(n) - log_w));
    }
    choice.norm_decreased = norms[best] < w_norm;
    result.per_step_choices.push_back(std::move(choice));
    result.word.push_back(best);
    w = std::move(candidates[best]);
    w_norm = norms[best];
    if (w == inst.v) break;
  }

  if (w != inst.v && cfg.t > 0) {
    if (auto tail = brute_force_solve(set, inst.v, w, cfg.t, cfg.tail_budget)) {
      result.word.insert(result.word.end(), tail->begin(), tail->end());
      w = inst.v;
    }
  }
  result.status = w == inst.v ? grade(inst, result.word) : SolveStatus::failed;
  return result;
}

std::optional<Word> brute_force_solve(const GeneratorSet& set, const ExactVector& v, const ExactVector& w,
                                      std::size_t max_len, double budget) {
  const double k = static_cast<double>(set.size());
  const double required = std::pow(k, static_cast<double>(max_len));
  if (required > budget) {
    throw BudgetExceededError("brute_force_solve: k^L = " + std::to_string(required) + " exceeds budget " +
                                  std::to_string(budget),
                              required, budget);
  }
  if (v == w) return Word{};
  // Words are built from the right so that suffix images g_{s_j} ... g_{s_len} v are shared.
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::optional<Word> best;
    Word suffix(len);
    std::vector<ExactVector> images(len + 1);
    images[len] = v;
    // Depth-first over positions len-1 down to 0.
    auto visit = [&](auto&& self, std::size_t pos) -> void {
      for (std::size_t s = 0; s < set.size(); ++s) {
        suffix[pos] = s;
        images[pos] = mat_vec(set.generator(s), images[pos + 1]);
        if (pos == 0) {
          if (images[0] == w && (!best || suffix < *best)) best = suffix;
        } else {
          self(self, pos - 1);
        }
      }
    };
    visit(visit, len - 1);
    if (best) return best;
  }
  return std::nullopt;
}

bool functional_success(const SolveResult& r) { return r.status != SolveStatus::failed; }

bool strict_recovery(const SolveResult& r) { return r.status == SolveStatus::recovered; }

}  // namespace glround
