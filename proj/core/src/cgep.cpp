#include "glround/cgep.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "glround/errors.hpp"
#include "glround/json_codec.hpp"
#include "glround/parallel.hpp"

namespace glround {

namespace {

using Int256 = boost::multiprecision::checked_int256_t;

template <class Num>
constexpr bool kIntegerMode = std::is_same_v<Num, Int256> || std::is_same_v<Num, Integer>;

Integer to_integer(const Rational& q) {
  if (!is_integer(q)) throw std::logic_error("scaled value is not an integer");
  return q.get_num();
}

template <class Num>
Num convert(const Rational& q) {
  if constexpr (std::is_same_v<Num, double>) {
    return to_double(q);
  } else if constexpr (std::is_same_v<Num, Rational>) {
    return q;
  } else if constexpr (std::is_same_v<Num, Integer>) {
    return to_integer(q);
  } else {
    return Num(to_integer(q).get_str());
  }
}

template <class Num>
Rational to_rational(const Num& x) {
  if constexpr (std::is_same_v<Num, double>) {
    return Rational(x);
  } else if constexpr (std::is_same_v<Num, Rational> || std::is_same_v<Num, Integer>) {
    return Rational(x);
  } else {
    return Rational(Integer(x.str()));
  }
}

// Power-of-two exponent of a positive rational whose numerator is 1 and whose
// denominator is a power of two, or -1 otherwise.
long dyadic_inverse_exponent(const Rational& q) {
  if (q <= 0 || q.get_num() != 1) return -1;
  const Integer& den = q.get_den();
  const auto bits = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
  return mpz_scan1(den.get_mpz_t(), 0) == static_cast<unsigned long>(bits) ? bits : -1;
}

// Exponent e >= 0 such that 2^e q is an integer, or -1 if none exists.
long dyadic_denominator_exponent(const Rational& q) {
  const Integer& den = q.get_den();
  const auto bits = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
  return mpz_scan1(den.get_mpz_t(), 0) == static_cast<unsigned long>(bits) ? bits : -1;
}

// Scaled constants for the search. All matrix and vector quantities are
// multiplied by D, so squared distances come out multiplied by D^2.
template <class Num>
struct Setup {
  std::size_t n = 0;
  bool alpha_zero = false;
  long alpha_shift = -1;  // integer modes with alpha = 2^-shift
  Num alpha{};            // otherwise multiply by alpha
  Num beta{};
  Num z_corner{};  // D (beta^n + epsilon)
  Num z_diag{};    // D epsilon
  Num k_scaled_sq{};
  std::vector<Num> weights;  // D w_e T per slot
  Num d{};
  Rational d_sq = 1;
};

template <class Num>
Setup<Num> make_setup(const CgepInstance& inst, long shift_exponent) {
  const auto& p = inst.params;
  Setup<Num> s;
  s.n = inst.graph.n();
  const Rational D = shift_exponent > 0 ? pow2(shift_exponent) : Rational(1);
  s.d_sq = D * D;
  s.d = convert<Num>(D);
  s.alpha_zero = p.alpha == 0;
  if constexpr (kIntegerMode<Num>) {
    if (!s.alpha_zero) {
      if (is_integer(p.alpha)) {
        s.alpha = convert<Num>(p.alpha);
      } else {
        s.alpha_shift = dyadic_inverse_exponent(p.alpha);
      }
    }
  } else {
    s.alpha = convert<Num>(p.alpha);
  }
  s.beta = convert<Num>(p.beta);
  s.z_corner = convert<Num>(D * (pow(p.beta, s.n) + p.epsilon));
  s.z_diag = convert<Num>(D * p.epsilon);
  const Num k = convert<Num>(D * p.K);
  s.k_scaled_sq = k * k;
  for (const auto& e : inst.edge_index) s.weights.push_back(convert<Num>(D * scaled_weight(inst.graph, e, p)));
  return s;
}

struct PartitionResult {
  std::vector<std::size_t> best_word;
  Rational best;
  bool has_best = false;
  CgepStats stats;
};

template <class Num>
class Searcher {
 public:
  Searcher(const CgepInstance& inst, const Setup<Num>& setup, const CgepOptions& options)
      : inst_(inst), s_(setup), options_(options), n_(setup.n), slots_(inst.edge_index.size()) {
    const auto& p = inst.params;
    const Rational nn(static_cast<long>(n_));
    const Rational cross = nn * p.alpha * pow(p.beta, n_ - 1) * pow2(static_cast<long>(n_));
    noise_ = cross * cross + (nn * p.epsilon) * (nn * p.epsilon);
    levels_.resize(n_ + 1);
    for (auto& lv : levels_) {
      lv.m.assign(n_ * n_, Num{});
      lv.touch.assign(n_, 0);
    }
    for (std::size_t i = 0; i < n_; ++i) levels_[0].m[i * n_ + i] = s_.d;
    levels_[0].weight = Num{};
  }

  // Visits the empty word.
  void visit_root(PartitionResult& out) {
    word_.clear();
    visit(0, out);
  }

  // Visits every word of length >= 1 whose first slot is `first`, in lexicographic order.
  void search_from(std::size_t first, PartitionResult& out) {
    word_.clear();
    descend(0, first, out);
  }

 private:
  struct Level {
    std::vector<Num> m;
    std::vector<int> touch;
    Num weight{};
  };

  Num mul_alpha(const Num& x) const {
    if (s_.alpha_zero) return Num{};
    if constexpr (kIntegerMode<Num>) {
      if (s_.alpha_shift >= 0) return x >> static_cast<unsigned>(s_.alpha_shift);
    }
    return x * s_.alpha;
  }

  void descend(std::size_t depth, std::size_t slot, PartitionResult& out) {
    const Level& cur = levels_[depth];
    Level& nxt = levels_[depth + 1];
    const Edge& e = inst_.edge_index[slot];
    // M' = alpha M + beta M[:, i] e_j^T.
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::size_t c = 0; c < n_; ++c) nxt.m[r * n_ + c] = mul_alpha(cur.m[r * n_ + c]);
      nxt.m[r * n_ + e.to] += s_.beta * cur.m[r * n_ + e.from];
    }
    nxt.touch = cur.touch;
    ++nxt.touch[e.from];
    ++nxt.touch[e.to];
    nxt.weight = cur.weight + s_.weights[slot];
    word_.push_back(slot);
    visit(depth + 1, out);
    if (depth + 1 < n_)
      for (std::size_t s = 0; s < slots_; ++s) descend(depth + 1, s, out);
    word_.pop_back();
  }

  void visit(std::size_t depth, PartitionResult& out) {
    const Level& lv = levels_[depth];
    Num dist{};
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) {
        Num diff = lv.m[r * n_ + c];
        if (r == c) diff -= (r == 0 ? s_.z_corner : s_.z_diag);
        dist += diff * diff;
      }
    long touch_dev = 0;
    bool double_touch = true;
    for (int t : lv.touch) {
      touch_dev += static_cast<long>(t - 2) * (t - 2);
      if (t != 2) double_touch = false;
    }
    dist += s_.k_scaled_sq * Num(touch_dev);
    dist += lv.weight * lv.weight;

    auto& st = out.stats;
    ++st.words;
    if (!double_touch) {
      ++st.non_double_touch;
      if (dist < s_.k_scaled_sq) ++st.separation_violations;
    } else if (depth == n_) {
      check_hamiltonian(dist, out);
    }

    if (!out.has_best || best_num_ > dist) {
      out.has_best = true;
      best_num_ = dist;
      out.best_word = word_;
    }
  }

  void check_hamiltonian(const Num& dist, PartitionResult& out) {
    const auto edges = word_edges(inst_, word_);
    const auto decoded = extract_cycle(edges, n_);
    if (!decoded.ok) return;
    auto& st = out.stats;
    ++st.hamiltonian;
    const Rational exact_dist = to_rational(dist) / s_.d_sq;
    const std::int64_t weight = inst_.graph.cycle_weight(decoded.cycle);
    const Rational w = Rational(static_cast<long>(weight)) * inst_.params.T;
    const Rational bound = noise_ + w * w;
    bool violated = exact_dist > bound;
    if constexpr (std::is_same_v<Num, double>) {
      violated = to_double(exact_dist) > to_double(bound) * (1.0 + 1e-9);
    }
    if (violated) ++st.hamiltonian_bound_violations;
    if (options_.collect_cycles) st.cycles.push_back({word_, decoded.cycle, weight, exact_dist});
  }

 public:
  Rational best_value() const { return to_rational(best_num_) / s_.d_sq; }

 private:
  const CgepInstance& inst_;
  const Setup<Num>& s_;
  const CgepOptions& options_;
  std::size_t n_;
  std::size_t slots_;
  Rational noise_;
  std::vector<Level> levels_;
  std::vector<std::size_t> word_;
  Num best_num_{};
};

template <class Num>
CgepResult run_search(const CgepInstance& inst, long shift_exponent, const CgepOptions& options) {
  const Setup<Num> setup = make_setup<Num>(inst, shift_exponent);
  const std::size_t slots = inst.edge_index.size();
  // Partition 0 is the empty word; partition 1 + s holds the words starting with slot s.
  std::vector<PartitionResult> parts(slots + 1);
  std::vector<Rational> bests(slots + 1);
  parallel_for(slots + 1, [&](std::size_t part) {
    Searcher<Num> searcher(inst, setup, options);
    if (part == 0) {
      searcher.visit_root(parts[part]);
    } else if (inst.L >= 1) {
      searcher.search_from(part - 1, parts[part]);
    }
    if (parts[part].has_best) bests[part] = searcher.best_value();
  });

  CgepResult out;
  out.exact = inst.params.exact();
  bool has = false;
  for (std::size_t part = 0; part <= slots; ++part) {
    auto& pr = parts[part];
    auto& st = out.stats;
    st.words += pr.stats.words;
    st.non_double_touch += pr.stats.non_double_touch;
    st.separation_violations += pr.stats.separation_violations;
    st.hamiltonian += pr.stats.hamiltonian;
    st.hamiltonian_bound_violations += pr.stats.hamiltonian_bound_violations;
    for (auto& c : pr.stats.cycles) st.cycles.push_back(std::move(c));
    if (pr.has_best && (!has || bests[part] < out.distance_sq)) {
      has = true;
      out.distance_sq = bests[part];
      out.word = pr.best_word;
    }
  }
  out.distance_sq_approx = to_double(out.distance_sq);
  return out;
}

// Scale exponent for the integer search, or -1 when the parameters are not
// dyadic enough for it.
long integer_scale_exponent(const ReductionParams& p) {
  if (!is_integer(p.beta)) return -1;
  long shift = 0;
  if (p.alpha != 0 && !is_integer(p.alpha)) {
    const long a = dyadic_inverse_exponent(p.alpha);
    if (a < 0) return -1;
    shift = a * static_cast<long>(p.n);
  }
  for (const Rational* q : {&p.epsilon, &p.K, &p.T}) {
    const long e = dyadic_denominator_exponent(*q);
    if (e < 0) return -1;
    shift = std::max(shift, e);
  }
  return shift;
}

// Rough bit length of the largest squared distance, to choose Int256 or mpz.
double distance_bits(const CgepInstance& inst, long shift) {
  const auto& p = inst.params;
  const double n = static_cast<double>(inst.graph.n());
  const double entry = n * std::log2(to_double(p.alpha + p.beta) + 1.0) + std::log2(to_double(p.epsilon) + 1.0);
  double max_weight = 0.0;
  for (const auto& e : inst.edge_index) max_weight = std::max(max_weight, static_cast<double>(inst.graph.weight(e)));
  const double touch = std::log2(to_double(p.K) * 2.0 * n + 1.0);
  const double weight = std::log2(max_weight * to_double(p.T) * n + 1.0);
  const double top = static_cast<double>(shift) + std::max({entry + 1.0, touch, weight});
  return 2.0 * top + std::log2(n * n + n + 1.0) + 4.0;
}

}  // namespace

double cgep_required_budget(const CgepInstance& inst) {
  return std::pow(static_cast<double>(inst.edge_index.size()), static_cast<double>(inst.L));
}

std::vector<Edge> word_edges(const CgepInstance& inst, const std::vector<std::size_t>& word) {
  std::vector<Edge> out;
  out.reserve(word.size());
  for (auto s : word) out.push_back(inst.edge_index.at(s));
  return out;
}

CgepResult cgep_brute_force(const CgepInstance& inst, const CgepOptions& options) {
  const double budget = enumeration_budget(options.budget);
  const double required = cgep_required_budget(inst);
  if (required > budget)
    throw BudgetExceededError("cgep_brute_force: (n(n-1))^L = " + std::to_string(static_cast<long long>(required)) +
                                  " words exceeds the budget " + std::to_string(static_cast<long long>(budget)),
                              required, budget);
  if (!inst.params.exact()) return run_search<double>(inst, 0, options);
  const long shift = integer_scale_exponent(inst.params);
  if (shift < 0) return run_search<Rational>(inst, 0, options);
  if (distance_bits(inst, shift) < 250.0) {
    try {
      return run_search<Int256>(inst, shift, options);
    } catch (const std::overflow_error&) {
      // fall through to arbitrary precision
    }
  }
  return run_search<Integer>(inst, shift, options);
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["conditions"] = conditions.to_json();
  j["cgep_word"] = edges_to_json(cgep_word);
  j["cgep_distance_sq"] = to_string(search.distance_sq);
  j["cgep_distance_sq_exact"] = search.exact;
  if (decoded.ok) {
    j["cycle"] = vertices_to_json(decoded.cycle);
  } else {
    j["cycle"] = nullptr;
    j["decode_failure"] = decoded.failure;
  }
  j["cgep_weight"] = cgep_weight ? nlohmann::json(*cgep_weight) : nlohmann::json(nullptr);
  j["tsp_cycle"] = vertices_to_json(tsp.cycle);
  j["tsp_weight"] = tsp.weight;
  j["match"] = match;
  j["words_enumerated"] = search.stats.words;
  j["separation_violations"] = search.stats.separation_violations;
  j["hamiltonian_bound_violations"] = search.stats.hamiltonian_bound_violations;
  return j;
}

VerificationReport verify_reduction(const CgepInstance& inst, const CgepOptions& options) {
  VerificationReport r;
  r.conditions = verify_conditions(inst.params);
  r.search = cgep_brute_force(inst, options);
  r.cgep_word = word_edges(inst, r.search.word);
  r.decoded = extract_cycle(r.cgep_word, inst.graph.n());
  if (r.decoded.ok) r.cgep_weight = inst.graph.cycle_weight(r.decoded.cycle);
  r.tsp = tsp_brute_force(inst.graph);
  r.match = r.cgep_weight && *r.cgep_weight == r.tsp.weight;
  return r;
}

}  // namespace glround
