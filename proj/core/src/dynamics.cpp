#include "glround/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "glround/errors.hpp"
#include "glround/json_codec.hpp"
#include "glround/parallel.hpp"
#include "glround/random.hpp"

namespace glround {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kContractionGap = 1e-3;

struct SampleStats {
  double mean = 0.0;
  double std_err = 0.0;
};

SampleStats sample_stats(const std::vector<double>& xs) {
  SampleStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  s.std_err = std::sqrt(var / static_cast<double>(xs.size()));
  return s;
}

double max_abs(const RealMatrix& m) {
  double out = 0.0;
  for (double x : m.entries()) out = std::max(out, std::abs(x));
  return out;
}

// Divides m by the power of two nearest its largest entry and returns the exponent.
int renormalize(RealMatrix& m) {
  const double top = max_abs(m);
  if (top == 0.0 || !std::isfinite(top)) return 0;
  int e = 0;
  std::frexp(top, &e);
  for (auto& x : m.entries()) x = std::ldexp(x, -e);
  return e;
}

int renormalize(RealVector& v) {
  double top = 0.0;
  for (double x : v) top = std::max(top, std::abs(x));
  if (top == 0.0 || !std::isfinite(top)) return 0;
  int e = 0;
  std::frexp(top, &e);
  for (auto& x : v) x = std::ldexp(x, -e);
  return e;
}

// Product of matrices with a running log scale, renormalized every 16 factors
// or whenever entries get large.
class ScaledProduct {
 public:
  explicit ScaledProduct(std::size_t d) : m_(RealMatrix::identity(d)) {}

  void right_multiply(const RealMatrix& g) {
    m_ = mat_mul(m_, g);
    if (++since_ == 16 || max_abs(m_) > 0x1p400) {
      exponent_ += renormalize(m_);
      since_ = 0;
    }
  }

  double log_norm() const { return std::log(operator_norm(m_)) + static_cast<double>(exponent_) * kLn2; }

 private:
  RealMatrix m_;
  long exponent_ = 0;
  int since_ = 0;
};

RealVector wedge(std::span<const double> x, std::span<const double> y) {
  const auto basis = exterior_basis(x.size());
  RealVector u(basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const auto [i, j] = basis[r];
    u[r] = static_cast<double>(static_cast<long double>(x[i]) * y[j] - static_cast<long double>(x[j]) * y[i]);
  }
  return u;
}

RealVector apply_long(const RealMatrix& m, std::span<const double> v) {
  RealVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += static_cast<long double>(m(i, j)) * v[j];
    out[i] = static_cast<double>(acc);
  }
  return out;
}

// log of |M x ^ M y| / (|M x| |M y|) * (|x| |y|) / |x ^ y|, with M x ^ M y
// evaluated as (^2 M)(x ^ y) so the small quantity is never formed by cancellation.
double cocycle_impl(const RealMatrix& m, const RealMatrix& m_wedge, const ProjPoint& x, const ProjPoint& y) {
  if (m.rows() != x.dim() || x.dim() != y.dim() || !m.square())
    throw DimensionError("cocycle_s: dimension mismatch");
  const double base = proj_distance(x, y);
  if (base < 1e-14) throw DegeneratePairError("cocycle_s: delta(x, y) below 1e-14");
  const RealVector u = wedge(x.direction(), y.direction());
  const RealVector mu = apply_long(m_wedge, u);
  const RealVector mx = apply_long(m, x.direction());
  const RealVector my = apply_long(m, y.direction());
  const double top = euclidean_norm(mu);
  if (top == 0.0) throw DegeneratePairError("cocycle_s: M x and M y coincide");
  return std::log(top) - std::log(euclidean_norm(mx)) - std::log(euclidean_norm(my)) - std::log(euclidean_norm(u));
}

std::vector<Word> all_words(std::size_t k, std::size_t n) {
  std::vector<Word> out{Word{}};
  for (std::size_t len = 0; len < n; ++len) {
    std::vector<Word> next;
    next.reserve(out.size() * k);
    for (const auto& w : out)
      for (std::size_t s = 0; s < k; ++s) {
        Word x = w;
        x.push_back(s);
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

// Pushes v through a random word of length n, renormalizing by powers of two.
RealVector push_forward(const GeneratorSet& set, RealVector v, std::size_t n, SplitMix64& rng) {
  for (std::size_t step = 0; step < n; ++step) {
    v = mat_vec(set.real_generator(rng.uniform_index(set.size())), v);
    renormalize(v);
  }
  return v;
}

// |lambda_1| / |lambda_2| of a square matrix of dimension at least 2.
double dominant_ratio(const RealMatrix& m) {
  const double rho = spectral_radius(m);
  const double rho_wedge = spectral_radius(exterior_square(m));
  if (rho_wedge == 0.0) return rho == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return rho * rho / rho_wedge;
}

// sigma_1 / sigma_2.
double singular_gap(const RealMatrix& m) {
  const double s1 = operator_norm(m);
  if (s1 == 0.0) return 1.0;
  const double s12 = operator_norm(exterior_square(m));
  if (s12 == 0.0) return std::numeric_limits<double>::infinity();
  return s1 * s1 / s12;
}

}  // namespace

// -- Lyapunov ------------------------------------------------------------------------------

double LyapunovEstimate::combined_std_err() const {
  return std::sqrt(std_err_gamma1 * std_err_gamma1 + std_err_sum * std_err_sum);
}

nlohmann::json LyapunovEstimate::to_json() const {
  return {{"gamma1", gamma1},
          {"gamma1_plus_gamma2", gamma1_plus_gamma2},
          {"gamma2", gamma2},
          {"n", n},
          {"trials", trials},
          {"std_err_gamma1", std_err_gamma1},
          {"std_err_gamma1_plus_gamma2", std_err_sum},
          {"std_err_gamma2", std_err_gamma2}};
}

LyapunovEstimate estimate_lyapunov(const GeneratorSet& set, std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (n < 1) throw DomainError("estimate_lyapunov: n must be at least 1");
  if (trials < 2) throw DomainError("estimate_lyapunov: trials must be at least 2");
  const std::size_t d = set.dim();
  std::vector<RealMatrix> wedges;
  if (d >= 2)
    for (std::size_t i = 0; i < set.size(); ++i) wedges.push_back(to_real(exterior_square(set.generator(i))));

  std::vector<double> top(trials), pair(trials);
  parallel_for(trials, [&](std::size_t t) {
    SplitMix64 rng(derive_seed(seed, t));
    ScaledProduct p(d);
    std::optional<ScaledProduct> q;
    if (d >= 2) q.emplace(wedges.front().rows());
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t s = rng.uniform_index(set.size());
      p.right_multiply(set.real_generator(s));
      if (q) q->right_multiply(wedges[s]);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    top[t] = p.log_norm() * inv_n;
    // In dimension 1 the exterior square is zero and gamma_2 is -infinity;
    // report gamma1 + gamma2 = gamma1 so that gamma2 reads as 0 instead.
    pair[t] = q ? q->log_norm() * inv_n : top[t];
  });

  const auto s1 = sample_stats(top);
  const auto s12 = sample_stats(pair);
  std::vector<double> second(trials);
  for (std::size_t t = 0; t < trials; ++t) second[t] = pair[t] - top[t];
  const auto s2 = sample_stats(second);

  LyapunovEstimate out;
  out.gamma1 = s1.mean;
  out.gamma1_plus_gamma2 = s12.mean;
  out.gamma2 = out.gamma1_plus_gamma2 - out.gamma1;
  out.n = n;
  out.trials = trials;
  out.std_err_gamma1 = s1.std_err;
  out.std_err_sum = s12.std_err;
  out.std_err_gamma2 = s2.std_err;
  return out;
}

MeanEstimate estimate_vector_growth(const GeneratorSet& set, const RealVector& x, std::size_t n, std::size_t trials,
                                    std::uint64_t seed) {
  if (x.size() != set.dim()) throw DimensionError("estimate_vector_growth: vector dimension mismatch");
  if (n < 1 || trials < 2) throw DomainError("estimate_vector_growth: need n >= 1 and trials >= 2");
  const double base = euclidean_norm(x);
  if (base == 0.0) throw DomainError("estimate_vector_growth: zero vector");
  std::vector<double> rates(trials);
  parallel_for(trials, [&](std::size_t t) {
    SplitMix64 rng(derive_seed(seed, t));
    RealVector v = x;
    long exponent = 0;
    for (std::size_t step = 0; step < n; ++step) {
      v = mat_vec(set.real_generator(rng.uniform_index(set.size())), v);
      exponent += renormalize(v);
    }
    const double log_growth = std::log(euclidean_norm(v)) + static_cast<double>(exponent) * kLn2 - std::log(base);
    rates[t] = log_growth / static_cast<double>(n);
  });
  const auto s = sample_stats(rates);
  return {s.mean, s.std_err};
}

// -- assumption constants -------------------------------------------------------------------

std::vector<CrossMatrix> cross_matrices(const GeneratorSet& set) {
  std::vector<CrossMatrix> out;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t r = 0; r < set.size(); ++r)
      if (r != i) out.push_back({r, i, set.inverse(r) * set.generator(i)});
  return out;
}

double min_cross_norm(const GeneratorSet& set) {
  if (set.size() < 2) throw DomainError("min_cross_norm: need at least two generators");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cross_matrices(set)) best = std::min(best, operator_norm(c.matrix));
  return best;
}

double ell(const RealMatrix& m, const RealMatrix& m_inverse) {
  return std::max({std::log(operator_norm(m)), std::log(operator_norm(m_inverse)), 0.0});
}

double ell_max(const GeneratorSet& set) {
  double out = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i)
    out = std::max(out, ell(set.real_generator(i), set.real_inverse(i)));
  return out;
}

std::optional<ContractingWitness> check_contracting(const GeneratorSet& set, std::size_t max_word_len) {
  // On RP^0 there is nothing to contract and no second eigenvalue to compare.
  if (set.dim() < 2) return std::nullopt;
  const double budget = enumeration_budget(1e7);
  std::vector<std::pair<Word, RealMatrix>> layer{{Word{}, RealMatrix::identity(set.dim())}};
  double visited = 0.0;
  for (std::size_t len = 1; len <= max_word_len; ++len) {
    std::vector<std::pair<Word, RealMatrix>> next;
    for (const auto& [word, m] : layer) {
      for (std::size_t s = 0; s < set.size(); ++s) {
        if (++visited > budget)
          throw BudgetExceededError("check_contracting: word budget exceeded", visited, budget);
        Word w = word;
        w.push_back(s);
        RealMatrix p = mat_mul(m, set.real_generator(s));
        const double ratio = dominant_ratio(p);
        if (ratio >= 1.0 + kContractionGap) return ContractingWitness{w, ratio};
        if (len < max_word_len) next.emplace_back(std::move(w), std::move(p));
      }
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

std::string to_string(IrreducibilityFlag f) {
  return f == IrreducibilityFlag::verified_heuristic ? "verified_heuristic" : "inconclusive";
}

IrreducibilityCheck check_strong_irreducibility(const GeneratorSet& set) {
  const std::size_t d = set.dim();
  const std::size_t full = d * d;
  const std::size_t max_len = 2 * full;

  // Incremental row echelon form over Q of flattened word matrices.
  std::vector<ExactVector> rows;
  std::vector<std::size_t> pivots;
  auto insert = [&](const ExactMatrix& m) {
    ExactVector v(m.entries().begin(), m.entries().end());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Rational f = v[pivots[r]];
      if (f == 0) continue;
      for (std::size_t c = 0; c < full; ++c) v[c] -= f * rows[r][c];
    }
    std::size_t p = 0;
    while (p < full && v[p] == 0) ++p;
    if (p == full) return false;
    const Rational lead = v[p];
    for (auto& x : v) x /= lead;
    for (auto& row : rows) {
      const Rational f = row[p];
      if (f == 0) continue;
      for (std::size_t c = 0; c < full; ++c) row[c] -= f * v[c];
    }
    rows.push_back(std::move(v));
    pivots.push_back(p);
    return true;
  };

  IrreducibilityCheck out;
  // Breadth-first closure: g * (basis element) for every new basis element.
  // Words in the queue are added in order of length, so the span reached
  // equals the span of all words up to the longest one recorded.
  std::deque<std::pair<ExactMatrix, std::size_t>> queue;
  for (std::size_t s = 0; s < set.size(); ++s) {
    if (insert(set.generator(s))) {
      queue.emplace_back(set.generator(s), 1);
      out.longest_word = 1;
    }
  }
  while (!queue.empty() && rows.size() < full) {
    auto [m, len] = std::move(queue.front());
    queue.pop_front();
    if (len >= max_len) continue;
    for (std::size_t s = 0; s < set.size() && rows.size() < full; ++s) {
      ExactMatrix p = set.generator(s) * m;
      if (insert(p)) {
        out.longest_word = std::max(out.longest_word, len + 1);
        queue.emplace_back(std::move(p), len + 1);
      }
    }
  }
  out.span_rank = rows.size();
  out.flag = rows.size() == full ? IrreducibilityFlag::verified_heuristic : IrreducibilityFlag::inconclusive;
  return out;
}

// -- cocycle and S(n) ------------------------------------------------------------------------

double cocycle_s(const RealMatrix& m, const ProjPoint& x, const ProjPoint& y) {
  if (m.rows() < 2) throw DimensionError("cocycle_s: dimension must be at least 2");
  return cocycle_impl(m, exterior_square(m), x, y);
}

// Exact matrices are evaluated in rationals on the exact values of the double inputs, so
// cancellation inside M x never costs digits; only the final log rounds.
double cocycle_s(const ExactMatrix& m, const ProjPoint& x, const ProjPoint& y) {
  if (m.rows() < 2) throw DimensionError("cocycle_s: dimension must be at least 2");
  if (m.rows() != x.dim() || x.dim() != y.dim() || !m.square())
    throw DimensionError("cocycle_s: dimension mismatch");
  if (proj_distance(x, y) < 1e-14) throw DegeneratePairError("cocycle_s: delta(x, y) below 1e-14");
  std::vector<Rational> xr, yr;
  for (double c : x.direction()) xr.emplace_back(c);
  for (double c : y.direction()) yr.emplace_back(c);
  const auto basis = exterior_basis(m.rows());
  std::vector<Rational> u(basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const auto [i, j] = basis[r];
    u[r] = xr[i] * yr[j] - xr[j] * yr[i];
  }
  const Rational top = vec_norm_sq(mat_vec(exterior_square(m), u));
  if (top == 0) throw DegeneratePairError("cocycle_s: M x and M y coincide");
  // s = log(|M^2 u| |x| |y| / (|M x| |M y| |u|)), as one ratio of squares.
  Rational ratio = top * vec_norm_sq(xr) * vec_norm_sq(yr) /
                   (vec_norm_sq(mat_vec(m, xr)) * vec_norm_sq(mat_vec(m, yr)) * vec_norm_sq(u));
  ratio.canonicalize();
  return 0.5 * log_abs(ratio);
}

std::vector<ProjPoint> projective_mesh(std::size_t d, std::size_t resolution) {
  if (d < 2) throw DomainError("projective_mesh: dimension must be at least 2");
  if (resolution < 2) throw DomainError("projective_mesh: resolution must be at least 2");
  std::vector<ProjPoint> out;
  out.reserve(resolution);
  const double pi = std::numbers::pi;
  if (d == 2) {
    for (std::size_t i = 0; i < resolution; ++i) {
      const double a = pi * static_cast<double>(i) / static_cast<double>(resolution);
      out.emplace_back(RealVector{std::cos(a), std::sin(a)});
    }
  } else if (d == 3) {
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < resolution; ++i) {
      const double z = (static_cast<double>(i) + 0.5) / static_cast<double>(resolution);
      const double r = std::sqrt(1.0 - z * z);
      const double phi = golden * static_cast<double>(i);
      out.emplace_back(RealVector{r * std::cos(phi), r * std::sin(phi), z});
    }
  } else {
    SplitMix64 rng(0x6d657368ULL ^ d);
    while (out.size() < resolution) {
      RealVector v(d);
      for (auto& x : v) {
        // Box-Muller; u1 in (0, 1].
        const double u1 = 1.0 - rng.uniform01();
        const double u2 = rng.uniform01();
        x = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
      }
      if (euclidean_norm(v) > 1e-6) out.emplace_back(std::move(v));
    }
  }
  return out;
}

SEstimate mesh_estimate_S(const GeneratorSet& set, std::size_t n, double alpha, std::size_t resolution,
                          double budget) {
  if (!(alpha >= 0.0)) throw DomainError("mesh_estimate_S: alpha must be non-negative");
  const std::size_t d = set.dim();
  if (d < 2) throw DomainError("mesh_estimate_S: dimension must be at least 2");
  const double words_count = std::pow(static_cast<double>(set.size()), static_cast<double>(n));
  const double pair_count = static_cast<double>(resolution) * static_cast<double>(resolution - 1) / 2.0;
  if (words_count * pair_count > budget)
    throw BudgetExceededError("mesh_estimate_S: words x mesh pairs exceeds budget", words_count * pair_count, budget);

  const auto mesh = projective_mesh(d, resolution);
  const auto words = all_words(set.size(), n);
  std::vector<RealMatrix> mats, wedges;
  for (const auto& w : words) {
    const ExactMatrix p = set.product(w);
    mats.push_back(to_real(p));
    wedges.push_back(to_real(exterior_square(p)));
  }

  // log|M x| for every word and mesh point.
  std::vector<std::vector<double>> log_stretch(words.size(), std::vector<double>(mesh.size()));
  for (std::size_t w = 0; w < words.size(); ++w)
    for (std::size_t p = 0; p < mesh.size(); ++p)
      log_stretch[w][p] = std::log(euclidean_norm(apply_long(mats[w], mesh[p].direction())));

  std::vector<double> row_sup(mesh.size(), 0.0);
  std::vector<char> row_has(mesh.size(), 0);
  const double inv_words = 1.0 / static_cast<double>(words.size());
  parallel_for(mesh.size(), [&](std::size_t a) {
    double best = 0.0;
    bool any = false;
    for (std::size_t b = a + 1; b < mesh.size(); ++b) {
      if (proj_distance(mesh[a], mesh[b]) < 1e-6) continue;
      const RealVector u = wedge(mesh[a].direction(), mesh[b].direction());
      const double log_u = std::log(euclidean_norm(u));
      double sum = 0.0;
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (alpha == 0.0) {
          sum += 1.0;
          continue;
        }
        const double top = euclidean_norm(apply_long(wedges[w], u));
        const double s = std::log(top) - log_stretch[w][a] - log_stretch[w][b] - log_u;
        sum += std::exp(alpha * s);
      }
      const double value = sum * inv_words;
      if (!any || value > best) best = value;
      any = true;
    }
    row_sup[a] = best;
    row_has[a] = any ? 1 : 0;
  });

  SEstimate out;
  out.n = n;
  out.alpha = alpha;
  out.mesh_points = mesh.size();
  out.words_enumerated = words.size();
  bool any = false;
  for (std::size_t a = 0; a < mesh.size(); ++a)
    if (row_has[a] && (!any || row_sup[a] > out.estimate)) {
      out.estimate = row_sup[a];
      any = true;
    }
  return out;
}

// -- error sets -------------------------------------------------------------------------------

ErrorSetMembership error_set_membership(const GeneratorSet& set, std::size_t i, const ProjPoint& x) {
  if (i >= set.size()) throw DomainError("error_set_membership: generator index out of range");
  if (x.dim() != set.dim()) throw DimensionError("error_set_membership: point dimension mismatch");
  ErrorSetMembership out;
  out.i = i;
  const RealMatrix gi = set.real_generator(i);
  const RealVector gx = apply_long(gi, x.direction());
  for (std::size_t r = 0; r < set.size(); ++r) {
    if (r == i) continue;
    const RealVector y = apply_long(set.real_inverse(r), gx);
    ErrorSetMembership::PerR e;
    e.r = r;
    e.ratio = euclidean_norm(y);  // x is a unit vector
    e.member = e.ratio < 1.0;
    out.in_B_i = out.in_B_i || e.member;
    out.per_r.push_back(e);
  }
  return out;
}

StepErrorEstimate estimate_step_error(const GeneratorSet& set, const ExactVector& v, std::size_t j,
                                      std::size_t samples, std::uint64_t seed) {
  if (j < 1) throw DomainError("estimate_step_error: j must be at least 1");
  if (samples < 1) throw DomainError("estimate_step_error: samples must be at least 1");
  if (v.size() != set.dim()) throw DimensionError("estimate_step_error: vector dimension mismatch");
  if (is_zero(v)) throw DomainError("estimate_step_error: zero vector");
  const std::size_t k = set.size();
  // mu^0 * delta_v is a point mass, so a single evaluation is exact.
  if (j == 1) samples = 1;
  const RealVector base = to_real(v);

  std::vector<std::vector<char>> hits(samples, std::vector<char>(k, 0));
  parallel_for(samples, [&](std::size_t s) {
    SplitMix64 rng(derive_seed(seed, s));
    const ProjPoint x(push_forward(set, base, j - 1, rng));
    for (std::size_t i = 0; i < k; ++i) hits[s][i] = error_set_membership(set, i, x).in_B_i ? 1 : 0;
  });

  StepErrorEstimate out;
  out.j = j;
  out.samples = samples;
  out.per_generator.assign(k, 0.0);
  std::vector<double> per_sample(samples, 0.0);
  for (std::size_t s = 0; s < samples; ++s)
    for (std::size_t i = 0; i < k; ++i) {
      out.per_generator[i] += hits[s][i];
      per_sample[s] += hits[s][i];
    }
  for (auto& p : out.per_generator) p /= static_cast<double>(samples);
  for (auto& p : per_sample) p /= static_cast<double>(k);
  const auto st = sample_stats(per_sample);
  out.mean = st.mean;
  out.std_err = st.std_err;
  return out;
}

// -- error bound ------------------------------------------------------------------------------

ErrorBound theoretical_error_bound(std::size_t L, std::size_t t, std::size_t k, double N, double alpha, double K,
                                   double rho) {
  if (L < t) throw DomainError("theoretical_error_bound: need L >= t");
  if (k < 1) throw DomainError("theoretical_error_bound: need k >= 1");
  if (!(N > 1.0)) throw DomainError("theoretical_error_bound: need N > 1");
  if (!(alpha > 0.0)) throw DomainError("theoretical_error_bound: need alpha > 0");
  if (!(K > 0.0)) throw DomainError("theoretical_error_bound: need K > 0");
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("theoretical_error_bound: need 0 < rho < 1");
  ErrorBound out;
  out.probability_bound = static_cast<double>(L - t) * static_cast<double>(k - 1) * std::pow(2.0, alpha + 1.0) * K *
                          std::pow(N, -alpha);
  const double log_term = alpha * std::log(3.0) + std::log(K) - 3.0 * alpha * std::log(N);
  out.t_threshold = static_cast<long>(std::ceil(1.0 + log_term / std::log(rho)));
  return out;
}

// -- invariant-measure proxies ----------------------------------------------------------------

EmpiricalMeasure empirical_measure(const GeneratorSet& set, const RealVector& v, std::size_t n, std::size_t samples,
                                   std::uint64_t seed) {
  if (v.size() != set.dim()) throw DimensionError("empirical_measure: vector dimension mismatch");
  if (samples < 1) throw DomainError("empirical_measure: samples must be at least 1");
  std::vector<RealVector> points(samples);
  parallel_for(samples, [&](std::size_t s) {
    SplitMix64 rng(derive_seed(seed, s));
    points[s] = push_forward(set, v, n, rng);
  });
  EmpiricalMeasure out;
  out.n = n;
  out.base = v;
  out.seed = seed;
  const double weight = 1.0 / static_cast<double>(samples);
  out.atoms.reserve(samples);
  for (auto& p : points) out.atoms.emplace_back(ProjPoint(std::move(p)), weight);
  return out;
}

MeanEstimate estimate_guivarch_integral(const EmpiricalMeasure& nu, const ProjPoint& y, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("estimate_guivarch_integral: alpha must be positive");
  std::vector<double> values;
  values.reserve(nu.atoms.size());
  for (const auto& [x, w] : nu.atoms) {
    if (x.dim() != y.dim()) throw DimensionError("estimate_guivarch_integral: dimension mismatch");
    double ip = 0.0;
    for (std::size_t c = 0; c < x.dim(); ++c) ip += x[c] * y[c];
    if (std::abs(ip) < 1e-300) throw DegeneratePairError("estimate_guivarch_integral: atom orthogonal to y");
    values.push_back(std::pow(std::abs(ip), -alpha));
  }
  const auto s = sample_stats(values);
  return {s.mean, s.std_err};
}

MeanEstimate estimate_guivarch_integral(const GeneratorSet& set, const ProjPoint& y, double alpha, std::size_t n,
                                        std::size_t samples, std::uint64_t seed) {
  RealVector e1(set.dim(), 0.0);
  e1[0] = 1.0;
  return estimate_guivarch_integral(empirical_measure(set, e1, n, samples, seed), y, alpha);
}

std::vector<DeltaEntry> delta_to_max_stretch(const GeneratorSet& set) {
  if (set.size() < 2) throw DomainError("delta_to_max_stretch: need at least two generators");
  const auto crosses = cross_matrices(set);
  std::vector<DeltaEntry> out;
  for (std::size_t e = 0; e < set.size(); ++e) {
    const RealMatrix& g = set.real_generator(e);
    const auto eig = dominant_eigen_direction(g);
    const bool eig_ok = set.dim() >= 2 && eig.converged && dominant_ratio(g) >= 1.0 + kContractionGap;
    for (const auto& c : crosses) {
      const RealMatrix m = to_real(c.matrix);
      DeltaEntry entry;
      entry.eigen_of = e;
      entry.r = c.r;
      entry.i = c.i;
      const bool stretch_ok = set.dim() >= 2 && singular_gap(m) >= 1.0 + kContractionGap;
      entry.delta = proj_distance(ProjPoint(eig.direction), max_stretch_direction(m));
      entry.degenerate = !eig_ok || !stretch_ok;
      out.push_back(entry);
    }
  }
  return out;
}

// -- report ---------------------------------------------------------------------------------------

nlohmann::json DiagnosticsReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["N"] = N;
  j["a3_holds"] = a3_holds;
  j["ell_max"] = ell_max;
  if (contracting_witness) {
    nlohmann::json word = nlohmann::json::array();
    for (auto s : contracting_witness->word) word.push_back(s + 1);
    j["contracting_witness"] = {{"word", word}, {"dominant_ratio", contracting_witness->dominant_ratio}};
  } else {
    j["contracting_witness"] = nullptr;
  }
  j["irreducibility_flag"] = to_string(irreducibility.flag);
  j["irreducibility_span_rank"] = irreducibility.span_rank;
  j["irreducibility_longest_word"] = irreducibility.longest_word;
  j["S_table"] = nlohmann::json::array();
  for (const auto& s : s_table)
    j["S_table"].push_back({{"n", s.n},
                            {"alpha", s.alpha},
                            {"estimate", s.estimate},
                            {"mesh_points", s.mesh_points},
                            {"words_enumerated", s.words_enumerated}});
  j["lyapunov"] = lyapunov.to_json();
  j["delta_table"] = nlohmann::json::array();
  for (const auto& e : delta_table)
    j["delta_table"].push_back({{"eigendirection_of", e.eigen_of + 1},
                                {"r", e.r + 1},
                                {"i", e.i + 1},
                                {"delta", e.delta},
                                {"degenerate", e.degenerate}});
  if (bound && bound_inputs) {
    j["error_bound"] = {{"L", bound_inputs->L},
                        {"t", bound_inputs->t},
                        {"alpha", bound_inputs->alpha},
                        {"K", bound_inputs->K},
                        {"rho", bound_inputs->rho},
                        {"probability_bound", bound->probability_bound},
                        {"t_threshold", bound->t_threshold}};
  } else if (bound_inputs) {
    j["error_bound"] = {{"L", bound_inputs->L}, {"skipped", "N <= 1, bound undefined"}};
  }
  j["notes"] = {"irreducibility is a necessary-condition check only",
                "delta_table pairs dominant eigendirections of each generator with max-stretch directions of "
                "each g_r^-1 g_i"};
  return j;
}

std::string DiagnosticsReport::s_table_csv() const {
  // Shortest round-trip representation, so 0.4 prints as 0.4.
  auto fmt = [](double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  std::ostringstream os;
  os << kSTableCsvHeader << '\n';
  for (const auto& s : s_table)
    os << s.n << ',' << fmt(s.alpha) << ',' << fmt(s.estimate) << ',' << s.mesh_points << ',' << s.words_enumerated
       << '\n';
  return os.str();
}

DiagnosticsReport diagnose(const GeneratorSet& set, const DiagnosticsOptions& options) {
  DiagnosticsReport r;
  r.N = min_cross_norm(set);
  r.a3_holds = r.N > 1.0;
  r.ell_max = ell_max(set);
  r.contracting_witness = check_contracting(set, options.contracting_max_len);
  r.irreducibility = check_strong_irreducibility(set);
  for (auto n : options.s_lengths)
    for (auto a : options.alphas) r.s_table.push_back(mesh_estimate_S(set, n, a, options.mesh_resolution, options.mesh_budget));
  r.lyapunov = estimate_lyapunov(set, options.lyapunov_n, options.lyapunov_trials, options.seed);
  r.delta_table = delta_to_max_stretch(set);
  if (options.bound) {
    r.bound_inputs = options.bound;
    // The bound is only defined for N > 1; the report says so instead of failing.
    if (r.a3_holds)
      r.bound = theoretical_error_bound(options.bound->L, options.bound->t, set.size(), r.N, options.bound->alpha,
                                      options.bound->K, options.bound->rho);
  }
  return r;
}

}  // namespace glround
