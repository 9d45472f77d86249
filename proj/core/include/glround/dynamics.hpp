#pragma once

// Dynamical diagnostics of a generating set: Lyapunov exponents, the
// separation constant N, contraction and irreducibility checks, cocycle
// integrals S(n), error-set measures and the closed-form error bound.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glround/generator_set.hpp"
#include "glround/spectral.hpp"

namespace glround {

// -- Lyapunov exponents -------------------------------------------------------

struct LyapunovEstimate {
  double gamma1 = 0.0;
  double gamma1_plus_gamma2 = 0.0;
  double gamma2 = 0.0;  // gamma1_plus_gamma2 - gamma1
  std::size_t n = 0;
  std::size_t trials = 0;
  double std_err_gamma1 = 0.0;
  double std_err_sum = 0.0;
  double std_err_gamma2 = 0.0;

  /// Standard error of gamma1 - gamma2 treating the two estimates as independent.
  double combined_std_err() const;
  nlohmann::json to_json() const;
};

/// Monte-Carlo means of (1/n) log|h| and (1/n) log|^2 h| over uniform random
/// words h of length n. Products are renormalized by powers of two every 16
/// factors; ^2 h is accumulated as the product of the generators' exterior squares.
LyapunovEstimate estimate_lyapunov(const GeneratorSet& set, std::size_t n, std::size_t trials, std::uint64_t seed);

struct MeanEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

/// (1/n) E log(|h x| / |x|), the vector form of the top exponent.
MeanEstimate estimate_vector_growth(const GeneratorSet& set, const RealVector& x, std::size_t n, std::size_t trials,
                                    std::uint64_t seed);

// -- assumption constants -------------------------------------------------------

/// Exact g_r^{-1} g_i for every ordered pair r != i, in (i, r) lexicographic order.
struct CrossMatrix {
  std::size_t r = 0;
  std::size_t i = 0;
  ExactMatrix matrix;
};
std::vector<CrossMatrix> cross_matrices(const GeneratorSet& set);

/// min over i != j of |g_j^{-1} g_i|. Throws DomainError for k < 2.
double min_cross_norm(const GeneratorSet& set);

/// max{log|M|, log|M^{-1}|, 0}.
double ell(const RealMatrix& m, const RealMatrix& m_inverse);
double ell_max(const GeneratorSet& set);

struct ContractingWitness {
  Word word;
  double dominant_ratio = 0.0;  // |lambda_1| / |lambda_2|
};

/// Searches words of length 1..max_word_len for a product whose top eigenvalue
/// modulus exceeds the second by a relative factor of at least 1e-3. The second
/// modulus comes from rho(^2 M) / rho(M), so no deflation is needed.
std::optional<ContractingWitness> check_contracting(const GeneratorSet& set, std::size_t max_word_len);

enum class IrreducibilityFlag { verified_heuristic, inconclusive };
std::string to_string(IrreducibilityFlag f);

struct IrreducibilityCheck {
  IrreducibilityFlag flag = IrreducibilityFlag::inconclusive;
  std::size_t span_rank = 0;
  std::size_t longest_word = 0;
};

/// Exact rank over Q of the linear span of all words of length 1..2d^2.
/// Full rank d^2 means absolute irreducibility, a necessary part of strong
/// irreducibility; the finite-union condition itself is never decided.
IrreducibilityCheck check_strong_irreducibility(const GeneratorSet& set);

// -- cocycle and contraction integrals ----------------------------------------------

/// s(M, (x, y)) = log(delta(Mx, My) / delta(x, y)). Throws DegeneratePairError
/// when delta(x, y) < 1e-14.
double cocycle_s(const RealMatrix& m, const ProjPoint& x, const ProjPoint& y);
double cocycle_s(const ExactMatrix& m, const ProjPoint& x, const ProjPoint& y);

/// Deterministic mesh on RP^{d-1}: a Fibonacci lattice on the upper hemisphere
/// for d = 3, equally spaced angles in [0, pi) for d = 2, and SplitMix64-seeded
/// Gaussian directions otherwise.
std::vector<ProjPoint> projective_mesh(std::size_t d, std::size_t resolution);

struct SEstimate {
  std::size_t n = 0;
  double alpha = 0.0;
  double estimate = 0.0;
  std::size_t mesh_points = 0;
  std::size_t words_enumerated = 0;
};

/// sup over mesh pairs (delta >= 1e-6) of the exact average of
/// exp(alpha s(M, z)) over all k^n words. Throws BudgetExceededError when
/// k^n * pairs exceeds `budget`.
SEstimate mesh_estimate_S(const GeneratorSet& set, std::size_t n, double alpha, std::size_t resolution = 2000,
                          double budget = 1e9);

// -- error sets ---------------------------------------------------------------------

struct ErrorSetMembership {
  struct PerR {
    std::size_t r = 0;
    bool member = false;  // |g_r^{-1} g_i x| < |x|
    double ratio = 0.0;   // |g_r^{-1} g_i x| / |x|
  };
  std::size_t i = 0;
  std::vector<PerR> per_r;
  bool in_B_i = false;  // union over r != i
};

ErrorSetMembership error_set_membership(const GeneratorSet& set, std::size_t i, const ProjPoint& x);

struct StepErrorEstimate {
  std::size_t j = 0;
  std::size_t samples = 0;
  std::vector<double> per_generator;  // p_hat_{j i}
  double mean = 0.0;                  // p_hat_j
  double std_err = 0.0;
};

/// Monte-Carlo p_hat_{j i}: the fraction of pushed-forward samples h v, h a
/// random word of length j - 1, lying in B_i. At j = 1 the measure is the
/// point mass at v and the estimate is an exact indicator.
StepErrorEstimate estimate_step_error(const GeneratorSet& set, const ExactVector& v, std::size_t j,
                                      std::size_t samples, std::uint64_t seed);

// -- error bound --------------------------------------------------------------------

struct ErrorBound {
  double probability_bound = 0.0;  // (L - t)(k - 1) 2^{alpha+1} K N^{-alpha}
  long t_threshold = 0;            // ceil(1 + log(3^alpha K N^{-3 alpha}) / log rho)
};

/// Throws DomainError unless L >= t, k >= 1, N > 1, alpha > 0, K > 0, 0 < rho < 1.
ErrorBound theoretical_error_bound(std::size_t L, std::size_t t, std::size_t k, double N, double alpha, double K,
                                   double rho);

// -- invariant-measure proxies ------------------------------------------------------------

struct EmpiricalMeasure {
  std::vector<std::pair<ProjPoint, double>> atoms;
  std::size_t n = 0;
  RealVector base;
  std::uint64_t seed = 0;
};

/// Sample proxy for mu^n * delta_v: `samples` equally weighted atoms h v.
EmpiricalMeasure empirical_measure(const GeneratorSet& set, const RealVector& v, std::size_t n, std::size_t samples,
                                   std::uint64_t seed);

/// Mean of |<x, y>|^{-alpha} over the atoms, a heuristic lower estimate of the
/// Guivarc'h-Raugi constant K.
MeanEstimate estimate_guivarch_integral(const EmpiricalMeasure& nu, const ProjPoint& y, double alpha);
MeanEstimate estimate_guivarch_integral(const GeneratorSet& set, const ProjPoint& y, double alpha, std::size_t n,
                                        std::size_t samples, std::uint64_t seed);

struct DeltaEntry {
  std::size_t eigen_of = 0;  // generator whose dominant eigendirection is used
  std::size_t r = 0;         // cross matrix g_r^{-1} g_i
  std::size_t i = 0;
  double delta = 0.0;
  bool degenerate = false;   // no dominant eigendirection or no isolated top singular value
};

/// delta between each generator's dominant eigendirection and the max-stretch
/// direction of every g_r^{-1} g_i, r != i: k * k(k-1) entries.
std::vector<DeltaEntry> delta_to_max_stretch(const GeneratorSet& set);

// -- report -------------------------------------------------------------------------------

struct DiagnosticsOptions {
  std::vector<std::size_t> s_lengths{2};
  std::vector<double> alphas{0.4};
  std::size_t mesh_resolution = 2000;
  double mesh_budget = 1e9;
  std::size_t lyapunov_n = 200;
  std::size_t lyapunov_trials = 100;
  std::size_t contracting_max_len = 4;
  std::uint64_t seed = 1;
  struct BoundInputs {
    std::size_t L = 0;
    std::size_t t = 0;
    double alpha = 0.4;
    double K = 7.0;
    double rho = 0.83;
  };
  std::optional<BoundInputs> bound;
};

struct DiagnosticsReport {
  double N = 0.0;
  bool a3_holds = false;  // N > 1
  double ell_max = 0.0;
  std::optional<ContractingWitness> contracting_witness;
  IrreducibilityCheck irreducibility;
  std::vector<SEstimate> s_table;
  LyapunovEstimate lyapunov;
  std::vector<DeltaEntry> delta_table;
  std::optional<ErrorBound> bound;
  std::optional<DiagnosticsOptions::BoundInputs> bound_inputs;

  nlohmann::json to_json() const;
  std::string s_table_csv() const;
};

inline constexpr const char* kSTableCsvHeader = "n,alpha,estimate,mesh_points,words_enumerated";

DiagnosticsReport diagnose(const GeneratorSet& set, const DiagnosticsOptions& options);

}  // namespace glround
