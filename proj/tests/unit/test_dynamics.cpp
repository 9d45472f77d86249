#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <gtest/gtest.h>

#include "glround/bench.hpp"
#include "glround/dynamics.hpp"
#include "oracles.hpp"

using namespace glround;

namespace {

const GeneratorSet& example1() {
  static const GeneratorSet s = load_generator_set("example1");
  return s;
}

const GeneratorSet& example2() {
  static const GeneratorSet s = load_generator_set("example2");
  return s;
}

ExactMatrix scalar(std::size_t d, long c) {
  ExactMatrix m = ExactMatrix::identity(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = c;
  return m;
}

GeneratorSet permutations3() {
  return GeneratorSet({ExactMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, ExactMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},
                       ExactMatrix{{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}});
}

GeneratorSet rotations() {
  // Integer rotations of the plane and of 3-space by quarter turns.
  return GeneratorSet({ExactMatrix{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}, ExactMatrix{{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}});
}

ProjPoint random_point(SplitMix64& rng, std::size_t d) { return ProjPoint(oracle::random_unit(rng, d)); }

}  // namespace

TEST(Lyapunov, ScalarSet) {
  const GeneratorSet s({scalar(3, 2)});
  const auto est = estimate_lyapunov(s, 50, 10, 1);
  EXPECT_NEAR(est.gamma1, std::log(2.0), 1e-9);
  EXPECT_NEAR(est.gamma1_plus_gamma2, 2 * std::log(2.0), 1e-9);
  EXPECT_NEAR(est.gamma2, est.gamma1_plus_gamma2 - est.gamma1, 1e-15);
}

TEST(Lyapunov, PermutationsAreNeutral) {
  const auto est = estimate_lyapunov(permutations3(), 100, 20, 2);
  EXPECT_NEAR(est.gamma1, 0.0, 1e-9);
  EXPECT_GE(est.std_err_gamma1, 0.0);
}

TEST(Lyapunov, SingleMatrixMatchesSpectralRadius) {
  const GeneratorSet s({ExactMatrix{{3, 0, 0}, {0, 2, 0}, {0, 0, 1}}});
  const auto est = estimate_lyapunov(s, 200, 10, 3);
  EXPECT_NEAR(est.gamma1, std::log(3.0), std::max(2 * est.std_err_gamma1, 1e-9));
  EXPECT_NEAR(est.gamma1_plus_gamma2, std::log(6.0), 1e-9);
}

TEST(Lyapunov, Example1GapAndVectorForm) {
  const auto est = estimate_lyapunov(example1(), 200, 100, 1);
  EXPECT_GT(est.gamma1 - est.gamma2, 3 * est.combined_std_err());
  const auto vec = estimate_vector_growth(example1(), RealVector{1, 0, 0}, 200, 100, 1);
  const double combined = std::hypot(est.std_err_gamma1, vec.std_err);
  // log|h| - log|h x| is bounded independently of n, so allow that O(1/n) bias on top.
  EXPECT_LT(std::abs(vec.mean - est.gamma1), 3 * combined + 0.05);
}

TEST(MinCrossNorm, Examples) {
  EXPECT_NEAR(min_cross_norm(GeneratorSet({ExactMatrix::identity(3), scalar(3, 2)})), 0.5, 1e-9);
  const auto g = example1().generator(0);
  EXPECT_NEAR(min_cross_norm(GeneratorSet({g, g})), 1.0, 1e-9);
  EXPECT_NEAR(min_cross_norm(example1()), 12157.1, 0.1);
  EXPECT_THROW(min_cross_norm(GeneratorSet({g})), DomainError);
}

TEST(CrossMatrices, OrderAndValues) {
  const auto cm = cross_matrices(example1());
  ASSERT_EQ(cm.size(), 6u);
  for (const auto& c : cm) {
    EXPECT_NE(c.r, c.i);
    EXPECT_EQ(c.matrix, oracle::naive_mul(example1().inverse(c.r), example1().generator(c.i)));
  }
}

TEST(CheckContracting, Examples) {
  const auto diag = check_contracting(GeneratorSet({ExactMatrix{{2, 0, 0}, {0, 1, 0}, {0, 0, 1}}}), 3);
  ASSERT_TRUE(diag.has_value());
  EXPECT_EQ(diag->word.size(), 1u);
  EXPECT_NEAR(diag->dominant_ratio, 2.0, 1e-6);
  EXPECT_FALSE(check_contracting(rotations(), 4).has_value());
  EXPECT_FALSE(check_contracting(permutations3(), 4).has_value());
  const auto ex = check_contracting(example1(), 4);
  ASSERT_TRUE(ex.has_value());
  EXPECT_EQ(ex->word.size(), 1u);
}

TEST(Irreducibility, Examples) {
  const auto diag = check_strong_irreducibility(GeneratorSet({ExactMatrix{{2, 0, 0}, {0, 3, 0}, {0, 0, 5}}}));
  EXPECT_EQ(diag.flag, IrreducibilityFlag::inconclusive);
  EXPECT_LE(diag.span_rank, 3u);
  EXPECT_EQ(check_strong_irreducibility(GeneratorSet({ExactMatrix::identity(3)})).flag,
            IrreducibilityFlag::inconclusive);
  const auto ex = check_strong_irreducibility(example1());
  EXPECT_EQ(ex.flag, IrreducibilityFlag::verified_heuristic);
  EXPECT_EQ(ex.span_rank, 9u);
}

TEST(Cocycle, Examples) {
  SplitMix64 rng(8);
  const auto x = random_point(rng, 3), y = random_point(rng, 3);
  EXPECT_EQ(cocycle_s(ExactMatrix::identity(3), x, y), 0.0);
  const ExactMatrix perm{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  EXPECT_NEAR(cocycle_s(perm, x, y), 0.0, 1e-12);
  EXPECT_THROW(cocycle_s(perm, x, x), DegeneratePairError);
}

// b x in rationals, rounded once at the end.
ProjPoint push_exact(const ExactMatrix& b, const ProjPoint& x) {
  std::vector<Rational> xr(x.direction().begin(), x.direction().end());
  RealVector out;
  for (const auto& c : mat_vec(b, xr)) out.push_back(to_double(c));
  return ProjPoint(out);
}

// Largest |ds| / h over a few coordinate nudges of size h to either point.
double rounding_sensitivity(const RealMatrix& a, const ProjPoint& x, const ProjPoint& y) {
  const double h = 1e-7, base = cocycle_s(a, x, y);
  double worst = 0;
  for (std::size_t i = 0; i < x.direction().size(); ++i) {
    auto xs = x.direction(), ys = y.direction();
    xs[i] += h;
    ys[i] += h;
    worst = std::max({worst, std::abs(cocycle_s(a, ProjPoint(xs), y) - base) / h,
                      std::abs(cocycle_s(a, x, ProjPoint(ys)) - base) / h});
  }
  return worst;
}

TEST(Cocycle, IdentityAndEllBound) {
  SplitMix64 rng(21);
  const auto& s = example1();
  int checked = 0, skipped = 0;
  while (checked < 10000) {
    Word wa(1 + rng.uniform_index(2)), wb(1 + rng.uniform_index(2));
    for (auto& c : wa) c = rng.uniform_index(3);
    for (auto& c : wb) c = rng.uniform_index(3);
    const ExactMatrix a = s.product(wa), b = s.product(wb);
    const auto x = random_point(rng, 3), y = random_point(rng, 3);
    if (proj_distance(x, y) < 1e-3) continue;
    ExactMatrix a_inv = ExactMatrix::identity(3);
    for (auto it = wa.rbegin(); it != wa.rend(); ++it) a_inv = a_inv * s.inverse(*it);
    const RealMatrix ra = to_real(a);
    const ProjPoint bx = push_exact(b, x), by = push_exact(b, y);
    // bx, by are still rounded to doubles before a sees them. Estimate how far that rounding
    // moves s(a, bx, by) and skip pairs where it alone could reach 1e-10.
    if (rounding_sensitivity(ra, bx, by) * 1e-15 > 1e-10) {
      ++skipped;
      continue;
    }
    ++checked;
    const double lhs = cocycle_s(a * b, x, y);
    const double rhs = cocycle_s(a, bx, by) + cocycle_s(b, x, y);
    ASSERT_NEAR(lhs, rhs, 1e-9) << "case " << checked;

    ASSERT_EQ(a * a_inv, ExactMatrix::identity(3));
    ASSERT_LE(cocycle_s(a, x, y), 4 * ell(to_real(a), to_real(a_inv)) + 1e-9);
  }
  EXPECT_LT(skipped, checked) << "conditioning filter dropped too many cases";
  std::printf("cocycle identity: %d checked, %d skipped\n", checked, skipped);
}

TEST(Ell, Values) {
  EXPECT_EQ(ell(RealMatrix::identity(2), RealMatrix::identity(2)), 0.0);
  const RealMatrix d{{4, 0}, {0, 0.5}}, dinv{{0.25, 0}, {0, 2}};
  EXPECT_NEAR(ell(d, dinv), std::log(4.0), 1e-9);
  EXPECT_GT(ell_max(example1()), std::log(1000.0));
}

TEST(Mesh, PointsAreCanonical) {
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto mesh = projective_mesh(d, 300);
    ASSERT_EQ(mesh.size(), 300u);
    for (const auto& p : mesh) {
      ASSERT_NEAR(euclidean_norm(p.direction()), 1.0, 1e-12);
      std::size_t first = 0;
      while (p[first] == 0.0) ++first;
      ASSERT_GT(p[first], 0.0);
    }
  }
}

TEST(MeshS, AlphaZeroAndPermutations) {
  EXPECT_EQ(mesh_estimate_S(example1(), 2, 0.0, 200).estimate, 1.0);
  const auto perm = mesh_estimate_S(permutations3(), 2, 0.7, 200);
  EXPECT_NEAR(perm.estimate, 1.0, 1e-12);
  EXPECT_EQ(perm.words_enumerated, 9u);
  EXPECT_THROW(mesh_estimate_S(example1(), 12, 0.4, 2000, 1e6), BudgetExceededError);
}

TEST(MeshS, Example1Contracts) {
  const auto est = mesh_estimate_S(example1(), 2, 0.4, 2000);
  EXPECT_LT(est.estimate, 0.9);
  EXPECT_GT(est.estimate, 0.0);
  EXPECT_EQ(est.mesh_points, 2000u);
}

TEST(MeshS, Submultiplicative) {
  const std::size_t res = 400;
  const double s1 = mesh_estimate_S(example1(), 1, 0.4, res).estimate;
  const double s2 = mesh_estimate_S(example1(), 2, 0.4, res).estimate;
  const double s3 = mesh_estimate_S(example1(), 3, 0.4, res).estimate;
  EXPECT_LE(s2, s1 * s1 * 1.05);
  EXPECT_LE(s3, s1 * s2 * 1.05);
}

TEST(ErrorSets, MaxStretchDirectionIsNotAnError) {
  for (const auto& c : cross_matrices(example1())) {
    const auto w = max_stretch_direction(c.matrix);
    const auto m = error_set_membership(example1(), c.i, w);
    for (const auto& pr : m.per_r) {
      if (pr.r != c.r) continue;
      EXPECT_FALSE(pr.member);
      EXPECT_NEAR(pr.ratio, operator_norm(c.matrix), 1e-6 * operator_norm(c.matrix));
    }
  }
}

TEST(ErrorSets, ScalarCase) {
  const GeneratorSet s({ExactMatrix::identity(3), scalar(3, 2)});
  SplitMix64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_point(rng, 3);
    const auto into_2 = error_set_membership(s, 1, x);
    ASSERT_EQ(into_2.per_r.size(), 1u);
    EXPECT_FALSE(into_2.per_r[0].member);
    EXPECT_NEAR(into_2.per_r[0].ratio, 2.0, 1e-12);
    EXPECT_TRUE(error_set_membership(s, 0, x).in_B_i);
  }
}

TEST(StepError, FirstStepIsIndicator) {
  const auto est = estimate_step_error(example1(), ExactVector{1, 2, 3}, 1, 500, 4);
  EXPECT_EQ(est.samples, 1u);
  for (double p : est.per_generator) EXPECT_TRUE(p == 0.0 || p == 1.0);
}

TEST(StepError, SmallForExample1LargeForExample2) {
  const ExactVector e1{1, 0, 0};
  const auto j50 = estimate_step_error(example1(), e1, 50, 10000, 5);
  const auto j100 = estimate_step_error(example1(), e1, 100, 10000, 6);
  EXPECT_LT(j50.mean, 0.01);
  EXPECT_LE(j100.mean, 0.002);
  const auto s1 = estimate_step_error(example1(), e1, 10, 10000, 7);
  const auto s2 = estimate_step_error(example2(), e1, 10, 10000, 7);
  EXPECT_GT(s2.mean, 10 * std::max(s1.mean, 1e-4));
}

TEST(StepError, ConsistentWithObservedFailures) {
  const ExactVector e1{1, 0, 0};
  const std::size_t L = 10;
  double sum = 0.0;
  for (std::size_t j = 1; j <= L; ++j) sum += estimate_step_error(example2(), e1, j, 2000, 100 + j).mean;
  auto set = std::make_shared<const GeneratorSet>(example2());
  const auto row = bench_success_rate(set, e1, L, 500, {}, 3);
  const double fail = 1.0 - static_cast<double>(row.strict_recoveries) / row.trials;
  const double sigma = std::sqrt(fail * (1 - fail) / row.trials);
  EXPECT_GE(sum, (fail - 3 * sigma));
}

TEST(ErrorBound, Properties) {
  EXPECT_EQ(theoretical_error_bound(50, 50, 3, 12157.1, 0.4, 7, 0.83).probability_bound, 0.0);
  EXPECT_EQ(theoretical_error_bound(50, 0, 1, 12157.1, 0.4, 7, 0.83).probability_bound, 0.0);
  const auto b = theoretical_error_bound(200, 0, 3, 12157.1, 0.4, 7, 0.83);
  const double direct = 200 * 2 * std::pow(2.0, 1.4) * 7 * std::pow(12157.1, -0.4);
  EXPECT_NEAR(b.probability_bound, direct, 1e-12 * direct);
  const double t_direct = std::ceil(1 + std::log(std::pow(3.0, 0.4) * 7 * std::pow(12157.1, -1.2)) / std::log(0.83));
  EXPECT_EQ(b.t_threshold, static_cast<long>(t_direct));

  SplitMix64 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t L = 1 + rng.uniform_index(500), t = rng.uniform_index(L + 1);
    const double N = 1.5 + 1e5 * rng.uniform01(), alpha = 0.05 + rng.uniform01();
    const auto base = theoretical_error_bound(L, t, 3, N, alpha, 7, 0.83).probability_bound;
    ASSERT_GE(base, 0.0);
    ASSERT_LE(theoretical_error_bound(L, t, 3, N * 1.5, alpha, 7, 0.83).probability_bound, base);
    if (t < L) ASSERT_LE(theoretical_error_bound(L, t + 1, 3, N, alpha, 7, 0.83).probability_bound, base);
  }
  EXPECT_THROW(theoretical_error_bound(5, 6, 3, 100, 0.4, 7, 0.83), DomainError);
  EXPECT_THROW(theoretical_error_bound(5, 0, 3, 1.0, 0.4, 7, 0.83), DomainError);
  EXPECT_THROW(theoretical_error_bound(5, 0, 3, 100, 0.0, 7, 0.83), DomainError);
  EXPECT_THROW(theoretical_error_bound(5, 0, 3, 100, 0.4, 7, 1.0), DomainError);
}

TEST(EmpiricalMeasure, WeightsSumToOne) {
  const auto nu = empirical_measure(example1(), RealVector{1, 0, 0}, 50, 300, 3);
  ASSERT_EQ(nu.atoms.size(), 300u);
  double total = 0.0;
  for (const auto& [p, w] : nu.atoms) {
    EXPECT_GT(w, 0.0);
    total += w;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Guivarch, Examples) {
  const GeneratorSet s({scalar(3, 2)});
  const ProjPoint e1(RealVector{1, 0, 0});
  EXPECT_NEAR(estimate_guivarch_integral(s, e1, 0.4, 100, 50, 1).mean, 1.0, 1e-12);
  const auto tiny = estimate_guivarch_integral(example1(), ProjPoint(RealVector{1, 2, 3}), 1e-6, 100, 500, 1);
  EXPECT_NEAR(tiny.mean, 1.0, std::max(tiny.std_err, 1e-4));
  for (const auto& c : cross_matrices(example1())) {
    const auto k = estimate_guivarch_integral(example1(), max_stretch_direction(c.matrix), 0.4, 100, 500, 2);
    EXPECT_TRUE(std::isfinite(k.mean));
    EXPECT_GE(k.mean, 1.0);
  }
}

TEST(DeltaTable, Example1) {
  const auto table = delta_to_max_stretch(example1());
  ASSERT_EQ(table.size(), 18u);
  double lo = 1.0;
  for (const auto& e : table) {
    EXPECT_FALSE(e.degenerate);
    EXPECT_LE(e.delta, 1.0);
    lo = std::min(lo, e.delta);
  }
  EXPECT_GE(lo, 0.2);
}

TEST(DeltaTable, DegenerateSets) {
  for (const auto& e : delta_to_max_stretch(permutations3())) EXPECT_TRUE(e.degenerate);
  const auto g = example1().generator(0);
  for (const auto& e : delta_to_max_stretch(GeneratorSet({g, g}))) EXPECT_TRUE(e.degenerate);
}

TEST(Diagnose, ReportShape) {
  DiagnosticsOptions opt;
  opt.mesh_resolution = 200;
  opt.lyapunov_n = 50;
  opt.lyapunov_trials = 20;
  opt.bound = DiagnosticsOptions::BoundInputs{200, 0};
  const auto r = diagnose(example1(), opt);
  EXPECT_NEAR(r.N, 12157.1, 0.1);
  EXPECT_TRUE(r.a3_holds);
  ASSERT_EQ(r.s_table.size(), 1u);
  EXPECT_TRUE(r.bound.has_value());
  const auto csv = r.s_table_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kSTableCsvHeader);
  EXPECT_NE(csv.find("\n2,0.4,"), std::string::npos) << csv;
  const auto j = r.to_json();
  EXPECT_EQ(j.at("irreducibility_flag"), "verified_heuristic");

  const auto p = diagnose(permutations3(), opt);
  EXPECT_FALSE(p.contracting_witness.has_value());
  EXPECT_NEAR(p.lyapunov.gamma1, 0.0, 1e-9);
}
