#include "glround/reduction.hpp"

#include <cmath>

#include "glround/errors.hpp"
#include "glround/json_codec.hpp"

namespace glround {

namespace {

Rational from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("parameter is not finite");
  return Rational(x);
}

Integer ceil_div2(const Integer& x) { return (x + 1) / 2; }

bool approx_le(double lhs, double rhs) {
  return lhs <= rhs + 1e-9 * std::max(std::abs(lhs), std::abs(rhs));
}

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.from + 1) + "," + std::to_string(e.to + 1) + ")";
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::i: return "i";
    case Variant::ii: return "ii";
    case Variant::iii: return "iii";
    case Variant::exact_rational: return "exact_rational";
  }
  return "exact_rational";
}

Variant parse_variant(const std::string& s) {
  if (s == "i") return Variant::i;
  if (s == "ii") return Variant::ii;
  if (s == "iii") return Variant::iii;
  if (s == "exact" || s == "exact_rational") return Variant::exact_rational;
  throw ParseError("unknown variant '" + s + "' (expected i, ii, iii or exact)");
}

nlohmann::json ReductionParams::to_json() const {
  return {{"variant", to_string(variant)},
          {"n", n},
          {"alpha", encode(alpha)},
          {"beta", encode(beta)},
          {"epsilon", encode(epsilon)},
          {"K", encode(K)},
          {"T", encode(T)},
          {"m", m.get_str()},
          {"M", M.get_str()}};
}

ReductionParams ReductionParams::from_json(const nlohmann::json& j) {
  ReductionParams p;
  try {
    p.variant = parse_variant(j.at("variant").get<std::string>());
    p.n = j.at("n").get<std::size_t>();
    p.alpha = decode_rational(j.at("alpha"), "params.alpha");
    p.beta = decode_rational(j.at("beta"), "params.beta");
    p.epsilon = decode_rational(j.at("epsilon"), "params.epsilon");
    p.K = decode_rational(j.at("K"), "params.K");
    p.T = decode_rational(j.at("T"), "params.T");
    const Rational m = decode_rational(j.at("m"), "params.m");
    const Rational M = decode_rational(j.at("M"), "params.M");
    if (!is_integer(m) || !is_integer(M)) throw ParseError("params.m and params.M must be integers");
    p.m = m.get_num();
    p.M = M.get_num();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("params: ") + e.what());
  }
  return p;
}

HamiltonianBounds hamiltonian_bounds(const TspGraph& g) {
  HamiltonianBounds b;
  b.m = Integer(static_cast<long>(g.n())) * Integer(static_cast<long>(g.min_weight()));
  b.M = Integer(static_cast<long>(g.canonical_cycle_weight())) + 1;
  return b;
}

ReductionParams choose_params(const TspGraph& g, Variant variant) {
  const auto bounds = hamiltonian_bounds(g);
  const std::size_t n = g.n();
  ReductionParams p;
  p.variant = variant;
  p.n = n;
  p.m = bounds.m;
  p.M = bounds.M;
  const double md = bounds.m.get_d();
  const double Md = bounds.M.get_d();
  const double nd = static_cast<double>(n);

  switch (variant) {
    case Variant::exact_rational: {
      // beta: smallest integer >= 2 with beta^n >= 2M; then M grows to ceil(beta^n / 2).
      Integer beta = 2;
      Integer beta_n;
      for (;; ++beta) {
        mpz_pow_ui(beta_n.get_mpz_t(), beta.get_mpz_t(), n);
        if (beta_n >= 2 * bounds.M) break;
      }
      p.M = ceil_div2(beta_n);
      p.beta = Rational(beta);
      p.K = Rational(p.M);
      p.T = 1;
      const Rational quarter_m = Rational(p.m) / 4;
      // Largest 2^-q with (n alpha beta^(n-1) 2^n)^2 <= m/4.
      const Rational coeff = Rational(static_cast<long>(n)) * pow(p.beta, n - 1) * pow2(static_cast<long>(n));
      long q = 0;
      while ((coeff * pow2(-q)) * (coeff * pow2(-q)) > quarter_m) ++q;
      p.alpha = pow2(-q);
      // Largest 2^e with (n epsilon)^2 <= m/4.
      long e = static_cast<long>(mpz_sizeinbase(p.m.get_mpz_t(), 2)) + 1;
      const Rational nn(static_cast<long>(n));
      while ((nn * pow2(e)) * (nn * pow2(e)) > quarter_m) --e;
      p.epsilon = pow2(e);
      break;
    }
    case Variant::i: {
      const double beta = std::max({std::ldexp(1.0, static_cast<int>(n) + 4), 4.0 * Md * Md,
                                    nd * nd * std::ldexp(1.0, 2 * static_cast<int>(n) + 1) / md});
      const double T = std::pow(beta, nd - 0.5);
      p.alpha = 1;
      p.beta = from_double(beta);
      p.epsilon = from_double(1.0 / (2.0 * nd));
      p.T = from_double(T);
      p.K = from_double(Md * T);
      break;
    }
    case Variant::ii: {
      const double beta = std::pow(2.0 * Md, 1.0 / nd);
      const double root = std::sqrt(md / 2.0);
      p.T = 1;
      p.K = Rational(p.M);
      p.beta = from_double(beta);
      p.alpha = from_double(root / (nd * std::ldexp(1.0, static_cast<int>(n)) * std::pow(beta, nd - 1.0)));
      p.epsilon = from_double(root / nd);
      break;
    }
    case Variant::iii: {
      p.alpha = 0;
      p.beta = from_double(std::pow(Md, 1.0 / nd));
      p.epsilon = 0;
      p.K = Rational(p.M);
      p.T = 1;
      break;
    }
  }

  const auto report = verify_conditions(p);
  if (auto bad = report.first_violation())
    throw ValidationError("variant " + to_string(variant) + ": condition " + *bad + " violated");
  return p;
}

bool ConditionReport::all_hold() const {
  for (const auto& c : conditions)
    if (!c.holds) return false;
  return true;
}

std::optional<std::string> ConditionReport::first_violation() const {
  for (const auto& c : conditions)
    if (!c.holds) return c.name;
  return std::nullopt;
}

nlohmann::json ConditionReport::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : conditions) {
    nlohmann::json j{{"name", c.name},
                     {"statement", c.statement},
                     {"holds", c.holds},
                     {"lhs", c.lhs},
                     {"rhs", c.rhs},
                     {"slack", c.slack},
                     {"exact", exact}};
    if (!c.exact_slack.empty()) j["exact_slack"] = c.exact_slack;
    out.push_back(std::move(j));
  }
  return out;
}

ConditionReport verify_conditions(const ReductionParams& p, const Rational& A) {
  ConditionReport report;
  report.exact = p.exact();
  const unsigned long n = p.n;
  const char* s_range = "beta > alpha >= 0, epsilon >= 0, K > 0, T > 0, m >= 1";
  const char* s1 = "(n alpha beta^(n-1) 2^n)^2 + (n epsilon)^2 < m T^2";
  const char* s2 = "K >= M T";
  const char* s3 = "epsilon + beta^n - alpha beta^(n-1) 2^n >= M T";
  const char* s58 = "(n alpha beta^(n-1) 2^n)^2 + (n epsilon)^2 <= (m A T)^2";

  if (p.exact()) {
    const Rational nn(static_cast<long>(n));
    const Rational cross = p.alpha * pow(p.beta, n - 1) * pow2(static_cast<long>(n));
    const Rational noise = (nn * cross) * (nn * cross) + (nn * p.epsilon) * (nn * p.epsilon);
    const Rational mT2 = Rational(p.m) * p.T * p.T;
    const Rational MT = Rational(p.M) * p.T;
    const Rational third = p.epsilon + pow(p.beta, n) - cross;
    const Rational mAT = Rational(p.m) * A * p.T;
    auto add = [&](const std::string& name, const char* statement, const Rational& lhs, const Rational& rhs,
                   bool strict) {
      ConditionResult c;
      c.name = name;
      c.statement = statement;
      c.holds = strict ? lhs < rhs : lhs <= rhs;
      c.lhs = to_double(lhs);
      c.rhs = to_double(rhs);
      c.slack = to_double(rhs - lhs);
      c.exact_slack = to_string(Rational(rhs - lhs));
      report.conditions.push_back(std::move(c));
    };
    ConditionResult range;
    range.name = "ranges";
    range.statement = s_range;
    range.holds = p.beta > p.alpha && p.alpha >= 0 && p.epsilon >= 0 && p.K > 0 && p.T > 0 && p.m >= 1;
    range.slack = to_double(p.beta - p.alpha);
    report.conditions.push_back(range);
    add("1", s1, noise, mT2, true);
    add("2", s2, MT, p.K, false);
    add("3", s3, MT, third, false);
    add("approximation", s58, noise, mAT * mAT, false);
    return report;
  }

  const double nd = static_cast<double>(n);
  const double a = to_double(p.alpha), b = to_double(p.beta), e = to_double(p.epsilon);
  const double K = to_double(p.K), T = to_double(p.T), m = p.m.get_d(), M = p.M.get_d(), Ad = to_double(A);
  const double cross = a * std::pow(b, nd - 1.0) * std::ldexp(1.0, static_cast<int>(n));
  const double noise = (nd * cross) * (nd * cross) + (nd * e) * (nd * e);
  auto add = [&](const std::string& name, const char* statement, double lhs, double rhs) {
    ConditionResult c;
    c.name = name;
    c.statement = statement;
    c.holds = approx_le(lhs, rhs);
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = rhs - lhs;
    report.conditions.push_back(std::move(c));
  };
  ConditionResult range;
  range.name = "ranges";
  range.statement = s_range;
  range.holds = b > a && a >= 0 && e >= 0 && K > 0 && T > 0 && m >= 1;
  range.slack = b - a;
  report.conditions.push_back(range);
  add("1", s1, noise, m * T * T);
  add("2", s2, M * T, K);
  add("3", s3, M * T, e + std::pow(b, nd) - cross);
  add("approximation", s58, noise, (m * Ad * T) * (m * Ad * T));
  return report;
}

Rational scaled_weight(const TspGraph& g, const Edge& e, const ReductionParams& p) {
  return Rational(static_cast<long>(g.weight(e))) * p.T;
}

ExactMatrix edge_block(const Edge& e, const ReductionParams& p) {
  const std::size_t n = p.n;
  if (e.from == e.to) throw DomainError("edge " + edge_name(e) + " is a loop");
  if (e.from >= n || e.to >= n) throw DomainError("edge " + edge_name(e) + " out of range");
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = p.alpha;
  m(e.from, e.to) += p.beta;
  return m;
}

ExactMatrix build_generator(const TspGraph& g, const Edge& e, const ReductionParams& p) {
  const std::size_t n = g.n();
  if (p.n != n) throw DimensionError("parameters were chosen for a different vertex count");
  const ExactMatrix block = edge_block(e, p);
  ExactMatrix out = ExactMatrix::identity(2 * n + 3);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = block(i, j);
  out(n, n + 1 + e.from) = p.K;
  out(n, n + 1 + e.to) = p.K;
  out(2 * n + 1, 2 * n + 2) = scaled_weight(g, e, p);
  return out;
}

ExactMatrix build_target(const TspGraph& g, const ReductionParams& p) {
  const std::size_t n = g.n();
  if (p.n != n) throw DimensionError("parameters were chosen for a different vertex count");
  ExactMatrix z = ExactMatrix::identity(2 * n + 3);
  for (std::size_t i = 0; i < n; ++i) z(i, i) = p.epsilon;
  z(0, 0) += pow(p.beta, n);
  for (std::size_t j = 0; j < n; ++j) z(n, n + 1 + j) = 2 * p.K;
  return z;
}

WordFeatures word_to_features(const std::vector<Edge>& word, const ReductionParams& p, const TspGraph& g) {
  const std::size_t n = g.n();
  const std::size_t d = 2 * n + 3;
  ExactMatrix full = ExactMatrix::identity(d);
  WordFeatures f{ExactMatrix::identity(n), ExactVector(n, Rational(0)), Rational(0)};
  for (const auto& e : word) {
    full = full * build_generator(g, e, p);
    f.m_product = f.m_product * edge_block(e, p);
    f.touch[e.from] += p.K;
    f.touch[e.to] += p.K;
    f.weight += scaled_weight(g, e, p);
  }
  ExactMatrix expected = ExactMatrix::identity(d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) expected(i, j) = f.m_product(i, j);
  for (std::size_t j = 0; j < n; ++j) expected(n, n + 1 + j) = f.touch[j];
  expected(2 * n + 1, 2 * n + 2) = f.weight;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (full(i, j) != expected(i, j))
        throw ConsistencyError("word product disagrees with block features at row " + std::to_string(i + 1) +
                               " col " + std::to_string(j + 1));
  return f;
}

bool traces_path(const std::vector<Edge>& edges) {
  for (std::size_t r = 0; r + 1 < edges.size(); ++r)
    if (edges[r].to != edges[r + 1].from) return false;
  return true;
}

bool crude_detect_bound_check(const std::vector<Edge>& edges, const ReductionParams& p) {
  const std::size_t l = edges.size();
  if (l > 12) throw DomainError("crude_detect_bound_check: at most 12 edges");
  if (l == 0) return true;
  ExactMatrix prod = ExactMatrix::identity(p.n);
  for (const auto& e : edges) prod = prod * edge_block(e, p);
  if (traces_path(edges)) prod(edges.front().from, edges.back().to) -= pow(p.beta, l);
  const Rational bound = p.alpha * pow(p.beta, l - 1) * pow2(static_cast<long>(l));
  for (const auto& x : prod.entries())
    if (abs(x) > bound) return false;
  return true;
}

nlohmann::json CgepInstance::to_json() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : generators) gens.push_back(encode(g));
  return {{"schema_version", kSchemaVersion},
          {"variant", to_string(params.variant)},
          {"d", dim()},
          {"L", L},
          {"graph", graph.to_json()},
          {"params", params.to_json()},
          {"edge_index", edges_to_json(edge_index)},
          {"generators", gens},
          {"target_z", encode(target)}};
}

CgepInstance CgepInstance::from_json(const nlohmann::json& j) {
  try {
    const TspGraph g = TspGraph::from_json(j.at("graph"));
    const ReductionParams p = ReductionParams::from_json(j.at("params"));
    CgepInstance inst = build_instance(g, p);
    // The stored matrices must be exactly what the parameters produce.
    const auto& gens = j.at("generators");
    if (gens.size() != inst.generators.size()) throw ValidationError("instance: generator count mismatch");
    for (std::size_t s = 0; s < gens.size(); ++s)
      if (decode_matrix(gens[s], "generator " + std::to_string(s + 1)) != inst.generators[s])
        throw ValidationError("instance: generator " + std::to_string(s + 1) + " does not match parameters");
    if (decode_matrix(j.at("target_z"), "target_z") != inst.target)
      throw ValidationError("instance: target does not match parameters");
    if (j.contains("L") && j.at("L").get<std::size_t>() != inst.L) throw ValidationError("instance: L mismatch");
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

CgepInstance build_instance(const TspGraph& g, const ReductionParams& p) {
  CgepInstance inst{g, p, g.directed_edges(), {}, build_target(g, p), g.n()};
  for (const auto& e : inst.edge_index) inst.generators.push_back(build_generator(g, e, p));
  return inst;
}

}  // namespace glround
