#include "vcontract/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "vcontract/error.hpp"

namespace vcontract {

Prop1Instance prop1_instance(std::size_t dimension, std::size_t n, const Budgets& budgets) {
  if (dimension == 0) fail(ErrorKind::InvalidSpec, "K must be positive");
  if (n < dimension || n % dimension != 0)
    fail(ErrorKind::InvalidBlocking, "K = " + std::to_string(dimension) +
                                         " must divide n = " + std::to_string(n));
  if (dimension + n > budgets.exact_cap)
    fail(ErrorKind::BudgetExceeded, "2^K 2^n exceeds the enumeration budget 2^" +
                                        std::to_string(budgets.exact_cap));
  std::vector<std::size_t> points;
  for (std::size_t i = 0; i < dimension; ++i) points.insert(points.end(), n / dimension, i);
  Prop1Instance p{dimension, n, n / dimension, make_sign_product_class(dimension),
                  LipschitzSeq::repeat(LipschitzMap::max(), n, 1.0, kInfNorm),
                  Sample(std::move(points))};
  return p;
}

double abs_sum_closed_form(std::size_t m) {
  if (m == 0) return 0.0;
  const double binom = static_cast<double>(binomial_saturating(m - 1, (m - 1) / 2));
  return static_cast<double>(m) * std::ldexp(binom, 1 - static_cast<int>(m));
}

double abs_sum_expectation(std::size_t m, std::size_t exact_cap) {
  if (m == 0 || m > 30) fail(ErrorKind::InvalidSpec, "m must lie in [1, 30]");
  double value = 0.0;
  if (m <= exact_cap) {
    // {f = +1, f = -1}: max(S, -S) = |S|.
    ScalarTable a(2, m);
    for (std::size_t t = 0; t < m; ++t) {
      a(0, t) = 1.0;
      a(1, t) = -1.0;
    }
    value = exact_rademacher(a, exact_cap);
  } else {
    for (std::size_t k = 0; k <= m; ++k) {
      const double diff = std::abs(2.0 * static_cast<double>(k) - static_cast<double>(m));
      value += std::ldexp(static_cast<double>(binomial_saturating(m, k)), -static_cast<int>(m)) * diff;
    }
  }
  const double md = static_cast<double>(m);
  if (!close_tol(value, abs_sum_closed_form(m)))
    fail(ErrorKind::NumericalError, "E|S_m| disagrees with its closed form");
  if (!leq_tol(std::sqrt(md / 2.0), value) || !leq_tol(value, std::sqrt(md)))
    fail(ErrorKind::NumericalError, "E|S_m| outside the Khintchine bounds");
  return value;
}

Prop1Verification prop1_verify(std::size_t dimension, std::size_t n, const Budgets& budgets) {
  const auto start = std::chrono::steady_clock::now();
  const Prop1Instance p = prop1_instance(dimension, n, budgets);
  const double K = static_cast<double>(dimension);
  const double nn = static_cast<double>(n);
  const std::size_t m = p.block_size;

  const EvaluatedClass ec = evaluate(p.cls, p.sample);
  const double lhs = exact_rademacher(compose(p.phi, ec).table, budgets.exact_cap);

  // One block after the max collapses each function to max{sigma, 0}; with
  // K = 1 there is no zero coordinate and the block keeps the sign.
  const double block_share = dimension == 1 ? 1.0 : 0.5;
  ScalarTable block(2, m);
  for (std::size_t t = 0; t < m; ++t) {
    block(0, t) = 1.0;
    block(1, t) = dimension == 1 ? -1.0 : 0.0;
  }
  const double block_value = exact_rademacher(block, budgets.exact_cap);
  const double abs_sum = abs_sum_expectation(m, budgets.exact_cap);
  const double abs_sum_closed = abs_sum_closed_form(m);

  Prop1Verification out;
  BoundReport& r = out.report;
  double max_coordinate = 0.0;
  bool coords_agree = true;
  for (std::size_t i = 0; i < dimension; ++i) {
    const double v = exact_rademacher(ec.coordinate(i), budgets.exact_cap);
    coords_agree = coords_agree && close_tol(v, abs_sum_closed);
    max_coordinate = std::max(max_coordinate, v);
    r.set("rademacher_coord_" + std::to_string(i), v);
  }

  double min_worst = std::numeric_limits<double>::infinity();
  bool worst_exact = true;
  for (std::size_t i = 0; i < dimension; ++i) {
    const WorstCaseResult wc = worst_case_rademacher(restrict(p.cls, i), n, budgets);
    min_worst = std::min(min_worst, wc.value);
    worst_exact = worst_exact && wc.is_certified_max;
  }

  const double lower = K * max_coordinate / std::sqrt(8.0);
  const double tradeoff = std::numbers::sqrt2 * K * max_coordinate;
  const double per_coordinate_cap = std::sqrt(nn / K);
  const double khintchine_lower = std::sqrt(nn / (8.0 * K));

  out.identities_agree = close_tol(lhs, K * block_share * abs_sum_closed) &&
                         close_tol(lhs, K * block_value) &&
                         close_tol(block_value, block_share * abs_sum) &&
                         close_tol(abs_sum, abs_sum_closed) && coords_agree;
  const bool lower_ok = leq_tol(lower, lhs);
  const bool upper_ok = leq_tol(lhs, tradeoff);
  const bool per_coord_ok = leq_tol(max_coordinate, per_coordinate_cap);
  const bool khintchine_ok = leq_tol(khintchine_lower, block_value);
  const bool worst_ok = leq_tol(std::sqrt(nn / 2.0), min_worst);
  out.all_hold = out.identities_agree && lower_ok && upper_ok && per_coord_ok && khintchine_ok &&
                 worst_ok;

  r.id = InequalityId::prop1_lower;
  r.lhs = lhs;
  r.rhs = lower;
  r.ratio = safe_ratio(lhs, max_coordinate);
  r.set("K", K);
  r.set("n", nn);
  r.set("block_size", static_cast<double>(m));
  r.set("max_coord_rademacher", max_coordinate);
  r.set("abs_sum_expectation", abs_sum);
  r.set("abs_sum_closed_form", abs_sum_closed);
  r.set("lhs_closed_form", K * block_share * abs_sum_closed);
  r.set("block_expectation", block_value);
  r.set("khintchine_lower", khintchine_lower);
  r.set("rhs_tradeoff", tradeoff);
  r.set("per_coordinate_cap", per_coordinate_cap);
  r.set("worst_case_min_over_coords", min_worst);
  r.set("worst_case_target", std::sqrt(nn / 2.0));
  r.set("identities_agree", out.identities_agree ? 1.0 : 0.0);
  r.set("lower_holds", lower_ok ? 1.0 : 0.0);
  r.set("tradeoff_holds", upper_ok ? 1.0 : 0.0);
  r.set("per_coordinate_holds", per_coord_ok ? 1.0 : 0.0);
  r.set("khintchine_holds", khintchine_ok ? 1.0 : 0.0);
  r.set("worst_case_holds", worst_ok ? 1.0 : 0.0);
  r.verdict = worst_exact ? (out.all_hold ? Verdict::holds : Verdict::violated)
                          : Verdict::diagnostic_only;
  r.method = std::string("direction=lhs>=rhs;lhs=exact;closed_form=exact;R_n=") +
             (worst_exact ? "exact" : "heuristic");
  r.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace vcontract
