#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vcontract/complexity.hpp"
#include "vcontract/geometry.hpp"
#include "vcontract/lipschitz.hpp"
#include "vcontract/model.hpp"

namespace vcontract {

enum class InequalityId {
  eq2_scalar,
  eq3_maurer,
  lemma1_cover,
  lemma3_fat,
  lemma2_diag,
  dudley,
  thm1_ratio,
  thm3_ratio,
  step_iii_monotone,
  prop1_lower,
};

enum class Verdict { holds, violated, diagnostic_only };

std::string_view to_string(InequalityId id);
std::string_view to_string(Verdict v);
std::optional<InequalityId> parse_inequality_id(std::string_view name);
std::optional<Verdict> parse_verdict(std::string_view name);

struct BoundReport {
  InequalityId id = InequalityId::eq2_scalar;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<std::pair<std::string, double>> components;  // insertion order
  Verdict verdict = Verdict::diagnostic_only;
  std::string method;  // provenance of each side, e.g. "lhs=exact;rhs=exact"
  std::vector<std::string> notes;
  double runtime_ms = 0.0;

  void set(std::string name, double value);
  std::optional<double> get(std::string_view name) const;

  bool operator==(const BoundReport&) const = default;
};

/// holds / violated when both sides are certified, diagnostic_only otherwise.
/// A violation needs lhs > rhs + 1e-9 max(1, |lhs|, |rhs|).
Verdict judge(double lhs, double rhs, bool certified);

/// lhs / rhs with 0/0 = 0 and x/0 = inf.
double safe_ratio(double lhs, double rhs);

/// A class, a sample and a Lipschitz sequence, with the normalizing pair
/// (beta, L) the theorems are stated for.
struct Instance {
  FunctionClass cls;
  Sample sample;
  LipschitzSeq phi;
  double beta = 1.0;
  double lipschitz = 1.0;

  /// beta = max(uniform bound, max |phi_t(f(x_t))|), L = declared constant.
  static Instance make(FunctionClass cls, Sample sample, LipschitzSeq phi);

  std::size_t n() const { return sample.size(); }
  std::size_t dimension() const { return cls.output_dim(); }
  ScalarTable composed() const;
  /// The same instance after rescaling to beta = L = 1.
  Instance rescaled() const;
};

/// log N_2(eps) as a right-continuous step function: log_sizes[j] holds on
/// [breakpoints[j], breakpoints[j+1]), the last value from the last breakpoint on.
struct CoverProfile {
  std::vector<double> breakpoints;
  std::vector<double> log_sizes;
  bool certified = true;  // exact minimum proper covers at every breakpoint

  void validate() const;
  double log_size_at(double eps) const;
};

/// Profile of the RMS proper covering numbers of a table. Breakpoints are 0
/// and the distinct pairwise distances.
CoverProfile cover_profile(const ScalarTable& a, const Budgets& budgets = {});

/// inf_{alpha > 0} { 4 alpha n + 12 sqrt(n) int_alpha^1 sqrt(log N_2(eps)) deps },
/// evaluated exactly over the step profile. rhs holds the bound; when `lhs`
/// is given the report is judged against it.
BoundReport dudley_bound(const CoverProfile& profile, std::size_t n,
                         std::optional<double> lhs = std::nullopt);

/// Dudley check on the rescaled instance: lhs = R(phi_bar o F_bar; x).
BoundReport check_dudley(const Instance& inst, const Budgets& budgets = {});

/// R(phi o F; x) <= L R(F; x) for K = 1, L the analytic constant of phi.
BoundReport check_scalar_contraction(const Instance& inst, const Budgets& budgets = {});

/// R(phi o F; x) <= sqrt(2) L sum-of-coordinates complexity, L the analytic
/// l_2 constant. Also records sqrt(2) K max_i R(F|_i; x) as rhs_tradeoff.
BoundReport check_maurer(const Instance& inst, const Budgets& budgets = {});

/// Builds proper L_inf covers V_i of each F|_i on the sample (at scale eps, or
/// at the l_p allocation eps_i when `p` is given), maps their cartesian
/// product through phi and verifies it is an RMS eps-cover of phi o F.
/// Requires a rescaled instance (phi 1-Lipschitz).
BoundReport check_lemma1(const Instance& inst, double eps, std::optional<double> p = std::nullopt,
                         const Budgets& budgets = {});

/// For each grid eps > (2/n) R_n: fat_eps <= (8/n) (R_n / eps)^2 and fat_eps <= n.
BoundReport check_lemma3(const ScalarClass& sc, std::size_t n, std::span<const double> eps_grid,
                         const Budgets& budgets = {});

/// log N_inf(F|_i, eps, x) against C d log(en/(d eps)) log^delta(en/d), d = fat_{c eps}.
/// Always diagnostic; records the smallest C that makes the inequality hold.
BoundReport rv_diagnostic(const ScalarClass& sc, const Sample& sample, double eps, double C,
                          double c, double delta, const Budgets& budgets = {});

struct ThmVariant {
  enum class Kind { linf, lp } kind = Kind::linf;
  double delta = 0.5;  // linf
  double p = 2.0;      // lp
};

/// lhs = R(phi o F; x) over the theorem's core (constant omitted):
///   linf: L sqrt(K) rbar log^{3/2 + delta}(max(e, beta n / rbar)),
///   lp:   L (sum_i R_n(F|_i)^{2p/(2+p)})^{(2+p)/(2p)}.
/// `worst_case` may pass precomputed per-coordinate results.
BoundReport thm_ratio(const Instance& inst, const ThmVariant& variant, const Budgets& budgets = {},
                      const std::vector<WorstCaseResult>* worst_case = nullptr);

/// Checks x -> x log(a/x) log^delta(b/x) is non-decreasing on the grid
/// (finite differences >= -1e-9).
BoundReport step_iii_monotone_check(double a, double b, double delta, std::span<const double> grid);

/// `points` evenly spaced grid points on (0, b / e^{1+delta}].
std::vector<double> step_iii_grid(double b, double delta, std::size_t points);

/// Per-coordinate worst-case complexities of an instance's class.
std::vector<WorstCaseResult> coordinate_worst_cases(const FunctionClass& cls, std::size_t n,
                                                    const Budgets& budgets = {},
                                                    std::uint64_t seed = 0);

}  // namespace vcontract
