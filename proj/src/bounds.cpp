#include "vcontract/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "vcontract/error.hpp"

namespace vcontract {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const char* provenance(bool exact) { return exact ? "exact" : "heuristic"; }

}  // namespace

std::string_view to_string(InequalityId id) {
  switch (id) {
    case InequalityId::eq2_scalar: return "eq2_scalar";
    case InequalityId::eq3_maurer: return "eq3_maurer";
    case InequalityId::lemma1_cover: return "lemma1_cover";
    case InequalityId::lemma3_fat: return "lemma3_fat";
    case InequalityId::lemma2_diag: return "lemma2_diag";
    case InequalityId::dudley: return "dudley";
    case InequalityId::thm1_ratio: return "thm1_ratio";
    case InequalityId::thm3_ratio: return "thm3_ratio";
    case InequalityId::step_iii_monotone: return "step_iii_monotone";
    case InequalityId::prop1_lower: return "prop1_lower";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::diagnostic_only: return "diagnostic_only";
  }
  return "unknown";
}

std::optional<InequalityId> parse_inequality_id(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(InequalityId::prop1_lower); ++i) {
    const auto id = static_cast<InequalityId>(i);
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

std::optional<Verdict> parse_verdict(std::string_view name) {
  for (Verdict v : {Verdict::holds, Verdict::violated, Verdict::diagnostic_only})
    if (to_string(v) == name) return v;
  return std::nullopt;
}

void BoundReport::set(std::string name, double value) {
  for (auto& [k, v] : components)
    if (k == name) {
      v = value;
      return;
    }
  components.emplace_back(std::move(name), value);
}

std::optional<double> BoundReport::get(std::string_view name) const {
  for (const auto& [k, v] : components)
    if (k == name) return v;
  return std::nullopt;
}

Verdict judge(double lhs, double rhs, bool certified) {
  if (!certified) return Verdict::diagnostic_only;
  return leq_tol(lhs, rhs) ? Verdict::holds : Verdict::violated;
}

double safe_ratio(double lhs, double rhs) {
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : kInf;
  return lhs / rhs;
}

Instance Instance::make(FunctionClass cls, Sample sample, LipschitzSeq phi) {
  const ComposedTable composed = compose(phi, evaluate(cls, sample));
  double beta = std::max(cls.uniform_bound(), composed.observed_bound);
  if (beta == 0.0) beta = 1.0;
  double lipschitz = phi.declared_lipschitz;
  if (!(lipschitz > 0.0)) fail(ErrorKind::InvalidSpec, "declared Lipschitz constant must be positive");
  return Instance{std::move(cls), std::move(sample), std::move(phi), beta, lipschitz};
}

ScalarTable Instance::composed() const { return compose(phi, evaluate(cls, sample)).table; }

Instance Instance::rescaled() const {
  auto [cls_bar, phi_bar] = rescale(cls, phi, sample, beta, lipschitz);
  return Instance{std::move(cls_bar), sample, std::move(phi_bar), 1.0, 1.0};
}

// ---------------------------------------------------------------------------
// Chaining bound

void CoverProfile::validate() const {
  if (breakpoints.empty() || breakpoints.size() != log_sizes.size())
    fail(ErrorKind::InvalidProfile, "profile needs one log size per breakpoint");
  if (breakpoints.front() != 0.0)
    fail(ErrorKind::InvalidProfile, "profile must start at scale 0");
  for (std::size_t j = 0; j < breakpoints.size(); ++j) {
    if (!(log_sizes[j] >= 0.0) || !std::isfinite(log_sizes[j]))
      fail(ErrorKind::InvalidProfile, "log covering numbers must be finite and >= 0");
    if (j > 0 && !(breakpoints[j] > breakpoints[j - 1]))
      fail(ErrorKind::InvalidProfile, "breakpoints must be strictly increasing");
    if (j > 0 && log_sizes[j] > log_sizes[j - 1])
      fail(ErrorKind::InvalidProfile, "log covering numbers must not increase with scale");
  }
}

double CoverProfile::log_size_at(double eps) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), eps);
  if (it == breakpoints.begin()) return log_sizes.front();
  return log_sizes[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

CoverProfile cover_profile(const ScalarTable& a, const Budgets& budgets) {
  CoverProfile profile;
  profile.breakpoints.push_back(0.0);
  for (double d : pairwise_distances(a, CoverNorm::l2_rms))
    if (d > 0.0) profile.breakpoints.push_back(d);
  double running = kInf;
  for (double eps : profile.breakpoints) {
    const CoverResult cover = best_cover(a, eps, CoverNorm::l2_rms, budgets);
    profile.certified = profile.certified && cover.is_minimal;
    // A cover at a smaller scale is also a cover here.
    running = std::min(running, std::log(static_cast<double>(cover.size)));
    profile.log_sizes.push_back(running);
  }
  return profile;
}

BoundReport dudley_bound(const CoverProfile& profile, std::size_t n, std::optional<double> lhs) {
  profile.validate();
  if (n == 0) fail(ErrorKind::InvalidSpec, "n must be positive");
  const Stopwatch clock;
  const double nn = static_cast<double>(n);
  const auto& s = profile.breakpoints;

  auto integral_from = [&](double alpha) {
    double total = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double lo = std::max(alpha, s[j]);
      const double hi = std::min(1.0, j + 1 < s.size() ? s[j + 1] : kInf);
      if (hi > lo) total += std::sqrt(profile.log_sizes[j]) * (hi - lo);
    }
    return total;
  };

  std::vector<double> alphas{0.0};
  for (double b : s)
    if (b > 0.0 && b < 1.0) alphas.push_back(b);
  alphas.push_back(1.0);

  double best = kInf, best_alpha = 0.0, best_integral = 0.0;
  for (double alpha : alphas) {
    const double integral = integral_from(alpha);
    const double value = 4.0 * alpha * nn + 12.0 * std::sqrt(nn) * integral;
    if (value < best) {
      best = value;
      best_alpha = alpha;
      best_integral = integral;
    }
  }

  BoundReport r;
  r.id = InequalityId::dudley;
  r.rhs = best;
  r.set("alpha_star", best_alpha);
  r.set("integral", best_integral);
  r.set("c_alpha", 4.0);
  r.set("c_integral", 12.0);
  r.set("n", nn);
  r.set("breakpoints", static_cast<double>(s.size()));
  if (lhs) {
    r.lhs = *lhs;
    r.ratio = safe_ratio(r.lhs, r.rhs);
    r.verdict = judge(r.lhs, r.rhs, profile.certified);
    r.method = std::string("lhs=exact;rhs=") + (profile.certified ? "exact" : "greedy");
  } else {
    r.verdict = Verdict::diagnostic_only;
    r.method = std::string("rhs=") + (profile.certified ? "exact" : "greedy");
  }
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

BoundReport check_dudley(const Instance& inst, const Budgets& budgets) {
  const Stopwatch clock;
  const Instance bar = inst.rescaled();
  const ScalarTable table = bar.composed();
  const double lhs = exact_rademacher(table, budgets.exact_cap);
  BoundReport r = dudley_bound(cover_profile(table, budgets), bar.n(), lhs);
  r.set("beta", inst.beta);
  r.set("L", inst.lipschitz);
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

// ---------------------------------------------------------------------------
// Contraction inequalities

BoundReport check_scalar_contraction(const Instance& inst, const Budgets& budgets) {
  if (inst.dimension() != 1)
    fail(ErrorKind::InvalidSpec, "scalar contraction needs K = 1");
  const Stopwatch clock;
  const double L = inst.phi.analytic_constant(inst.phi.norm_p);
  const double lhs = exact_rademacher(inst.composed(), budgets.exact_cap);
  const double base = exact_rademacher(evaluate(inst.cls, inst.sample).coordinate(0), budgets.exact_cap);

  BoundReport r;
  r.id = InequalityId::eq2_scalar;
  r.lhs = lhs;
  r.rhs = L * base;
  r.ratio = safe_ratio(lhs, r.rhs);
  r.set("L", L);
  r.set("L_declared", inst.phi.declared_lipschitz);
  r.set("rademacher_class", base);
  r.set("n", static_cast<double>(inst.n()));
  r.set("M", static_cast<double>(inst.cls.num_functions()));
  r.verdict = judge(r.lhs, r.rhs, true);
  r.method = "lhs=exact;rhs=exact";
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

BoundReport check_maurer(const Instance& inst, const Budgets& budgets) {
  const Stopwatch clock;
  const EvaluatedClass ec = evaluate(inst.cls, inst.sample);
  const double L2 = inst.phi.analytic_constant(2.0);
  const double lhs = exact_rademacher(inst.composed(), budgets.exact_cap);
  const double multi = exact_multi_rademacher(ec, budgets.exact_cap);
  const std::size_t K = inst.dimension();

  double max_coordinate = 0.0;
  BoundReport r;
  r.id = InequalityId::eq3_maurer;
  for (std::size_t i = 0; i < K; ++i) {
    const double v = exact_rademacher(ec.coordinate(i), budgets.exact_cap);
    r.set("rademacher_coord_" + std::to_string(i), v);
    max_coordinate = std::max(max_coordinate, v);
  }
  r.lhs = lhs;
  r.rhs = std::numbers::sqrt2 * L2 * multi;
  r.ratio = safe_ratio(lhs, L2 * multi);
  const double tradeoff = std::numbers::sqrt2 * L2 * static_cast<double>(K) * max_coordinate;
  const bool main_ok = leq_tol(r.lhs, r.rhs);
  const bool tradeoff_ok = leq_tol(r.lhs, tradeoff);
  r.set("L2", L2);
  r.set("multi_rademacher", multi);
  r.set("max_coord_rademacher", max_coordinate);
  r.set("rhs_tradeoff", tradeoff);
  r.set("tradeoff_holds", tradeoff_ok ? 1.0 : 0.0);
  r.set("K", static_cast<double>(K));
  r.set("n", static_cast<double>(inst.n()));
  r.verdict = main_ok && tradeoff_ok ? Verdict::holds : Verdict::violated;
  r.method = "lhs=exact;rhs=exact";
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

// ---------------------------------------------------------------------------
// Covering lemma (and its l_p product-cover form)

BoundReport check_lemma1(const Instance& inst, double eps, std::optional<double> p,
                         const Budgets& budgets) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidSpec, "eps must be positive");
  const double norm = p.value_or(kInfNorm);
  if (!leq_tol(inst.phi.analytic_constant(norm), 1.0))
    fail(ErrorKind::InvalidNormalization, "phi must be 1-Lipschitz in the chosen norm; rescale first");
  const Stopwatch clock;

  const EvaluatedClass ec = evaluate(inst.cls, inst.sample);
  const std::size_t K = ec.output_dim();
  const std::size_t n = ec.length();
  const std::size_t M = ec.num_functions();

  BoundReport r;
  r.id = InequalityId::lemma1_cover;
  r.set("eps", eps);
  r.set("K", static_cast<double>(K));

  std::vector<double> scales(K, eps);
  if (p) {
    r.set("p", *p);
    std::vector<double> worst;
    bool exact_wc = true;
    for (const auto& wc : coordinate_worst_cases(inst.cls, n, budgets)) {
      worst.push_back(wc.value);
      exact_wc = exact_wc && wc.is_certified_max;
    }
    r.set("allocation_exact", exact_wc ? 1.0 : 0.0);
    if (std::all_of(worst.begin(), worst.end(), [](double w) { return w == 0.0; })) {
      // Every coordinate class is a single function; any split works.
      for (auto& s : scales) s = eps * std::pow(static_cast<double>(K), -1.0 / *p);
      r.notes.push_back("degenerate allocation: equal split");
    } else {
      scales = lp_scales(eps, worst, *p).scales;
    }
  }

  std::vector<CoverResult> covers;
  bool minimal = true;
  double product = 1.0;
  std::size_t max_size = 0;
  double sum_log = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    covers.push_back(best_cover(ec.coordinate(i), scales[i], CoverNorm::linf, budgets));
    minimal = minimal && covers.back().is_minimal;
    product *= static_cast<double>(covers.back().size);
    max_size = std::max(max_size, covers.back().size);
    sum_log += std::log(static_cast<double>(covers.back().size));
    r.set("eps_" + std::to_string(i), scales[i]);
    r.set("V_" + std::to_string(i), static_cast<double>(covers.back().size));
  }
  if (product > static_cast<double>(budgets.product_budget))
    fail(ErrorKind::BudgetExceeded, "cartesian-product cover exceeds product_budget");

  const ScalarTable composed = inst.composed();
  const std::size_t P = static_cast<std::size_t>(product);

  // Mapped product center number q: digit i (most significant first) picks
  // the center of coordinate i.
  auto mapped_center = [&](std::vector<std::size_t> digits) {
    std::vector<double> out(n);
    std::vector<double> v(K);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t i = 0; i < K; ++i) v[i] = covers[i].centers[digits[i]][t];
      out[t] = inst.phi.maps[t](v);
    }
    return out;
  };
  auto digits_of = [&](std::size_t q) {
    std::vector<std::size_t> digits(K);
    for (std::size_t i = K; i-- > 0;) {
      digits[i] = q % covers[i].size;
      q /= covers[i].size;
    }
    return digits;
  };

  std::size_t covered = 0;
  double worst_gap = 0.0;
  std::vector<std::vector<double>> all_centers;
  for (std::size_t m = 0; m < M; ++m) {
    std::vector<std::size_t> own(K);
    for (std::size_t i = 0; i < K; ++i) own[i] = covers[i].assignment[m];
    double gap = row_distance(composed.row(m), mapped_center(own), CoverNorm::l2_rms);
    if (gap > eps + 1e-12) {
      if (all_centers.empty())
        for (std::size_t q = 0; q < P; ++q) all_centers.push_back(mapped_center(digits_of(q)));
      for (const auto& c : all_centers) gap = std::min(gap, row_distance(composed.row(m), c, CoverNorm::l2_rms));
    }
    worst_gap = std::max(worst_gap, gap);
    if (gap <= eps + 1e-12) ++covered;
  }

  r.lhs = std::log(product);
  r.rhs = p ? sum_log : static_cast<double>(K) * std::log(static_cast<double>(max_size));
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.set("product_size", product);
  r.set("max_V_pow_K", std::pow(static_cast<double>(max_size), static_cast<double>(K)));
  r.set("covered", static_cast<double>(covered));
  r.set("M", static_cast<double>(M));
  r.set("max_rms_gap", worst_gap);
  if (M <= budgets.cover_exact_max)
    r.set("log_n2_proper", std::log(static_cast<double>(
                               min_cover(composed, eps, CoverNorm::l2_rms, CoverMode::exact, budgets).size)));
  const bool ok = covered == M && leq_tol(r.lhs, r.rhs);
  r.verdict = ok ? Verdict::holds : Verdict::violated;
  r.method = std::string("covers=") + (minimal ? "exact" : "greedy") + ";check=constructive";
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

// ---------------------------------------------------------------------------
// Fat-shattering lemmas

std::vector<WorstCaseResult> coordinate_worst_cases(const FunctionClass& cls, std::size_t n,
                                                    const Budgets& budgets, std::uint64_t seed) {
  std::vector<WorstCaseResult> out;
  for (std::size_t i = 0; i < cls.output_dim(); ++i)
    out.push_back(worst_case_rademacher(restrict(cls, i), n, budgets, seed));
  return out;
}

BoundReport check_lemma3(const ScalarClass& sc, std::size_t n, std::span<const double> eps_grid,
                         const Budgets& budgets) {
  const Stopwatch clock;
  const WorstCaseResult wc = worst_case_rademacher(sc, n, budgets);
  const double R = wc.value;
  const double nn = static_cast<double>(n);
  const double threshold = 2.0 * R / nn;

  BoundReport r;
  r.id = InequalityId::lemma3_fat;
  r.set("R_n", R);
  r.set("n", nn);
  r.set("threshold", threshold);

  bool certified = wc.is_certified_max;
  bool ok = true;
  std::size_t valid = 0;
  double worst_ratio = -1.0;
  bool recorded_failure = false;
  for (double eps : eps_grid) {
    // Strictly above the threshold: at equality a class of all sign patterns
    // on more than n points is shattered at scale eps.
    if (!(eps > threshold + kTolerance * std::max(1.0, threshold))) continue;
    ++valid;
    const FatResult fat = fat_dim(sc, eps, budgets);
    certified = certified && fat.is_certified;
    const double bound = 8.0 / nn * (R / eps) * (R / eps);
    const double d = static_cast<double>(fat.dimension);
    const double cap = std::min(bound, nn);
    const bool here = leq_tol(d, bound) && leq_tol(d, nn);
    ok = ok && here;
    const double ratio = safe_ratio(d, cap);
    // Report the worst grid point, preferring a failing one.
    const bool take = recorded_failure ? (!here && ratio > worst_ratio)
                                       : (!here || ratio > worst_ratio);
    if (take) {
      recorded_failure = recorded_failure || !here;
      worst_ratio = ratio;
      r.lhs = d;
      r.rhs = cap;
      r.set("eps_worst", eps);
      r.set("bound_8n", bound);
    }
  }
  r.set("valid_points", static_cast<double>(valid));
  r.ratio = valid == 0 ? 0.0 : worst_ratio;
  if (!certified) r.verdict = Verdict::diagnostic_only;
  else r.verdict = ok ? Verdict::holds : Verdict::violated;
  r.method = std::string("R_n=") + provenance(wc.is_certified_max) + ";fat=" +
             provenance(certified);
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

BoundReport rv_diagnostic(const ScalarClass& sc, const Sample& sample, double eps, double C,
                          double c, double delta, const Budgets& budgets) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::InvalidSpec, "eps must lie in (0, 1)");
  if (!(c > 0.0 && c < 1.0)) fail(ErrorKind::InvalidSpec, "c must lie in (0, 1)");
  if (!(C >= 0.0) || !(delta >= 0.0)) fail(ErrorKind::InvalidSpec, "C and delta must be >= 0");
  if (!leq_tol(sc.uniform_bound(), 1.0))
    fail(ErrorKind::InvalidNormalization, "class must be normalized to |f| <= 1");
  const Stopwatch clock;
  const double n = static_cast<double>(sample.size());

  const CoverResult cover = best_cover(sc.evaluate(sample), eps, CoverNorm::linf, budgets);
  const FatResult fat = fat_dim(sc, c * eps, budgets);
  const double d = static_cast<double>(fat.dimension);

  BoundReport r;
  r.id = InequalityId::lemma2_diag;
  r.lhs = std::log(static_cast<double>(cover.size));
  r.set("eps", eps);
  r.set("d", d);
  r.set("n", n);
  r.set("C", C);
  r.set("c", c);
  r.set("delta", delta);

  if (fat.dimension == 0) {
    r.rhs = 0.0;
    r.set("fitted_C", r.lhs == 0.0 ? 0.0 : kInf);
    if (r.lhs != 0.0) {
      r.set("flag_d_zero_cover_nontrivial", 1.0);
      r.notes.push_back("fat dimension 0 but the cover needs more than one ball");
    }
  } else {
    const double arg1 = std::exp(1.0) * n / (d * eps);
    const double arg2 = std::exp(1.0) * n / d;
    const bool clamped = arg1 < std::exp(1.0) || arg2 < std::exp(1.0);
    const double core = d * std::log(std::max(arg1, std::exp(1.0))) *
                        std::pow(std::log(std::max(arg2, std::exp(1.0))), delta);
    r.rhs = C * core;
    r.set("core", core);
    r.set("log_argument_clamped", clamped ? 1.0 : 0.0);
    r.set("fitted_C", r.lhs / core);
  }
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.verdict = Verdict::diagnostic_only;
  r.method = std::string("cover=") + (cover.is_minimal ? "exact" : "greedy") +
             ";fat=" + provenance(fat.is_certified);
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

// ---------------------------------------------------------------------------
// Theorem ratios

BoundReport thm_ratio(const Instance& inst, const ThmVariant& variant, const Budgets& budgets,
                      const std::vector<WorstCaseResult>* worst_case) {
  const Stopwatch clock;
  std::vector<WorstCaseResult> computed;
  if (worst_case == nullptr) {
    computed = coordinate_worst_cases(inst.cls, inst.n(), budgets);
    worst_case = &computed;
  }
  const std::size_t K = inst.dimension();
  const double n = static_cast<double>(inst.n());

  BoundReport r;
  r.id = variant.kind == ThmVariant::Kind::linf ? InequalityId::thm1_ratio : InequalityId::thm3_ratio;
  r.lhs = exact_rademacher(inst.composed(), budgets.exact_cap);

  double rbar = 0.0;
  bool exact = true;
  for (std::size_t i = 0; i < K; ++i) {
    const auto& wc = (*worst_case)[i];
    rbar = std::max(rbar, wc.value);
    exact = exact && wc.is_certified_max;
    r.set("R_n_" + std::to_string(i), wc.value);
  }
  r.set("rbar", rbar);
  r.set("K", static_cast<double>(K));
  r.set("n", n);
  r.set("beta", inst.beta);
  r.set("L", inst.lipschitz);

  if (variant.kind == ThmVariant::Kind::linf) {
    r.set("delta", variant.delta);
    const double arg = rbar > 0.0 ? inst.beta * n / rbar : kInf;
    const bool clamped = arg < std::exp(1.0);
    r.set("log_argument", arg);
    r.set("log_argument_clamped", clamped ? 1.0 : 0.0);
    r.rhs = rbar > 0.0 ? inst.lipschitz * std::sqrt(static_cast<double>(K)) * rbar *
                             std::pow(std::log(std::max(arg, std::exp(1.0))), 1.5 + variant.delta)
                       : 0.0;
  } else {
    const double p = variant.p;
    if (!(p > 0.0) || std::isinf(p)) fail(ErrorKind::InvalidSpec, "p must lie in (0, inf)");
    r.set("p", p);
    const double a = 2.0 * p / (2.0 + p);
    double sum = 0.0;
    for (std::size_t i = 0; i < K; ++i)
      if ((*worst_case)[i].value > 0.0) sum += std::pow((*worst_case)[i].value, a);
    r.rhs = inst.lipschitz * std::pow(sum, 1.0 / a);
  }

  if (rbar == 0.0 && r.lhs > 0.0) {
    r.set("degenerate_core", 1.0);
    r.notes.push_back(std::string(to_string(ErrorKind::DegenerateCore)) +
                      ": max_i R_n(F|_i) = 0 with positive left side");
  }
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.verdict = Verdict::diagnostic_only;
  r.method = std::string("lhs=exact;R_n=") + provenance(exact);
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

BoundReport step_iii_monotone_check(double a, double b, double delta, std::span<const double> grid) {
  if (!(b > 0.0) || !(a >= b)) fail(ErrorKind::InvalidSpec, "need a >= b > 0");
  if (!(delta >= 0.0)) fail(ErrorKind::InvalidSpec, "delta must be >= 0");
  const double upper = b / std::exp(1.0 + delta);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] > 0.0) || grid[j] > upper * (1.0 + 1e-12))
      fail(ErrorKind::InvalidSpec, "grid must lie in (0, b / e^{1+delta}]");
    if (j > 0 && !(grid[j] > grid[j - 1])) fail(ErrorKind::InvalidSpec, "grid must be increasing");
  }
  const Stopwatch clock;
  auto f = [&](double x) {
    const double lb = std::log(b / x);
    return x * std::log(a / x) * (delta == 0.0 ? 1.0 : std::pow(lb, delta));
  };

  BoundReport r;
  r.id = InequalityId::step_iii_monotone;
  double worst_drop = 0.0;
  bool ok = true;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double drop = f(grid[j - 1]) - f(grid[j]);
    worst_drop = std::max(worst_drop, drop);
    ok = ok && drop <= kTolerance;
  }
  r.lhs = worst_drop;
  r.rhs = 0.0;
  r.ratio = 0.0;
  r.set("a", a);
  r.set("b", b);
  r.set("delta", delta);
  r.set("grid_points", static_cast<double>(grid.size()));
  r.set("x_max", grid.empty() ? 0.0 : grid.back());
  r.verdict = ok ? Verdict::holds : Verdict::violated;
  r.method = "finite_differences";
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

std::vector<double> step_iii_grid(double b, double delta, std::size_t points) {
  const double upper = b / std::exp(1.0 + delta);
  std::vector<double> grid(points);
  for (std::size_t j = 0; j < points; ++j)
    grid[j] = upper * static_cast<double>(j + 1) / static_cast<double>(points);
  return grid;
}

}  // namespace vcontract
