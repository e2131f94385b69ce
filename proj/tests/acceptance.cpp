// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "vcontract/bounds.hpp"
#include "vcontract/cli.hpp"
#include "vcontract/experiments.hpp"
#include "vcontract/geometry.hpp"
#include "vcontract/rng.hpp"
#include "oracles.hpp"

using namespace vcontract;

namespace {

constexpr double kExactTol = 1e-9;
constexpr double kAllocTol = 1e-12;
constexpr double kProp1Seconds = 5.0;
constexpr double kKhintchineSeconds = 10.0;
constexpr double kFuzzSeconds = 120.0;
constexpr std::uint64_t kSuiteSeed = 20261016;

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

oracle::Rows rows_of(const ScalarTable& a) {
  oracle::Rows r;
  for (std::size_t m = 0; m < a.rows(); ++m) r.emplace_back(a.row(m).begin(), a.row(m).end());
  return r;
}

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome prop1_gap() {
  const auto t0 = std::chrono::steady_clock::now();
  const Prop1Verification v = prop1_verify(4, 16);
  const double secs = seconds_since(t0);
  const BoundReport& r = v.report;
  const double maxc = r.get("max_coord_rademacher").value_or(NAN);

  const Prop1Instance p = prop1_instance(4, 16);
  const double oracle_lhs = oracle::rademacher(rows_of(p.instance().composed()));
  const double oracle_coord = oracle::rademacher(rows_of(evaluate(p.cls, p.sample).coordinate(0)));

  const double lower = 4.0 * 1.5 / std::sqrt(8.0), upper = std::sqrt(2.0) * 4.0 * 1.5;
  const bool ok = close(r.lhs, 3.0, kExactTol) && close(maxc, 1.5, kExactTol) &&
                  close(oracle_lhs, 3.0, kExactTol) && close(oracle_coord, 1.5, kExactTol) &&
                  r.lhs >= lower && r.lhs <= upper && v.all_hold && secs < kProp1Seconds;
  char buf[160];
  std::snprintf(buf, sizeof buf, "lhs=%.12g max_i=%.12g lower=%.6g upper=%.6g %.2fs", r.lhs, maxc, lower,
                upper, secs);
  return {ok, buf};
}

Outcome khintchine() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::size_t first_bad = 0;
  for (std::size_t m = 1; m <= 20; ++m) {
    const double v = abs_sum_expectation(m);
    const bool good = close(v, oracle::abs_sum(m), kExactTol) && std::sqrt(m / 2.0) <= v + kExactTol &&
                      v <= std::sqrt(static_cast<double>(m)) + kExactTol;
    if (!good && ok) first_bad = m;
    ok = ok && good;
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < kKhintchineSeconds;
  char buf[96];
  std::snprintf(buf, sizeof buf, "m<=20 first_bad=%zu %.2fs", first_bad, secs);
  return {ok, buf};
}

Outcome worst_case() {
  bool ok = true;
  double value = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const WorstCaseResult wc = worst_case_rademacher(restrict(make_sign_product_class(3), i), 6);
    value = wc.value;
    ok = ok && wc.is_certified_max && wc.method == SearchMethod::exhaustive &&
         wc.argmax_multiset == std::vector<std::size_t>(6, i) && close(wc.value, 1.875, kExactTol) &&
         close(wc.value, oracle::abs_sum(6), kExactTol) && wc.value >= std::sqrt(3.0);
  }
  return {ok, "value=" + std::to_string(value)};
}

Outcome fuzz(const SuiteResult& suite, double secs) {
  bool ok = suite.cases.size() == 200 && secs < kFuzzSeconds;
  std::size_t checked = 0, bad = 0;
  for (const auto& c : suite.cases)
    for (const auto& r : c.reports) {
      switch (r.id) {
        case InequalityId::eq2_scalar:
        case InequalityId::eq3_maurer:
        case InequalityId::lemma1_cover:
        case InequalityId::lemma3_fat:
        case InequalityId::dudley:
          ++checked;
          if (r.verdict != Verdict::holds) ++bad;
          break;
        default:
          break;
      }
    }
  ok = ok && bad == 0 && checked > 0 && suite.summary.certified_violations == 0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "instances=%zu checks=%zu not_holding=%zu %.2fs", suite.cases.size(),
                checked, bad, secs);
  return {ok, buf};
}

Outcome rescaling() {
  SuiteSpec spec;
  double worst = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < 50; ++i) {
    const Instance inst = generate_instance(spec, kSuiteSeed, i).instance;
    const Instance bar = inst.rescaled();
    const double lhs = exact_rademacher(inst.composed());
    const double rhs = inst.beta * inst.lipschitz * exact_rademacher(bar.composed());
    worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
    ok = ok && close(rhs, lhs, kExactTol);
    for (auto kind : {ThmVariant::Kind::linf, ThmVariant::Kind::lp}) {
      const double a = thm_ratio(inst, {kind, spec.delta, spec.lp}).ratio;
      const double b = thm_ratio(bar, {kind, spec.delta, spec.lp}).ratio;
      ok = ok && close(b, a, kExactTol);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max_rel_gap=%.3g", worst);
  return {ok, buf};
}

Outcome allocation() {
  Xorshift64Star rng(kSuiteSeed);
  double worst = 0.0;
  for (double p : {0.5, 1.0, 2.0, 5.0})
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> w(1 + rng.below(8));
      for (auto& x : w) x = rng.uniform(0.0, 3.0);
      w[rng.below(w.size())] += 0.1;
      const double eps = rng.uniform(0.01, 2.0);
      const LpScales s = lp_scales(eps, w, p);
      long double acc = 0.0L;
      for (double e : s.scales) acc += std::pow(static_cast<long double>(e), static_cast<long double>(p));
      const double agg = static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(p)));
      worst = std::max(worst, std::fabs(agg - eps) / std::max(1.0, eps));
    }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max_rel_gap=%.3g", worst);
  return {worst <= kAllocTol, buf};
}

Outcome calibration() {
  Xorshift64Star rng(kSuiteSeed);
  ScalarTable a(8, 12);
  for (std::size_t m = 0; m < a.rows(); ++m)
    for (std::size_t t = 0; t < a.cols(); ++t) a(m, t) = rng.uniform(-1.0, 1.0);
  const double exact = exact_rademacher(a);
  const bool oracle_ok = close(exact, oracle::rademacher(rows_of(a)), kExactTol);
  int covered = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const RademacherEstimate e = mc_rademacher(a, 10000, 0.95, derive_seed(kSuiteSeed, rep));
    if (std::fabs(e.value - exact) <= e.ci_half_width) ++covered;
  }
  return {oracle_ok && covered >= 90, "covered=" + std::to_string(covered) + "/100"};
}

Outcome shattering() {
  Xorshift64Star rng(kSuiteSeed);
  std::size_t compared = 0, disagreements = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t M = 1 + rng.below(5), X = 1 + rng.below(4);
    // Lattice values of step 0.05 so every window endpoint lies on the 0.01 grid.
    oracle::Rows values(M, std::vector<double>(X));
    for (auto& r : values)
      for (auto& v : r) v = static_cast<double>(rng.below(21)) * 0.05;
    ScalarTable tab(M, X);
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t x = 0; x < X; ++x) tab(m, x) = values[m][x];
    const ScalarClass sc(Domain::of_size(X), tab);
    // Every sequence of length 1..3 over the domain, repeats included.
    for (std::size_t len = 1; len <= 3; ++len) {
      std::size_t total = 1;
      for (std::size_t j = 0; j < len; ++j) total *= X;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::size_t> pts(len);
        std::size_t c = code;
        for (auto& p : pts) {
          p = c % X;
          c /= X;
        }
        oracle::Rows rows(M, std::vector<double>(len));
        for (std::size_t m = 0; m < M; ++m)
          for (std::size_t t = 0; t < len; ++t) rows[m][t] = values[m][pts[t]];
        for (double g : {0.1, 0.5, 1.0}) {
          ++compared;
          if (shatter_check(sc, Sample(pts), g).shattered !=
              oracle::shattered_on_grid(rows, g, 0.0, 1.0, 0.01))
            ++disagreements;
        }
      }
    }
  }
  return {disagreements == 0,
          "compared=" + std::to_string(compared) + " disagreements=" + std::to_string(disagreements)};
}

Outcome ratios(const SuiteResult& suite) {
  bool finite = true;
  for (const auto& c : suite.cases)
    for (const auto& r : c.reports)
      if (r.id == InequalityId::thm1_ratio || r.id == InequalityId::thm3_ratio)
        finite = finite && std::isfinite(r.ratio);
  finite = finite && std::isfinite(suite.summary.max_thm1_ratio) &&
           std::isfinite(suite.summary.max_thm3_ratio) &&
           suite.summary.by_inequality.count("thm1_ratio") == 1 &&
           suite.summary.by_inequality.count("thm3_ratio") == 1;
  bool monotone = true;
  for (double delta : {0.0, 0.25, 0.5, 1.0})
    for (double b : {std::exp(1.0 + delta), 10.0, 1e4}) {
      const auto grid = step_iii_grid(b, delta, 1000);
      monotone = monotone && grid.size() == 1000 &&
                 step_iii_monotone_check(b, b, delta, grid).verdict == Verdict::holds;
    }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max_thm1=%.6g max_thm3=%.6g step_iii=%s", suite.summary.max_thm1_ratio,
                suite.summary.max_thm3_ratio, monotone ? "monotone" : "not monotone");
  return {finite && monotone, buf};
}

Outcome determinism() {
  auto emit_suite = [](int threads) {
    std::ostringstream out, err;
    const int status = run_cli({"suite", "--seed", std::to_string(kSuiteSeed), "--no-timestamp", "--threads",
                                std::to_string(threads)},
                               out, err);
    return std::make_pair(status, out.str());
  };
  const auto [s1, one] = emit_suite(1);
  const auto [s8, eight] = emit_suite(8);
  const bool ok = s1 == kExitOk && s8 == kExitOk && !one.empty() && one == eight;
  return {ok, "bytes=" + std::to_string(one.size()) + (one == eight ? " identical" : " differ")};
}

}  // namespace

int main() {
  SuiteSpec spec;
  spec.instances = 200;
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteResult suite = fuzz_suite(spec, kSuiteSeed);
  const double suite_secs = seconds_since(t0);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"lower-bound gap K=4 n=16", prop1_gap},
      {"absolute sign sums m<=20", khintchine},
      {"worst case of sign-product coordinates", worst_case},
      {"certified inequality fuzz (200 instances)", [&] { return fuzz(suite, suite_secs); }},
      {"rescaling invariance (50 instances)", rescaling},
      {"l_p allocation aggregates to eps", allocation},
      {"Monte Carlo interval coverage n=12", calibration},
      {"shattering agrees with dense grid", shattering},
      {"theorem ratios finite, step monotone", [&] { return ratios(suite); }},
      {"suite bytes identical at 1 and 8 threads", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    failures += !o.pass;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
