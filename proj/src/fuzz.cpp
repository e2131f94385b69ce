#include <algorithm>
#include <cmath>
#include <limits>

#include "vcontract/error.hpp"
#include "vcontract/experiments.hpp"
#include "vcontract/rng.hpp"

namespace vcontract {

namespace {

std::vector<double> random_vector(Xorshift64Star& rng, std::size_t size, double lo, double hi) {
  std::vector<double> v(size);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

LipschitzMap random_vector_map(Xorshift64Star& rng, std::size_t K) {
  switch (rng.below(6)) {
    case 0: return LipschitzMap::max();
    case 1: return LipschitzMap::neg_min();
    case 2: return LipschitzMap::softmax(rng.below(2) == 0 ? 0.25 : 1.0);
    case 3: return LipschitzMap::projection(rng.below(K));
    case 4: {
      auto w = random_vector(rng, K, -1.0, 1.0);
      return LipschitzMap::affine(std::move(w), rng.uniform(-0.5, 0.5));
    }
    default: {
      std::vector<AffinePiece> pieces(2 + rng.below(2));
      for (auto& piece : pieces) {
        piece.weights = random_vector(rng, K, -1.0, 1.0);
        piece.bias = rng.uniform(-0.5, 0.5);
      }
      return LipschitzMap::max_affine(std::move(pieces));
    }
  }
}

LipschitzMap random_scalar_map(Xorshift64Star& rng) {
  switch (rng.below(4)) {
    case 0: return LipschitzMap::projection(0);
    case 1: return LipschitzMap::affine({rng.uniform(-2.0, 2.0)}, rng.uniform(-0.5, 0.5));
    case 2: return LipschitzMap::max_affine({{{1.0}, 0.0}, {{-1.0}, 0.0}});
    default: {
      std::vector<AffinePiece> pieces(2);
      for (auto& piece : pieces) piece = {{rng.uniform(-2.0, 2.0)}, rng.uniform(-0.5, 0.5)};
      return LipschitzMap::max_affine(std::move(pieces));
    }
  }
}

LipschitzSeq with_analytic_constant(std::vector<LipschitzMap> maps) {
  LipschitzSeq phi;
  phi.maps = std::move(maps);
  phi.norm_p = kInfNorm;
  phi.declared_lipschitz = phi.analytic_constant(kInfNorm);
  // A zero map still needs a positive constant for the normalization.
  if (!(phi.declared_lipschitz > 0.0)) phi.declared_lipschitz = 1.0;
  return phi;
}

// The grid for the fat-shattering check: just above the threshold, and a
// linear sweep up to past the diameter of the class.
std::vector<double> lemma3_grid(double R, std::size_t n, double bound) {
  const double threshold = 2.0 * R / static_cast<double>(n);
  std::vector<double> grid;
  if (threshold > 0.0)
    for (double f : {1.001, 1.01, 1.1, 1.5, 2.0, 3.0}) grid.push_back(threshold * f);
  const double top = 2.0 * bound + 0.1;
  for (int j = 1; j <= 8; ++j) grid.push_back(top * j / 8.0);
  std::sort(grid.begin(), grid.end());
  return grid;
}

// Worst of several reports of one kind: a violation first, then the largest ratio.
BoundReport worst_of(std::vector<BoundReport> reports) {
  auto rank = [](const BoundReport& r) { return r.verdict == Verdict::violated ? 1 : 0; };
  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& a = reports[i];
    const auto& b = reports[best];
    if (rank(a) > rank(b) || (rank(a) == rank(b) && a.ratio > b.ratio)) best = i;
  }
  return std::move(reports[best]);
}

const char* family_name(std::uint64_t family) {
  switch (family) {
    case 0: return "random_table";
    case 1: return "quantized_table";
    case 2: return "hyperplane_grid";
    default: return "kmeans_distance";
  }
}

SuiteCase run_case(const SuiteSpec& spec, std::uint64_t seed, std::size_t index) {
  const GeneratedInstance g = generate_instance(spec, seed, index);
  const Instance& inst = g.instance;
  const Instance bar = inst.rescaled();
  const Budgets& budgets = spec.budgets;
  const std::size_t K = inst.dimension();
  const std::size_t n = inst.n();

  SuiteCase c;
  c.index = index;
  c.family = g.family;
  c.n = n;
  c.dimension = K;
  c.functions = inst.cls.num_functions();
  c.domain = inst.cls.domain().size;

  c.reports.push_back(check_scalar_contraction(g.scalar, budgets));
  c.reports.push_back(check_maurer(inst, budgets));

  std::vector<BoundReport> l1, lp;
  for (double eps : spec.lemma1_scales) {
    l1.push_back(check_lemma1(bar, eps, std::nullopt, budgets));
    lp.push_back(check_lemma1(bar, eps, spec.lp, budgets));
  }
  c.reports.push_back(worst_of(std::move(l1)));
  c.reports.push_back(worst_of(std::move(lp)));

  const auto bar_worst = coordinate_worst_cases(bar.cls, n, budgets);
  std::vector<BoundReport> l3, rv;
  for (std::size_t i = 0; i < K; ++i) {
    const ScalarClass sc = restrict(bar.cls, i);
    const auto grid = lemma3_grid(bar_worst[i].value, n, sc.uniform_bound());
    l3.push_back(check_lemma3(sc, n, grid, budgets));
    for (double eps : spec.rv_scales)
      rv.push_back(rv_diagnostic(sc, bar.sample, eps, spec.rv_C, spec.rv_c, spec.delta, budgets));
  }
  c.reports.push_back(worst_of(std::move(l3)));
  // Largest fitted constant across coordinates and scales.
  std::size_t best = 0;
  for (std::size_t i = 1; i < rv.size(); ++i)
    if (rv[i].get("fitted_C").value_or(0.0) > rv[best].get("fitted_C").value_or(0.0)) best = i;
  c.reports.push_back(std::move(rv[best]));

  c.reports.push_back(check_dudley(inst, budgets));

  const auto worst = coordinate_worst_cases(inst.cls, n, budgets);
  c.reports.push_back(thm_ratio(inst, {ThmVariant::Kind::linf, spec.delta, spec.lp}, budgets, &worst));
  c.reports.push_back(thm_ratio(inst, {ThmVariant::Kind::lp, spec.delta, spec.lp}, budgets, &worst));
  return c;
}

}  // namespace

GeneratedInstance generate_instance(const SuiteSpec& spec, std::uint64_t seed, std::size_t index) {
  if (spec.max_dimension == 0 || spec.max_n == 0 || spec.max_domain == 0 ||
      spec.max_functions == 0)
    fail(ErrorKind::InvalidSpec, "suite limits must be positive");
  Xorshift64Star rng(derive_seed(seed, index));

  const std::size_t K = 1 + rng.below(std::min(spec.max_dimension, spec.budgets.exact_cap));
  const std::size_t n_cap = std::max<std::size_t>(1, std::min(spec.max_n, spec.budgets.exact_cap / K));
  const std::size_t n = 1 + rng.below(n_cap);
  const std::size_t X = 1 + rng.below(spec.max_domain);
  const std::size_t M = 1 + rng.below(spec.max_functions);
  const std::uint64_t family = rng.below(4);

  BuiltinSpec b;
  b.num_functions = M;
  b.domain_size = X;
  b.output_dim = K;
  switch (family) {
    case 0: {
      static constexpr double kBounds[] = {0.5, 1.0, 2.0};
      b.family = BuiltinSpec::Family::random_table;
      b.bound = kBounds[rng.below(3)];
      break;
    }
    case 1:
      b.family = BuiltinSpec::Family::random_table;
      b.bound = 1.0;
      b.quantum = 0.5;
      break;
    case 2:
      b.family = BuiltinSpec::Family::hyperplane_grid;
      b.input_dim = 1;
      b.grid_points = X;
      break;
    default:
      b.family = BuiltinSpec::Family::kmeans_distance;
      b.input_dim = 2;
      break;
  }
  b.seed = rng.next();
  FunctionClass cls = make_builtin_class(b);

  std::vector<std::size_t> points(n);
  for (auto& x : points) x = rng.below(cls.domain().size);
  Sample sample(std::move(points));

  std::vector<LipschitzMap> maps;
  for (std::size_t t = 0; t < n; ++t) maps.push_back(random_vector_map(rng, K));
  std::vector<LipschitzMap> scalar_maps;
  for (std::size_t t = 0; t < n; ++t) scalar_maps.push_back(random_scalar_map(rng));

  Instance scalar = Instance::make(as_vector_class(restrict(cls, 0)), sample,
                                   with_analytic_constant(std::move(scalar_maps)));
  Instance vector = Instance::make(std::move(cls), std::move(sample),
                                   with_analytic_constant(std::move(maps)));
  return {family_name(family), std::move(vector), std::move(scalar)};
}

SuiteResult fuzz_suite(const SuiteSpec& spec, std::uint64_t seed) {
  const std::size_t count = spec.instances;
  std::vector<std::optional<SuiteCase>> slots(count);
  std::vector<std::optional<Error>> errors(count);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      slots[i] = run_case(spec, seed, i);
    } catch (const Error& e) {
      errors[i] = e;
    }
  }
  for (std::size_t i = 0; i < count; ++i)
    if (errors[i]) throw *errors[i];

  SuiteResult out;
  out.cases.reserve(count);
  for (auto& s : slots) out.cases.push_back(std::move(*s));
  out.summary = summarize(seed, out.cases);
  return out;
}

SuiteSummary summarize(std::uint64_t seed, const std::vector<SuiteCase>& cases) {
  SuiteSummary s;
  s.seed = seed;
  s.instances = cases.size();
  for (const auto& c : cases) {
    for (const auto& r : c.reports) {
      InequalityStats& st = s.by_inequality[std::string(to_string(r.id))];
      ++st.count;
      switch (r.verdict) {
        case Verdict::holds: ++st.holds; break;
        case Verdict::violated: ++st.violated; ++s.certified_violations; break;
        case Verdict::diagnostic_only: ++st.diagnostic; break;
      }
      const bool finite = std::isfinite(r.lhs) && std::isfinite(r.rhs) && std::isfinite(r.ratio);
      st.all_finite = st.all_finite && finite;
      if (std::isfinite(r.ratio)) st.max_ratio = std::max(st.max_ratio, r.ratio);
      if (r.id == InequalityId::lemma2_diag) {
        const double fitted = r.get("fitted_C").value_or(0.0);
        if (std::isfinite(fitted))
          s.max_fitted_rv_constant = std::max(s.max_fitted_rv_constant, fitted);
      }
      if (r.id == InequalityId::thm1_ratio && std::isfinite(r.ratio))
        s.max_thm1_ratio = std::max(s.max_thm1_ratio, r.ratio);
      if (r.id == InequalityId::thm3_ratio && std::isfinite(r.ratio))
        s.max_thm3_ratio = std::max(s.max_thm3_ratio, r.ratio);
    }
  }
  return s;
}

}  // namespace vcontract
