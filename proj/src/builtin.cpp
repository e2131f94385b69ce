#include <cmath>

#include "vcontract/error.hpp"
#include "vcontract/model.hpp"
#include "vcontract/rng.hpp"

namespace vcontract {

namespace {

constexpr std::size_t kMaxTensorEntries = std::size_t{1} << 24;

void check_sizes(const BuiltinSpec& spec) {
  if (spec.num_functions == 0 || spec.output_dim == 0)
    fail(ErrorKind::InvalidSpec, "builtin class needs M >= 1 and K >= 1");
  if (spec.family != BuiltinSpec::Family::hyperplane_grid && spec.domain_size == 0)
    fail(ErrorKind::InvalidSpec, "builtin class needs a non-empty domain");
}

FunctionClass random_table(const BuiltinSpec& spec) {
  if (!(spec.bound >= 0.0) || !std::isfinite(spec.bound))
    fail(ErrorKind::InvalidSpec, "random_table bound must be finite and >= 0");
  Xorshift64Star rng(spec.seed);
  const std::size_t count = spec.num_functions * spec.domain_size * spec.output_dim;
  if (count > kMaxTensorEntries) fail(ErrorKind::BudgetExceeded, "class tensor too large");
  std::vector<double> values(count);
  for (double& v : values) {
    v = rng.uniform(-spec.bound, spec.bound);
    if (spec.quantum > 0.0) v = spec.quantum * std::round(v / spec.quantum);
  }
  return FunctionClass(Domain::of_size(spec.domain_size), spec.num_functions,
                       spec.output_dim, std::move(values));
}

// Domain: grid_points^input_dim points of the regular grid on [-1, 1]^d.
// Function m, coordinate k: <w_{m,k}, x> + b_{m,k}.
FunctionClass hyperplane_grid(const BuiltinSpec& spec) {
  const std::size_t d = spec.input_dim;
  const std::size_t g = spec.grid_points;
  if (d == 0 || g == 0) fail(ErrorKind::InvalidSpec, "hyperplane grid needs d >= 1, g >= 1");
  std::size_t domain_size = 1;
  for (std::size_t i = 0; i < d; ++i) {
    domain_size *= g;
    if (domain_size > kMaxTensorEntries) fail(ErrorKind::BudgetExceeded, "grid too large");
  }
  const std::size_t M = spec.num_functions;
  const std::size_t K = spec.output_dim;
  if (M * domain_size * K > kMaxTensorEntries)
    fail(ErrorKind::BudgetExceeded, "class tensor too large");

  std::vector<double> weights;
  if (spec.weights) {
    weights = *spec.weights;
    if (weights.size() != M * K * (d + 1))
      fail(ErrorKind::InvalidSpec, "hyperplane weights must have M*K*(d+1) entries");
  } else {
    Xorshift64Star rng(spec.seed);
    weights.resize(M * K * (d + 1));
    for (double& w : weights) w = rng.uniform(-1.0, 1.0);
  }

  std::vector<double> points(domain_size * d);
  for (std::size_t x = 0; x < domain_size; ++x) {
    std::size_t rest = x;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t idx = rest % g;
      rest /= g;
      points[x * d + i] = g == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(idx) / (g - 1);
    }
  }

  std::vector<double> values(M * domain_size * K);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t x = 0; x < domain_size; ++x)
      for (std::size_t k = 0; k < K; ++k) {
        const double* w = &weights[(m * K + k) * (d + 1)];
        double v = w[d];
        for (std::size_t i = 0; i < d; ++i) v += w[i] * points[x * d + i];
        values[(m * domain_size + x) * K + k] = v;
      }
  return FunctionClass(Domain::of_size(domain_size), M, K, std::move(values));
}

// Function m holds K centers; coordinate k is the Euclidean distance from x to
// center k, as in K-means losses.
FunctionClass kmeans_distance(const BuiltinSpec& spec) {
  const std::size_t d = spec.input_dim;
  const std::size_t M = spec.num_functions;
  const std::size_t K = spec.output_dim;
  const std::size_t X = spec.domain_size;
  if (d == 0) fail(ErrorKind::InvalidSpec, "kmeans class needs d >= 1");
  if (M * X * K > kMaxTensorEntries) fail(ErrorKind::BudgetExceeded, "class tensor too large");

  Xorshift64Star rng(spec.seed);
  std::vector<double> points;
  if (spec.points) {
    points = *spec.points;
    if (points.size() != X * d) fail(ErrorKind::InvalidSpec, "kmeans points must be |X| x d");
  } else {
    points.resize(X * d);
    for (double& p : points) p = rng.uniform(-1.0, 1.0);
  }
  std::vector<double> centers;
  if (spec.centers) {
    centers = *spec.centers;
    if (centers.size() != M * K * d)
      fail(ErrorKind::InvalidSpec, "kmeans centers must be M x K x d");
  } else {
    centers.resize(M * K * d);
    for (double& c : centers) c = rng.uniform(-1.0, 1.0);
  }

  std::vector<double> values(M * X * K);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t x = 0; x < X; ++x)
      for (std::size_t k = 0; k < K; ++k) {
        double sq = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          const double diff = points[x * d + i] - centers[(m * K + k) * d + i];
          sq += diff * diff;
        }
        values[(m * X + x) * K + k] = std::sqrt(sq);
      }
  return FunctionClass(Domain::of_size(X), M, K, std::move(values));
}

}  // namespace

FunctionClass make_builtin_class(const BuiltinSpec& spec) {
  if (spec.family == BuiltinSpec::Family::sign_product)
    return make_sign_product_class(spec.output_dim);
  check_sizes(spec);
  switch (spec.family) {
    case BuiltinSpec::Family::random_table: return random_table(spec);
    case BuiltinSpec::Family::hyperplane_grid: return hyperplane_grid(spec);
    case BuiltinSpec::Family::kmeans_distance: return kmeans_distance(spec);
    case BuiltinSpec::Family::sign_product: break;
  }
  fail(ErrorKind::InvalidSpec, "unknown builtin family");
}

}  // namespace vcontract
