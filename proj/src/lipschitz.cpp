#include "vcontract/lipschitz.hpp"

#include <algorithm>
#include <cmath>

#include "vcontract/error.hpp"
#include "vcontract/rng.hpp"

namespace vcontract {

double lp_norm(std::span<const double> x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

namespace {

// Dual norm of w: the Lipschitz constant of v -> <w, v> in l_p. Below p = 1
// the quasi-norm dominates l_1, and the constant becomes ||w||_inf.
double dual_norm(std::span<const double> w, double p) {
  if (p <= 1.0) return lp_norm(w, kInfNorm);
  if (std::isinf(p)) return lp_norm(w, 1.0);
  return lp_norm(w, p / (p - 1.0));
}

}  // namespace

LipschitzMap LipschitzMap::projection(std::size_t coordinate) {
  LipschitzMap m;
  m.family_ = Family::projection;
  m.coordinate_ = coordinate;
  return m;
}

LipschitzMap LipschitzMap::max() {
  LipschitzMap m;
  m.family_ = Family::max;
  return m;
}

LipschitzMap LipschitzMap::neg_min() {
  LipschitzMap m;
  m.family_ = Family::neg_min;
  return m;
}

LipschitzMap LipschitzMap::softmax(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    fail(ErrorKind::InvalidSpec, "softmax temperature must be positive");
  LipschitzMap m;
  m.family_ = Family::softmax;
  m.temperature_ = temperature;
  return m;
}

LipschitzMap LipschitzMap::affine(std::vector<double> weights, double bias) {
  if (weights.empty()) fail(ErrorKind::InvalidSpec, "affine map needs weights");
  LipschitzMap m;
  m.family_ = Family::affine;
  m.pieces_.push_back({std::move(weights), bias});
  return m;
}

LipschitzMap LipschitzMap::max_affine(std::vector<AffinePiece> pieces) {
  if (pieces.empty()) fail(ErrorKind::InvalidSpec, "max_affine map needs a piece");
  for (const auto& p : pieces)
    if (p.weights.size() != pieces.front().weights.size() || p.weights.empty())
      fail(ErrorKind::InvalidSpec, "max_affine pieces must share a positive dimension");
  LipschitzMap m;
  m.family_ = Family::max_affine;
  m.pieces_ = std::move(pieces);
  return m;
}

double LipschitzMap::raw(std::span<const double> v) const {
  switch (family_) {
    case Family::projection: return v[coordinate_];
    case Family::max: return *std::max_element(v.begin(), v.end());
    case Family::neg_min: return -*std::min_element(v.begin(), v.end());
    case Family::softmax: {
      const double top = *std::max_element(v.begin(), v.end());
      double s = 0.0;
      for (double x : v) s += std::exp((x - top) / temperature_);
      return top + temperature_ * std::log(s);
    }
    case Family::affine:
    case Family::max_affine: {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& piece : pieces_) {
        double s = piece.bias;
        for (std::size_t k = 0; k < v.size(); ++k) s += piece.weights[k] * v[k];
        best = std::max(best, s);
      }
      return best;
    }
  }
  return 0.0;
}

double LipschitzMap::operator()(std::span<const double> v) const {
  if (in_scale_ == 1.0) return out_scale_ * raw(v);
  std::vector<double> scaled(v.begin(), v.end());
  for (double& x : scaled) x *= in_scale_;
  return out_scale_ * raw(scaled);
}

double LipschitzMap::analytic_constant(double p) const {
  if (!(p > 0.0)) fail(ErrorKind::InvalidSpec, "norm index p must be positive");
  double base = 1.0;
  if (family_ == Family::affine || family_ == Family::max_affine) {
    base = 0.0;
    for (const auto& piece : pieces_) base = std::max(base, dual_norm(piece.weights, p));
  }
  return base * std::abs(in_scale_) * std::abs(out_scale_);
}

void LipschitzMap::validate(std::size_t input_dim) const {
  if (input_dim == 0) fail(ErrorKind::ArityMismatch, "maps need a positive input dimension");
  if (family_ == Family::projection && coordinate_ >= input_dim)
    fail(ErrorKind::ArityMismatch, "projection coordinate " + std::to_string(coordinate_) +
                                       " >= input dimension " + std::to_string(input_dim));
  for (const auto& piece : pieces_)
    if (piece.weights.size() != input_dim)
      fail(ErrorKind::ArityMismatch, "affine weights have dimension " +
                                         std::to_string(piece.weights.size()) + ", expected " +
                                         std::to_string(input_dim));
}

LipschitzMap LipschitzMap::rescaled(double in, double out) const {
  LipschitzMap m = *this;
  m.in_scale_ *= in;
  m.out_scale_ *= out;
  return m;
}

std::string_view to_string(LipschitzMap::Family family) {
  switch (family) {
    case LipschitzMap::Family::projection: return "projection";
    case LipschitzMap::Family::max: return "max";
    case LipschitzMap::Family::neg_min: return "neg_min";
    case LipschitzMap::Family::softmax: return "softmax";
    case LipschitzMap::Family::affine: return "affine";
    case LipschitzMap::Family::max_affine: return "max_affine";
  }
  return "unknown";
}

LipschitzSeq LipschitzSeq::repeat(const LipschitzMap& map, std::size_t n,
                                  double declared_lipschitz, double norm_p) {
  LipschitzSeq seq;
  seq.maps.assign(n, map);
  seq.declared_lipschitz = declared_lipschitz;
  seq.norm_p = norm_p;
  return seq;
}

double LipschitzSeq::analytic_constant(double p) const {
  double c = 0.0;
  for (const auto& m : maps) c = std::max(c, m.analytic_constant(p));
  return c;
}

ComposedTable compose(const LipschitzSeq& phi, const EvaluatedClass& ec) {
  const std::size_t n = ec.length();
  if (phi.size() != n)
    fail(ErrorKind::ArityMismatch, "phi has " + std::to_string(phi.size()) +
                                       " maps but the sample has length " + std::to_string(n));
  for (const auto& map : phi.maps) map.validate(ec.output_dim());

  ComposedTable out{ScalarTable(ec.num_functions(), n), 0.0};
  for (std::size_t m = 0; m < ec.num_functions(); ++m)
    for (std::size_t t = 0; t < n; ++t) {
      const double v = phi.maps[t](ec.at(m, t));
      if (!std::isfinite(v)) fail(ErrorKind::NumericalError, "composition produced a non-finite value");
      out.table(m, t) = v;
      out.observed_bound = std::max(out.observed_bound, std::abs(v));
    }
  return out;
}

std::pair<FunctionClass, LipschitzSeq> rescale(const FunctionClass& cls, const LipschitzSeq& phi,
                                               const Sample& sample, double beta,
                                               double lipschitz) {
  if (!(beta > 0.0) || !(lipschitz > 0.0))
    fail(ErrorKind::InvalidNormalization, "beta and L must be positive");
  if (beta < cls.uniform_bound())
    fail(ErrorKind::InvalidNormalization, "beta below the class uniform bound");
  if (lipschitz < phi.declared_lipschitz)
    fail(ErrorKind::InvalidNormalization, "L below the declared Lipschitz constant");
  const ComposedTable composed = compose(phi, evaluate(cls, sample));
  if (beta < composed.observed_bound)
    fail(ErrorKind::InvalidNormalization, "beta below max |phi_t(f(x_t))|");

  LipschitzSeq bar = phi;
  for (auto& map : bar.maps) map = map.rescaled(beta, 1.0 / (beta * lipschitz));
  bar.declared_lipschitz = 1.0;
  bar.declared_output_bound = 1.0;
  return {cls.scaled(1.0 / beta), std::move(bar)};
}

LipschitzCertificate certify_lipschitz(const LipschitzSeq& phi, std::size_t input_dim,
                                       std::size_t trials, std::uint64_t seed, double box) {
  if (trials == 0) fail(ErrorKind::InvalidSpec, "certification needs at least one trial");
  for (const auto& map : phi.maps) map.validate(input_dim);

  LipschitzCertificate cert;
  const double L = phi.declared_lipschitz;
  const std::size_t K = input_dim;

  auto probe = [&](std::size_t t, const std::vector<double>& u,
                   const std::vector<double>& v) -> bool {
    std::vector<double> diff(K);
    for (std::size_t k = 0; k < K; ++k) diff[k] = u[k] - v[k];
    const double dist = lp_norm(diff, phi.norm_p);
    const double gap = std::abs(phi.maps[t](u) - phi.maps[t](v));
    ++cert.pairs_checked;
    if (dist > 0.0) cert.max_ratio = std::max(cert.max_ratio, gap / dist);
    if (gap > L * dist + kTolerance) {
      cert.counterexample = LipschitzCounterexample{t, u, v, dist > 0.0 ? gap / dist : kInfNorm};
      return false;
    }
    return true;
  };

  const std::vector<double> origin(K, 0.0);
  for (std::size_t t = 0; t < phi.size(); ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<double> e(K, 0.0);
      e[k] = box;
      if (!probe(t, e, origin)) return cert;
      e[k] = -box;
      if (!probe(t, e, origin)) return cert;
    }
    if (!probe(t, std::vector<double>(K, box), origin)) return cert;
  }

  Xorshift64Star rng(seed);
  std::vector<double> u(K), v(K);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (std::size_t t = 0; t < phi.size(); ++t) {
      for (std::size_t k = 0; k < K; ++k) {
        u[k] = rng.uniform(-box, box);
        v[k] = rng.uniform(-box, box);
      }
      if (!probe(t, u, v)) return cert;
    }
  }
  cert.certified = true;
  return cert;
}

}  // namespace vcontract
