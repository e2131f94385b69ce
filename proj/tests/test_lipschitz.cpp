#include <doctest.h>

#include <cmath>

#include "vcontract/complexity.hpp"
#include "vcontract/error.hpp"
#include "vcontract/lipschitz.hpp"
#include "vcontract/rng.hpp"
#include "oracles.hpp"

using namespace vcontract;

namespace {

EvaluatedClass single_row(std::vector<double> v) {
  const std::size_t K = v.size();
  return EvaluatedClass(Sample({0}), 1, K, std::move(v));
}

std::vector<LipschitzMap> all_families(std::size_t K, Xorshift64Star& rng) {
  std::vector<double> w(K);
  for (auto& x : w) x = rng.uniform(-2.0, 2.0);
  std::vector<AffinePiece> pieces(3);
  for (auto& p : pieces) {
    p.weights.resize(K);
    for (auto& x : p.weights) x = rng.uniform(-2.0, 2.0);
    p.bias = rng.uniform(-1.0, 1.0);
  }
  return {LipschitzMap::projection(K - 1), LipschitzMap::max(), LipschitzMap::neg_min(),
          LipschitzMap::softmax(0.3),      LipschitzMap::affine(w, 0.5),
          LipschitzMap::max_affine(pieces)};
}

}  // namespace

TEST_CASE("map evaluation") {
  const std::vector<double> a{1.0, -1.0};
  CHECK(LipschitzMap::max()(a) == 1.0);
  const std::vector<double> b{0.2, 0.7};
  CHECK(LipschitzMap::neg_min()(b) == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(LipschitzMap::projection(1)(b) == 0.7);
  CHECK(LipschitzMap::affine({2.0, -1.0}, 0.25)(b) == doctest::Approx(-0.05));
  const double lse = 0.5 * std::log(std::exp(0.4) + std::exp(1.4));
  CHECK(LipschitzMap::softmax(0.5)(b) == doctest::Approx(lse).epsilon(1e-14));
  const auto abs = LipschitzMap::max_affine({{{1.0}, 0.0}, {{-1.0}, 0.0}});
  const std::vector<double> neg{-3.0};
  CHECK(abs(neg) == 3.0);
}

TEST_CASE("softmax stays finite for large inputs") {
  const std::vector<double> v{800.0, 799.0};
  const double out = LipschitzMap::softmax(1.0)(v);
  CHECK(std::isfinite(out));
  CHECK(out == doctest::Approx(800.0 + std::log1p(std::exp(-1.0))));
}

TEST_CASE("compose with max and with a projection") {
  const ComposedTable c =
      compose(LipschitzSeq::repeat(LipschitzMap::max(), 1, 1.0), single_row({1.0, -1.0}));
  CHECK(c.table(0, 0) == 1.0);
  CHECK(c.observed_bound == 1.0);

  BuiltinSpec b;
  b.num_functions = 5;
  b.domain_size = 3;
  b.output_dim = 3;
  b.seed = 11;
  const FunctionClass cls = make_builtin_class(b);
  const Sample s({2, 0, 1, 1});
  const auto proj = LipschitzSeq::repeat(LipschitzMap::projection(1), 4, 1.0);
  CHECK(compose(proj, evaluate(cls, s)).table == restrict(cls, 1).evaluate(s));
}

TEST_CASE("compose checks lengths and arity") {
  const EvaluatedClass ec = single_row({1.0, 2.0});
  CHECK_THROWS_AS(compose(LipschitzSeq::repeat(LipschitzMap::max(), 2, 1.0), ec), Error);
  CHECK_THROWS_AS(compose(LipschitzSeq::repeat(LipschitzMap::projection(2), 1, 1.0), ec), Error);
  try {
    compose(LipschitzSeq::repeat(LipschitzMap::affine({1.0}, 0.0), 1, 1.0), ec);
    FAIL("expected ArityMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ArityMismatch);
  }
}

TEST_CASE("analytic constants") {
  CHECK(LipschitzMap::max().analytic_constant(kInfNorm) == 1.0);
  CHECK(LipschitzMap::softmax(0.1).analytic_constant(kInfNorm) == 1.0);
  const auto aff = LipschitzMap::affine({3.0, -4.0}, 1.0);
  CHECK(aff.analytic_constant(kInfNorm) == 7.0);
  CHECK(aff.analytic_constant(2.0) == doctest::Approx(5.0));
  CHECK(aff.analytic_constant(1.0) == 4.0);
  CHECK(aff.rescaled(2.0, 0.25).analytic_constant(kInfNorm) == 3.5);
}

TEST_CASE("rescale with beta = L = 1 is the identity") {
  BuiltinSpec b;
  b.num_functions = 3;
  b.domain_size = 2;
  b.output_dim = 2;
  b.bound = 0.5;
  b.seed = 2;
  const FunctionClass cls = make_builtin_class(b);
  const auto phi = LipschitzSeq::repeat(LipschitzMap::max(), 2, 1.0);
  const auto [bar, phi_bar] = rescale(cls, phi, Sample({0, 1}), 1.0, 1.0);
  CHECK(bar == cls);
  const std::vector<double> v{0.3, -0.1};
  CHECK(phi_bar.maps[0](v) == phi.maps[0](v));
  CHECK(phi_bar.declared_lipschitz == 1.0);
}

TEST_CASE("rescaled pieces of a linear map") {
  // f = 2, phi(v) = 3 v_1, beta = 2, L = 3.
  const FunctionClass cls(Domain::of_size(1), 1, 1, {2.0});
  const auto phi = LipschitzSeq::repeat(LipschitzMap::affine({3.0}, 0.0), 1, 3.0);
  const FunctionClass bar = cls.scaled(1.0 / 2.0);
  const LipschitzMap phi_bar = phi.maps[0].rescaled(2.0, 1.0 / 6.0);
  CHECK(bar(0, 0, 0) == 1.0);
  const std::vector<double> u{0.4};
  CHECK(phi_bar(u) == doctest::Approx(0.4).epsilon(1e-15));
  const std::vector<double> one{1.0};
  CHECK(2.0 * 3.0 * phi_bar(one) == doctest::Approx(6.0));
  // beta = 2 is below |phi(f)| = 6, so the full rescaling refuses it.
  CHECK_THROWS_AS(rescale(cls, phi, Sample({0}), 2.0, 3.0), Error);
  const auto [b6, p6] = rescale(cls, phi, Sample({0}), 6.0, 3.0);
  CHECK(6.0 * 3.0 * compose(p6, evaluate(b6, Sample({0}))).table(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("rescale rejects undersized normalizers") {
  const FunctionClass cls(Domain::of_size(1), 2, 1, {1.0, -2.0});
  const auto phi = LipschitzSeq::repeat(LipschitzMap::projection(0), 1, 1.0);
  CHECK_THROWS_AS(rescale(cls, phi, Sample({0}), 1.5, 1.0), Error);
  CHECK_THROWS_AS(rescale(cls, phi, Sample({0}), 2.0, 0.5), Error);
  CHECK_THROWS_AS(rescale(cls, phi, Sample({0}), 0.0, 1.0), Error);
}

TEST_CASE("composition identity after rescaling") {
  Xorshift64Star rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t K = 1 + rng.below(3), n = 1 + rng.below(8);
    BuiltinSpec b;
    b.num_functions = 1 + rng.below(6);
    b.domain_size = 1 + rng.below(4);
    b.output_dim = K;
    b.bound = rng.uniform(0.2, 3.0);
    b.seed = rng.next();
    const FunctionClass cls = make_builtin_class(b);
    std::vector<std::size_t> pts(n);
    for (auto& p : pts) p = rng.below(b.domain_size);
    const Sample s(pts);
    auto fams = all_families(K, rng);
    LipschitzSeq phi;
    for (std::size_t t = 0; t < n; ++t) phi.maps.push_back(fams[rng.below(fams.size())]);
    phi.declared_lipschitz = phi.analytic_constant(kInfNorm);

    const ComposedTable direct = compose(phi, evaluate(cls, s));
    const double beta = std::max(cls.uniform_bound(), direct.observed_bound);
    const double L = phi.declared_lipschitz;
    const auto [bar, phi_bar] = rescale(cls, phi, s, beta, L);
    const ComposedTable scaled = compose(phi_bar, evaluate(bar, s));
    for (std::size_t m = 0; m < direct.table.rows(); ++m)
      for (std::size_t t = 0; t < n; ++t)
        CHECK(close_tol(direct.table(m, t), beta * L * scaled.table(m, t)));

    const double lhs = exact_rademacher(direct.table);
    const double rhs = beta * L * exact_rademacher(scaled.table);
    CHECK(close_tol(lhs, rhs));
    std::vector<std::vector<double>> rows;
    for (std::size_t m = 0; m < direct.table.rows(); ++m)
      rows.emplace_back(direct.table.row(m).begin(), direct.table.row(m).end());
    CHECK(close_tol(lhs, oracle::rademacher(rows)));
  }
}

TEST_CASE("certificate for max and counterexample for a steep affine map") {
  const auto cert = certify_lipschitz(LipschitzSeq::repeat(LipschitzMap::max(), 3, 1.0), 2, 500, 1);
  CHECK(cert.certified);
  CHECK(cert.max_ratio <= 1.0 + 1e-12);
  CHECK_FALSE(cert.counterexample);

  const auto bad =
      certify_lipschitz(LipschitzSeq::repeat(LipschitzMap::affine({2.0, 0.0}, 0.0), 1, 1.0), 2, 10, 1);
  REQUIRE_FALSE(bad.certified);
  REQUIRE(bad.counterexample);
  CHECK(bad.counterexample->u == std::vector<double>{1.0, 0.0});
  CHECK(bad.counterexample->v == std::vector<double>{0.0, 0.0});
  CHECK(bad.counterexample->ratio == doctest::Approx(2.0));
}

TEST_CASE("every family certifies at its analytic constant") {
  Xorshift64Star rng(23);
  for (std::size_t K : {1, 2, 3}) {
    for (double p : {1.0, 2.0, kInfNorm}) {
      for (const auto& map : all_families(K, rng)) {
        LipschitzSeq phi = LipschitzSeq::repeat(map, 1, map.analytic_constant(p), p);
        const auto cert = certify_lipschitz(phi, K, 10000, rng.next(), 2.0);
        CHECK_MESSAGE(cert.certified, to_string(map.family()), " K=", K, " p=", p);
      }
    }
  }
}

TEST_CASE("softmax constant matches a dense ratio search") {
  // Largest difference quotient over a grid of pairs in [-1, 1]^2, sup norm.
  const auto sm = LipschitzMap::softmax(0.25);
  double best = 0.0;
  const int g = 40;
  for (int a = 0; a <= g; ++a)
    for (int b = 0; b <= g; ++b) {
      const std::vector<double> u{-1.0 + 2.0 * a / g, -1.0 + 2.0 * b / g};
      for (int c = 0; c <= g; c += 4)
        for (int d = 0; d <= g; d += 4) {
          const std::vector<double> v{-1.0 + 2.0 * c / g, -1.0 + 2.0 * d / g};
          const double dist = std::max(std::fabs(u[0] - v[0]), std::fabs(u[1] - v[1]));
          if (dist == 0.0) continue;
          best = std::max(best, std::fabs(sm(u) - sm(v)) / dist);
        }
    }
  CHECK(best <= 1.0 + 1e-12);
  CHECK(best > 0.99);
  CHECK(sm.analytic_constant(kInfNorm) == 1.0);
}
