#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "vcontract/model.hpp"

namespace vcontract {

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// ||x||_p for p in (0, inf]; for p < 1 this is the usual quasi-norm.
double lp_norm(std::span<const double> x, double p);

struct AffinePiece {
  std::vector<double> weights;
  double bias = 0.0;
  bool operator==(const AffinePiece&) const = default;
};

/// One scalar map R^K -> R from a closed set of families whose Lipschitz
/// constants are known in closed form:
///
///   projection(j)   v_j
///   max             max_k v_k
///   neg_min         -min_k v_k
///   softmax(tau)    tau * log sum_k exp(v_k / tau)   (smooth max)
///   affine(w, b)    <w, v> + b
///   max_affine      max_j (<w_j, v> + b_j)
///
/// A map may carry an input and output scale, v -> out * phi(in * v), which
/// is how rescaled maps are represented.
class LipschitzMap {
 public:
  enum class Family { projection, max, neg_min, softmax, affine, max_affine };

  static LipschitzMap projection(std::size_t coordinate);
  static LipschitzMap max();
  static LipschitzMap neg_min();
  static LipschitzMap softmax(double temperature);
  static LipschitzMap affine(std::vector<double> weights, double bias);
  static LipschitzMap max_affine(std::vector<AffinePiece> pieces);

  Family family() const noexcept { return family_; }
  std::size_t coordinate() const noexcept { return coordinate_; }
  double temperature() const noexcept { return temperature_; }
  const std::vector<AffinePiece>& pieces() const noexcept { return pieces_; }
  double in_scale() const noexcept { return in_scale_; }
  double out_scale() const noexcept { return out_scale_; }

  double operator()(std::span<const double> v) const;

  /// Smallest L with |phi(u) - phi(v)| <= L ||u - v||_p for all u, v in R^K.
  double analytic_constant(double p) const;

  /// Throws ArityMismatch if the map cannot take K-dimensional inputs.
  void validate(std::size_t input_dim) const;

  /// v -> out * phi(in * v).
  LipschitzMap rescaled(double in, double out) const;

  bool operator==(const LipschitzMap&) const = default;

 private:
  double raw(std::span<const double> v) const;

  Family family_ = Family::max;
  std::size_t coordinate_ = 0;
  double temperature_ = 1.0;
  std::vector<AffinePiece> pieces_;
  double in_scale_ = 1.0;
  double out_scale_ = 1.0;
};

std::string_view to_string(LipschitzMap::Family family);

/// phi_1..phi_n with a declared Lipschitz constant in the l_p norm.
struct LipschitzSeq {
  std::vector<LipschitzMap> maps;
  double declared_lipschitz = 1.0;
  double norm_p = kInfNorm;
  std::optional<double> declared_output_bound;

  static LipschitzSeq repeat(const LipschitzMap& map, std::size_t n, double declared_lipschitz,
                             double norm_p = kInfNorm);

  std::size_t size() const noexcept { return maps.size(); }

  /// max_t of the per-map analytic constants in norm p.
  double analytic_constant(double p) const;
  double analytic_constant() const { return analytic_constant(norm_p); }

  bool operator==(const LipschitzSeq&) const = default;
};

struct ComposedTable {
  ScalarTable table;      // out(m, t) = phi_t(f_m(x_t))
  double observed_bound;  // max |out|
};

ComposedTable compose(const LipschitzSeq& phi, const EvaluatedClass& ec);

/// Returns (F / beta, phi_bar) with phi_bar_t(v) = phi_t(beta v) / (beta L).
/// The returned sequence declares constant 1.
std::pair<FunctionClass, LipschitzSeq> rescale(const FunctionClass& cls, const LipschitzSeq& phi,
                                               const Sample& sample, double beta, double lipschitz);

struct LipschitzCounterexample {
  std::size_t timestep = 0;
  std::vector<double> u;
  std::vector<double> v;
  double ratio = 0.0;
};

struct LipschitzCertificate {
  bool certified = false;
  double max_ratio = 0.0;
  std::size_t pairs_checked = 0;
  std::optional<LipschitzCounterexample> counterexample;
};

/// Probes each map with structured pairs (basis vectors and the all-ones
/// vector against the origin) and then `trials` random pairs in [-box, box]^K.
/// Any pair with |phi(u) - phi(v)| > L ||u - v||_p + 1e-9 is returned.
LipschitzCertificate certify_lipschitz(const LipschitzSeq& phi, std::size_t input_dim,
                                       std::size_t trials, std::uint64_t seed, double box = 1.0);

}  // namespace vcontract
