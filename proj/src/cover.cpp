#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>

#include "vcontract/error.hpp"
#include "vcontract/geometry.hpp"

namespace vcontract {

namespace {

constexpr double kCoverSlack = 1e-12;

using Mask = std::uint32_t;

// Branch and bound for minimum set cover over at most 32 rows.
class ExactCover {
 public:
  ExactCover(const std::vector<Mask>& covers, std::size_t rows)
      : covers_(covers), full_(rows == 32 ? ~Mask{0} : ((Mask{1} << rows) - 1)) {
    for (Mask c : covers_) max_gain_ = std::max(max_gain_, std::popcount(c));
  }

  std::vector<std::size_t> solve(std::vector<std::size_t> incumbent) {
    best_ = std::move(incumbent);
    std::vector<std::size_t> chosen;
    search(0, chosen);
    return best_;
  }

 private:
  void search(Mask covered, std::vector<std::size_t>& chosen) {
    if (covered == full_) {
      if (chosen.size() < best_.size()) best_ = chosen;
      return;
    }
    if (chosen.size() + 1 >= best_.size()) return;
    const int uncovered = std::popcount(static_cast<Mask>(full_ & ~covered));
    const std::size_t needed = static_cast<std::size_t>((uncovered + max_gain_ - 1) / max_gain_);
    if (chosen.size() + needed >= best_.size()) return;

    const int row = std::countr_zero(static_cast<Mask>(full_ & ~covered));
    for (std::size_t c = 0; c < covers_.size(); ++c) {
      if (!(covers_[c] >> row & 1U)) continue;
      chosen.push_back(c);
      search(covered | covers_[c], chosen);
      chosen.pop_back();
    }
  }

  const std::vector<Mask>& covers_;
  Mask full_;
  int max_gain_ = 1;
  std::vector<std::size_t> best_;
};

std::vector<std::size_t> greedy_centers(const std::vector<std::vector<bool>>& covers) {
  const std::size_t M = covers.size();
  std::vector<bool> covered(M, false);
  std::size_t remaining = M;
  std::vector<std::size_t> centers;
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < M; ++c) {
      std::size_t gain = 0;
      for (std::size_t r = 0; r < M; ++r) gain += covers[c][r] && !covered[r];
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    centers.push_back(best);
    for (std::size_t r = 0; r < M; ++r)
      if (covers[best][r] && !covered[r]) {
        covered[r] = true;
        --remaining;
      }
  }
  return centers;
}

}  // namespace

double row_distance(std::span<const double> a, std::span<const double> b, CoverNorm norm) {
  if (a.size() != b.size()) fail(ErrorKind::ArityMismatch, "rows of different length");
  if (a.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double d = std::abs(a[t] - b[t]);
    acc = norm == CoverNorm::linf ? std::max(acc, d) : acc + d * d;
  }
  return norm == CoverNorm::linf ? acc : std::sqrt(acc / static_cast<double>(a.size()));
}

std::vector<double> pairwise_distances(const ScalarTable& a, CoverNorm norm) {
  std::vector<double> out;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.rows(); ++j) out.push_back(row_distance(a.row(i), a.row(j), norm));
  std::sort(out.begin(), out.end());
  std::vector<double> merged;
  for (double d : out)
    if (merged.empty() || d - merged.back() > 1e-12) merged.push_back(d);
  return merged;
}

CoverResult min_cover(const ScalarTable& a, double eps, CoverNorm norm, CoverMode mode,
                      const Budgets& budgets) {
  if (!(eps >= 0.0) || !std::isfinite(eps))
    fail(ErrorKind::InvalidSpec, "cover scale must be finite and >= 0");
  const std::size_t M = a.rows();
  if (M == 0) fail(ErrorKind::InvalidSpec, "cannot cover an empty class");
  if (mode == CoverMode::exact && (M > budgets.cover_exact_max || M > 32))
    fail(ErrorKind::BudgetExceeded, "exact cover of " + std::to_string(M) + " rows exceeds budget " +
                                        std::to_string(budgets.cover_exact_max));

  std::vector<std::vector<bool>> covers(M, std::vector<bool>(M, false));
  for (std::size_t c = 0; c < M; ++c)
    for (std::size_t r = 0; r < M; ++r)
      covers[c][r] = row_distance(a.row(c), a.row(r), norm) <= eps + kCoverSlack;

  std::vector<std::size_t> centers = greedy_centers(covers);
  if (mode == CoverMode::exact) {
    std::vector<Mask> masks(M, 0);
    for (std::size_t c = 0; c < M; ++c)
      for (std::size_t r = 0; r < M; ++r)
        if (covers[c][r]) masks[c] |= Mask{1} << r;
    centers = ExactCover(masks, M).solve(centers);
  }

  CoverResult out;
  out.scale = eps;
  out.norm = norm;
  out.mode = mode;
  out.is_minimal = mode == CoverMode::exact;
  out.size = centers.size();
  out.center_rows = centers;
  for (std::size_t c : centers) out.centers.emplace_back(a.row(c).begin(), a.row(c).end());
  out.assignment.assign(M, 0);
  for (std::size_t r = 0; r < M; ++r) {
    // Nearest center; every row has one within eps.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double d = row_distance(a.row(centers[i]), a.row(r), norm);
      if (d < best) {
        best = d;
        out.assignment[r] = i;
      }
    }
  }
  return out;
}

CoverResult best_cover(const ScalarTable& a, double eps, CoverNorm norm, const Budgets& budgets) {
  const bool exact = a.rows() <= budgets.cover_exact_max && a.rows() <= 32;
  return min_cover(a, eps, norm, exact ? CoverMode::exact : CoverMode::greedy, budgets);
}

LpScales lp_scales(double eps, std::span<const double> worst_case_values, double p) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidSpec, "eps must be positive");
  if (!(p > 0.0) || std::isinf(p)) fail(ErrorKind::InvalidSpec, "p must lie in (0, inf)");
  if (worst_case_values.empty()) fail(ErrorKind::DegenerateAllocation, "no coordinates");
  const double exponent = 2.0 * p / (2.0 + p);
  std::vector<double> weights;
  double total = 0.0;
  for (double r : worst_case_values) {
    if (!(r >= 0.0) || !std::isfinite(r))
      fail(ErrorKind::DegenerateAllocation, "worst-case values must be finite and >= 0");
    weights.push_back(r == 0.0 ? 0.0 : std::pow(r, exponent));
    total += weights.back();
  }
  if (total == 0.0) fail(ErrorKind::DegenerateAllocation, "all worst-case values are zero");

  LpScales out;
  out.epsilon = eps;
  out.p = p;
  for (double w : weights) out.scales.push_back(eps * std::pow(w / total, 1.0 / p));
  return out;
}

}  // namespace vcontract
