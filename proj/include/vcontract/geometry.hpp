#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vcontract/complexity.hpp"
#include "vcontract/model.hpp"

namespace vcontract {

enum class CoverNorm { l2_rms, linf };
enum class CoverMode { greedy, exact };

/// (1/n sum_t (a_t - b_t)^2)^{1/2} or max_t |a_t - b_t|.
double row_distance(std::span<const double> a, std::span<const double> b, CoverNorm norm);

/// Distinct pairwise row distances, ascending, merged at 1e-12 resolution.
std::vector<double> pairwise_distances(const ScalarTable& a, CoverNorm norm);

struct CoverResult {
  double scale = 0.0;
  CoverNorm norm = CoverNorm::linf;
  std::size_t size = 0;
  std::vector<std::size_t> center_rows;      // indices into the table's rows
  std::vector<std::vector<double>> centers;  // the center sequences themselves
  std::vector<std::size_t> assignment;       // row -> position in center_rows
  CoverMode mode = CoverMode::greedy;
  bool is_minimal = false;
};

/// Proper cover: centers are rows of the table. Row r is covered by center c
/// when distance(c, r) <= eps + 1e-12. Greedy picks the center covering the
/// most uncovered rows, lowest index on ties; exact runs branch and bound
/// seeded with the greedy cover.
CoverResult min_cover(const ScalarTable& a, double eps, CoverNorm norm, CoverMode mode,
                      const Budgets& budgets = {});

/// Exact when M <= budgets.cover_exact_max, greedy otherwise.
CoverResult best_cover(const ScalarTable& a, double eps, CoverNorm norm,
                       const Budgets& budgets = {});

struct ShatterResult {
  bool shattered = false;
  std::vector<double> witness_levels;
};

/// Whether the class gamma-shatters the sequence: some levels v_t make every
/// sign pattern eps realizable with eps_t (g(x_t) - v_t) >= gamma/2 - 1e-9.
///
/// Candidate levels at position t are midpoints (a + b)/2 of achievable values
/// a < b at x_t with b the smallest achievable value at least a + gamma. Any
/// valid level v can be moved to the midpoint of (largest value below v,
/// smallest value above v) without losing a function on either side, so these
/// candidates are complete. Candidates are tried in ascending order per
/// position and the first witness in lexicographic order is returned.
ShatterResult shatter_check(const ScalarClass& sc, const Sample& seq, double gamma,
                            const Budgets& budgets = {});

struct FatResult {
  double gamma = 0.0;
  std::size_t dimension = 0;
  std::vector<std::size_t> witness_points;
  std::vector<double> witness_levels;
  bool is_certified = true;
};

/// Largest number of distinct domain points shattered at scale gamma.
/// Sizes are searched upward; a size with no shattered subset ends the search
/// since shattering is inherited by subsets.
FatResult fat_dim(const ScalarClass& sc, double gamma, const Budgets& budgets = {});

struct LpScales {
  double epsilon = 0.0;
  double p = 2.0;
  std::vector<double> scales;
};

/// eps_i = eps * (R_i^{2p/(2+p)} / sum_j R_j^{2p/(2+p)})^{1/p}, so that
/// (sum_i eps_i^p)^{1/p} = eps.
LpScales lp_scales(double eps, std::span<const double> worst_case_values, double p);

}  // namespace vcontract
