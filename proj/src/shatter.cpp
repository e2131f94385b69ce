#include <algorithm>
#include <bit>
#include <cmath>

#include "vcontract/error.hpp"
#include "vcontract/geometry.hpp"

namespace vcontract {

namespace {

struct Candidate {
  double level;
  std::vector<signed char> side;  // per function: +1 above, -1 below, 0 neither
};

std::vector<Candidate> candidates_at(const std::vector<double>& column, double gamma) {
  std::vector<double> vals = column;
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

  std::vector<double> levels;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    auto it = std::lower_bound(vals.begin() + static_cast<std::ptrdiff_t>(i), vals.end(),
                               vals[i] + gamma - 2 * kTolerance);
    if (it == vals.end()) break;
    const double mid = 0.5 * (vals[i] + *it);
    if (levels.empty() || mid > levels.back()) levels.push_back(mid);
  }

  std::vector<Candidate> out;
  for (double v : levels) {
    Candidate c{v, std::vector<signed char>(column.size(), 0)};
    for (std::size_t m = 0; m < column.size(); ++m) {
      if (column[m] >= v + gamma / 2 - kTolerance) c.side[m] = 1;
      else if (column[m] <= v - gamma / 2 + kTolerance) c.side[m] = -1;
    }
    out.push_back(std::move(c));
  }
  return out;
}

class WitnessSearch {
 public:
  WitnessSearch(std::vector<std::vector<Candidate>> cands, std::size_t functions)
      : cands_(std::move(cands)), functions_(functions) {}

  std::optional<std::vector<double>> run() {
    std::vector<std::int64_t> pattern(functions_, 0);
    std::vector<double> levels;
    if (search(0, pattern, levels)) return levels;
    return std::nullopt;
  }

 private:
  bool search(std::size_t depth, const std::vector<std::int64_t>& pattern,
              std::vector<double>& levels) {
    if (depth == cands_.size()) return true;
    const std::size_t needed = std::size_t{1} << (depth + 1);
    std::vector<std::int64_t> next(functions_);
    std::vector<char> seen(needed);
    for (const Candidate& c : cands_[depth]) {
      std::fill(seen.begin(), seen.end(), 0);
      std::size_t distinct = 0;
      for (std::size_t m = 0; m < functions_; ++m) {
        if (pattern[m] < 0 || c.side[m] == 0) {
          next[m] = -1;
          continue;
        }
        next[m] = pattern[m] * 2 + (c.side[m] > 0 ? 1 : 0);
        if (!seen[static_cast<std::size_t>(next[m])]) {
          seen[static_cast<std::size_t>(next[m])] = 1;
          ++distinct;
        }
      }
      if (distinct < needed) continue;
      levels.push_back(c.level);
      if (search(depth + 1, next, levels)) return true;
      levels.pop_back();
    }
    return false;
  }

  std::vector<std::vector<Candidate>> cands_;
  std::size_t functions_;
};

// Distinct rows of the class restricted to the given points.
std::vector<std::vector<double>> distinct_rows(const ScalarClass& sc,
                                               const std::vector<std::size_t>& points) {
  std::vector<std::vector<double>> rows(sc.num_functions(), std::vector<double>(points.size()));
  for (std::size_t m = 0; m < sc.num_functions(); ++m)
    for (std::size_t t = 0; t < points.size(); ++t) rows[m][t] = sc(m, points[t]);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

}  // namespace

ShatterResult shatter_check(const ScalarClass& sc, const Sample& seq, double gamma,
                            const Budgets& budgets) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    fail(ErrorKind::InvalidSpec, "gamma must be positive and finite");
  if (seq.size() > budgets.shatter_cap)
    fail(ErrorKind::BudgetExceeded, "sequence length " + std::to_string(seq.size()) +
                                        " exceeds shatter_cap " +
                                        std::to_string(budgets.shatter_cap));
  seq.validate(sc.domain().size);

  const std::size_t d = seq.size();
  const auto rows = distinct_rows(sc, seq.points());
  if (rows.size() < (std::size_t{1} << d)) return {};

  std::vector<std::vector<Candidate>> cands(d);
  for (std::size_t t = 0; t < d; ++t) {
    std::vector<double> column(rows.size());
    for (std::size_t m = 0; m < rows.size(); ++m) column[m] = rows[m][t];
    cands[t] = candidates_at(column, gamma);
    if (cands[t].empty()) return {};
  }
  auto levels = WitnessSearch(std::move(cands), rows.size()).run();
  if (!levels) return {};
  return {true, std::move(*levels)};
}

FatResult fat_dim(const ScalarClass& sc, double gamma, const Budgets& budgets) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    fail(ErrorKind::InvalidSpec, "gamma must be positive and finite");
  const std::size_t X = sc.domain().size;
  std::vector<std::size_t> all(X);
  for (std::size_t x = 0; x < X; ++x) all[x] = x;
  const std::size_t distinct = distinct_rows(sc, all).size();

  FatResult out;
  out.gamma = gamma;
  const std::size_t log2_distinct = static_cast<std::size_t>(std::bit_width(distinct)) - 1;
  const std::size_t d_max = std::min({X, log2_distinct, budgets.shatter_cap});

  std::uint64_t examined = 0;
  for (std::size_t d = 1; d <= d_max; ++d) {
    bool found = false;
    std::vector<std::size_t> subset(d);
    for (std::size_t i = 0; i < d; ++i) subset[i] = i;
    for (;;) {
      if (examined++ >= budgets.fat_budget) {
        out.is_certified = false;
        return out;
      }
      ShatterResult r = shatter_check(sc, Sample(subset), gamma, budgets);
      if (r.shattered) {
        out.dimension = d;
        out.witness_points = subset;
        out.witness_levels = std::move(r.witness_levels);
        found = true;
        break;
      }
      std::size_t i = d;
      while (i > 0 && subset[i - 1] == X - d + i - 1) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < d; ++j) subset[j] = subset[j - 1] + 1;
    }
    if (!found) break;
  }
  return out;
}

}  // namespace vcontract
