#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vcontract {

/// Additive tolerance for every inequality comparison, scaled by
/// max(1, |lhs|, |rhs|).
inline constexpr double kTolerance = 1e-9;

bool leq_tol(double lhs, double rhs, double tol = kTolerance);
bool close_tol(double a, double b, double tol = kTolerance);

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }

  /// max |entry|, 0 for an empty matrix.
  double max_abs() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// The M x n table of a real-valued class evaluated along a sample.
using ScalarTable = Matrix;

struct Domain {
  std::size_t size = 1;
  std::vector<std::string> labels;  // empty or one per point

  static Domain of_size(std::size_t size);
  void validate() const;
  bool operator==(const Domain&) const = default;
};

class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<std::size_t> points);

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t operator[](std::size_t t) const { return points_[t]; }
  const std::vector<std::size_t>& points() const noexcept { return points_; }

  /// Throws InvalidSample unless every index is below domain_size.
  void validate(std::size_t domain_size) const;

  bool operator==(const Sample&) const = default;

 private:
  std::vector<std::size_t> points_;
};

/// Real-valued class on a finite domain: M functions x |X| points.
class ScalarClass {
 public:
  ScalarClass(Domain domain, Matrix values);

  const Domain& domain() const noexcept { return domain_; }
  std::size_t num_functions() const noexcept { return values_.rows(); }
  const Matrix& values() const noexcept { return values_; }
  double operator()(std::size_t m, std::size_t x) const { return values_(m, x); }
  double uniform_bound() const noexcept { return uniform_bound_; }

  ScalarClass scaled(double c) const;
  ScalarTable evaluate(const Sample& sample) const;

 private:
  Domain domain_;
  Matrix values_;
  double uniform_bound_ = 0.0;
};

/// Finite class of R^K-valued functions stored as an M x |X| x K tensor.
class FunctionClass {
 public:
  FunctionClass(Domain domain, std::size_t num_functions, std::size_t output_dim,
                std::vector<double> values);

  const Domain& domain() const noexcept { return domain_; }
  std::size_t num_functions() const noexcept { return num_functions_; }
  std::size_t output_dim() const noexcept { return output_dim_; }
  double uniform_bound() const noexcept { return uniform_bound_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double operator()(std::size_t m, std::size_t x, std::size_t k) const {
    return values_[(m * domain_.size + x) * output_dim_ + k];
  }
  std::span<const double> at(std::size_t m, std::size_t x) const {
    return {values_.data() + (m * domain_.size + x) * output_dim_, output_dim_};
  }

  FunctionClass scaled(double c) const;
  /// Class consisting of the given functions (by index, in order).
  FunctionClass subset(std::span<const std::size_t> members) const;

  bool operator==(const FunctionClass&) const = default;

 private:
  Domain domain_;
  std::size_t num_functions_ = 0;
  std::size_t output_dim_ = 0;
  std::vector<double> values_;
  double uniform_bound_ = 0.0;
};

/// A FunctionClass gathered along a sample: M x n x K.
class EvaluatedClass {
 public:
  EvaluatedClass(Sample sample, std::size_t num_functions, std::size_t output_dim,
                 std::vector<double> table);

  const Sample& sample() const noexcept { return sample_; }
  std::size_t num_functions() const noexcept { return num_functions_; }
  std::size_t length() const noexcept { return sample_.size(); }
  std::size_t output_dim() const noexcept { return output_dim_; }

  double operator()(std::size_t m, std::size_t t, std::size_t k) const {
    return table_[(m * sample_.size() + t) * output_dim_ + k];
  }
  std::span<const double> at(std::size_t m, std::size_t t) const {
    return {table_.data() + (m * sample_.size() + t) * output_dim_, output_dim_};
  }

  /// The M x n slice at output coordinate k.
  ScalarTable coordinate(std::size_t k) const;
  /// M x (n*K) table with column t*K + k, i.e. the doubly indexed signs layout.
  ScalarTable flattened() const;

 private:
  Sample sample_;
  std::size_t num_functions_ = 0;
  std::size_t output_dim_ = 0;
  std::vector<double> table_;
};

/// A vector of Rademacher signs.
class SignVector {
 public:
  explicit SignVector(std::vector<int> signs);
  /// Lexicographic sign vector number `index` of length n (-1 < +1; the first
  /// position is the most significant).
  static SignVector from_index(std::uint64_t index, std::size_t n);

  std::size_t size() const noexcept { return signs_.size(); }
  int operator[](std::size_t t) const { return signs_[t]; }

  /// sum_t eps_t * row[t], accumulated left to right.
  double dot(std::span<const double> row) const;

 private:
  std::vector<int> signs_;
};

EvaluatedClass evaluate(const FunctionClass& cls, const Sample& sample);
ScalarClass restrict(const FunctionClass& cls, std::size_t coordinate);
FunctionClass as_vector_class(const ScalarClass& sc);

/// Sign-product lower-bound class: domain {e_1..e_K}, one function per
/// sign vector sigma with f_sigma(e_j)_i = sigma_i * [i == j].
/// Function m uses sigma_i = +1 iff bit (K-1-i) of m is set.
FunctionClass make_sign_product_class(std::size_t dimension,
                                      std::size_t max_functions = std::size_t{1} << 20);

/// Generators used by the fuzz suite and the CLI's builtin classes.
struct BuiltinSpec {
  enum class Family { random_table, hyperplane_grid, kmeans_distance, sign_product };
  Family family = Family::random_table;
  std::size_t num_functions = 4;
  std::size_t domain_size = 3;
  std::size_t output_dim = 2;
  double bound = 1.0;            // random_table: entries uniform in [-bound, bound]
  std::size_t input_dim = 1;     // hyperplane_grid / kmeans_distance
  std::size_t grid_points = 3;   // hyperplane_grid: points per axis on [-1, 1]
  double quantum = 0.0;          // random_table: round entries to this step when > 0
  std::optional<std::vector<double>> weights;  // hyperplane: M x K x (input_dim + 1)
  std::optional<std::vector<double>> points;   // kmeans: |X| x input_dim
  std::optional<std::vector<double>> centers;  // kmeans: M x K x input_dim
  std::uint64_t seed = 0;
};

FunctionClass make_builtin_class(const BuiltinSpec& spec);

}  // namespace vcontract
