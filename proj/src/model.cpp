#include "vcontract/model.hpp"

#include <algorithm>
#include <cmath>

#include "vcontract/error.hpp"

namespace vcontract {

namespace {

double max_abs_of(const std::vector<double>& values) {
  double bound = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorKind::NumericalError, "non-finite class entry");
    bound = std::max(bound, std::abs(v));
  }
  return bound;
}

}  // namespace

bool leq_tol(double lhs, double rhs, double tol) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return lhs <= rhs + tol * scale;
}

bool close_tol(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    fail(ErrorKind::InvalidSpec, "matrix data size does not match its shape");
}

double Matrix::max_abs() const {
  double bound = 0.0;
  for (double v : data_) bound = std::max(bound, std::abs(v));
  return bound;
}

Domain Domain::of_size(std::size_t size) {
  Domain d;
  d.size = size;
  d.validate();
  return d;
}

void Domain::validate() const {
  if (size == 0) fail(ErrorKind::InvalidSpec, "domain must contain at least one point");
  if (!labels.empty() && labels.size() != size)
    fail(ErrorKind::InvalidSpec, "domain labels must be absent or one per point");
}

Sample::Sample(std::vector<std::size_t> points) : points_(std::move(points)) {
  if (points_.empty()) fail(ErrorKind::InvalidSample, "sample must be non-empty");
}

void Sample::validate(std::size_t domain_size) const {
  if (points_.empty()) fail(ErrorKind::InvalidSample, "sample must be non-empty");
  for (std::size_t p : points_) {
    if (p >= domain_size)
      fail(ErrorKind::InvalidSample, "sample index " + std::to_string(p) +
                                         " outside domain of size " +
                                         std::to_string(domain_size));
  }
}

ScalarClass::ScalarClass(Domain domain, Matrix values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  domain_.validate();
  if (values_.rows() == 0) fail(ErrorKind::InvalidSpec, "class must contain a function");
  if (values_.cols() != domain_.size)
    fail(ErrorKind::InvalidSpec, "class values do not match the domain size");
  uniform_bound_ = max_abs_of(values_.data());
}

ScalarClass ScalarClass::scaled(double c) const {
  Matrix out = values_;
  for (std::size_t m = 0; m < out.rows(); ++m)
    for (double& v : out.row(m)) v *= c;
  return ScalarClass(domain_, std::move(out));
}

ScalarTable ScalarClass::evaluate(const Sample& sample) const {
  sample.validate(domain_.size);
  ScalarTable out(values_.rows(), sample.size());
  for (std::size_t m = 0; m < values_.rows(); ++m)
    for (std::size_t t = 0; t < sample.size(); ++t) out(m, t) = values_(m, sample[t]);
  return out;
}

FunctionClass::FunctionClass(Domain domain, std::size_t num_functions,
                             std::size_t output_dim, std::vector<double> values)
    : domain_(std::move(domain)),
      num_functions_(num_functions),
      output_dim_(output_dim),
      values_(std::move(values)) {
  domain_.validate();
  if (num_functions_ == 0) fail(ErrorKind::InvalidSpec, "class must contain a function");
  if (output_dim_ == 0) fail(ErrorKind::InvalidSpec, "output dimension must be positive");
  if (values_.size() != num_functions_ * domain_.size * output_dim_)
    fail(ErrorKind::InvalidSpec, "class tensor size does not match M x |X| x K");
  uniform_bound_ = max_abs_of(values_);
}

FunctionClass FunctionClass::scaled(double c) const {
  std::vector<double> out = values_;
  for (double& v : out) v *= c;
  return FunctionClass(domain_, num_functions_, output_dim_, std::move(out));
}

FunctionClass FunctionClass::subset(std::span<const std::size_t> members) const {
  const std::size_t stride = domain_.size * output_dim_;
  std::vector<double> out;
  out.reserve(members.size() * stride);
  for (std::size_t m : members) {
    if (m >= num_functions_) fail(ErrorKind::InvalidSpec, "subset index out of range");
    out.insert(out.end(), values_.begin() + static_cast<std::ptrdiff_t>(m * stride),
               values_.begin() + static_cast<std::ptrdiff_t>((m + 1) * stride));
  }
  return FunctionClass(domain_, members.size(), output_dim_, std::move(out));
}

EvaluatedClass::EvaluatedClass(Sample sample, std::size_t num_functions,
                               std::size_t output_dim, std::vector<double> table)
    : sample_(std::move(sample)),
      num_functions_(num_functions),
      output_dim_(output_dim),
      table_(std::move(table)) {
  if (table_.size() != num_functions_ * sample_.size() * output_dim_)
    fail(ErrorKind::InvalidSpec, "evaluated table size does not match M x n x K");
}

ScalarTable EvaluatedClass::coordinate(std::size_t k) const {
  if (k >= output_dim_)
    fail(ErrorKind::InvalidCoordinate, "coordinate " + std::to_string(k) +
                                           " >= output dimension " +
                                           std::to_string(output_dim_));
  ScalarTable out(num_functions_, length());
  for (std::size_t m = 0; m < num_functions_; ++m)
    for (std::size_t t = 0; t < length(); ++t) out(m, t) = (*this)(m, t, k);
  return out;
}

ScalarTable EvaluatedClass::flattened() const {
  return ScalarTable(num_functions_, length() * output_dim_, table_);
}

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_)
    if (s != 1 && s != -1) fail(ErrorKind::InvalidSpec, "signs must be -1 or +1");
}

SignVector SignVector::from_index(std::uint64_t index, std::size_t n) {
  std::vector<int> signs(n);
  for (std::size_t t = 0; t < n; ++t)
    signs[t] = ((index >> (n - 1 - t)) & 1U) ? 1 : -1;
  return SignVector(std::move(signs));
}

double SignVector::dot(std::span<const double> row) const {
  if (row.size() != signs_.size()) fail(ErrorKind::ArityMismatch, "sign/row length mismatch");
  double s = 0.0;
  for (std::size_t t = 0; t < row.size(); ++t) s += signs_[t] * row[t];
  return s;
}

EvaluatedClass evaluate(const FunctionClass& cls, const Sample& sample) {
  sample.validate(cls.domain().size);
  const std::size_t M = cls.num_functions();
  const std::size_t K = cls.output_dim();
  std::vector<double> table;
  table.reserve(M * sample.size() * K);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t t = 0; t < sample.size(); ++t) {
      auto v = cls.at(m, sample[t]);
      table.insert(table.end(), v.begin(), v.end());
    }
  return EvaluatedClass(sample, M, K, std::move(table));
}

ScalarClass restrict(const FunctionClass& cls, std::size_t coordinate) {
  if (coordinate >= cls.output_dim())
    fail(ErrorKind::InvalidCoordinate, "coordinate " + std::to_string(coordinate) +
                                           " >= output dimension " +
                                           std::to_string(cls.output_dim()));
  Matrix out(cls.num_functions(), cls.domain().size);
  for (std::size_t m = 0; m < cls.num_functions(); ++m)
    for (std::size_t x = 0; x < cls.domain().size; ++x) out(m, x) = cls(m, x, coordinate);
  return ScalarClass(cls.domain(), std::move(out));
}

FunctionClass as_vector_class(const ScalarClass& sc) {
  return FunctionClass(sc.domain(), sc.num_functions(), 1, sc.values().data());
}

FunctionClass make_sign_product_class(std::size_t dimension, std::size_t max_functions) {
  if (dimension == 0) fail(ErrorKind::InvalidSpec, "dimension must be positive");
  if (dimension >= 63 || (std::size_t{1} << dimension) > max_functions)
    fail(ErrorKind::BudgetExceeded,
         "sign-product class with K=" + std::to_string(dimension) + " exceeds budget");
  const std::size_t M = std::size_t{1} << dimension;
  const std::size_t K = dimension;
  std::vector<double> values(M * K * K, 0.0);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t j = 0; j < K; ++j) {
      const double sigma = ((m >> (K - 1 - j)) & 1U) ? 1.0 : -1.0;
      values[(m * K + j) * K + j] = sigma;
    }
  Domain domain = Domain::of_size(K);
  for (std::size_t j = 0; j < K; ++j) domain.labels.push_back("e" + std::to_string(j + 1));
  return FunctionClass(std::move(domain), M, K, std::move(values));
}

}  // namespace vcontract
