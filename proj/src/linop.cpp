#include "adaprox/linop.hpp"

#include <string>

namespace adaprox {

namespace {

std::string shape_message(const char* what, std::size_t expected, std::size_t got) {
  return std::string(what) + ": expected length " + std::to_string(expected) + ", got " +
         std::to_string(got);
}

}  // namespace

bool all_finite(const Vector& v) { return v.allFinite(); }

SparseMatrixCSR::SparseMatrixCSR(std::size_t rows, std::size_t cols,
                                 std::vector<std::size_t> row_offsets,
                                 std::vector<std::size_t> col_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != rows_ + 1 || row_offsets_.front() != 0)
    throw std::invalid_argument("CSR: row offsets must have rows+1 entries starting at 0");
  if (col_indices_.size() != values_.size() || row_offsets_.back() != values_.size())
    throw std::invalid_argument("CSR: offsets, indices and values disagree on nnz");
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1])
      throw std::invalid_argument("CSR: row offsets must be non-decreasing");
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (col_indices_[p] >= cols_) throw std::invalid_argument("CSR: column index out of range");
      if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1])
        throw std::invalid_argument("CSR: column indices must be strictly increasing per row");
    }
  }
}

SparseMatrixCSR SparseMatrixCSR::from_dense(const DenseMatrix& dense) {
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) {
        cols.push_back(static_cast<std::size_t>(j));
        vals.push_back(dense(i, j));
      }
    }
    offsets.push_back(vals.size());
  }
  return SparseMatrixCSR(static_cast<std::size_t>(dense.rows()),
                         static_cast<std::size_t>(dense.cols()), std::move(offsets),
                         std::move(cols), std::move(vals));
}

Vector SparseMatrixCSR::multiply(const Vector& x) const {
  Vector y = Vector::Zero(static_cast<Eigen::Index>(rows_));
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      acc += values_[p] * x[static_cast<Eigen::Index>(col_indices_[p])];
    y[static_cast<Eigen::Index>(i)] = acc;
  }
  return y;
}

Vector SparseMatrixCSR::multiply_transpose(const Vector& y) const {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    const double yi = y[static_cast<Eigen::Index>(i)];
    if (yi == 0.0) continue;
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      x[static_cast<Eigen::Index>(col_indices_[p])] += values_[p] * yi;
  }
  return x;
}

DenseMatrix SparseMatrixCSR::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col_indices_[p])) = values_[p];
  return d;
}

CountedOperator::CountedOperator(DenseMatrix dense)
    : CountedOperator(std::make_shared<const Kernel>(std::move(dense))) {}

CountedOperator::CountedOperator(SparseMatrixCSR sparse)
    : CountedOperator(std::make_shared<const Kernel>(std::move(sparse))) {}

CountedOperator::CountedOperator(std::shared_ptr<const Kernel> kernel) : kernel_(std::move(kernel)) {
  std::visit(
      [this](const auto& k) {
        rows_ = static_cast<std::size_t>(k.rows());
        cols_ = static_cast<std::size_t>(k.cols());
      },
      *kernel_);
}

Vector CountedOperator::apply(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != cols_)
    throw DimensionError(shape_message("apply", cols_, static_cast<std::size_t>(x.size())));
  forward_count_.fetch_add(1, std::memory_order_relaxed);
  if (const auto* d = std::get_if<DenseMatrix>(kernel_.get())) return *d * x;
  return std::get<SparseMatrixCSR>(*kernel_).multiply(x);
}

Vector CountedOperator::apply_transpose(const Vector& y) const {
  if (static_cast<std::size_t>(y.size()) != rows_)
    throw DimensionError(shape_message("apply_transpose", rows_, static_cast<std::size_t>(y.size())));
  transpose_count_.fetch_add(1, std::memory_order_relaxed);
  if (const auto* d = std::get_if<DenseMatrix>(kernel_.get())) return d->transpose() * y;
  return std::get<SparseMatrixCSR>(*kernel_).multiply_transpose(y);
}

std::shared_ptr<CountedOperator> CountedOperator::fresh_copy() const {
  return std::make_shared<CountedOperator>(kernel_);
}

}  // namespace adaprox
