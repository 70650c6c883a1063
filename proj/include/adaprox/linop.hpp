#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace adaprox {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Compressed sparse row storage. Column indices are strictly increasing
// within each row; checked on construction.
class SparseMatrixCSR {
 public:
  SparseMatrixCSR() = default;
  SparseMatrixCSR(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                  std::vector<std::size_t> col_indices, std::vector<double> values);

  static SparseMatrixCSR from_dense(const DenseMatrix& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::size_t>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  Vector multiply(const Vector& x) const;
  Vector multiply_transpose(const Vector& y) const;
  DenseMatrix to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

using Kernel = std::variant<DenseMatrix, SparseMatrixCSR>;

// A linear map that counts its own applications. The kernel is immutable and
// may be shared between operators; counters belong to one operator instance.
class CountedOperator {
 public:
  explicit CountedOperator(DenseMatrix dense);
  explicit CountedOperator(SparseMatrixCSR sparse);
  explicit CountedOperator(std::shared_ptr<const Kernel> kernel);

  CountedOperator(const CountedOperator&) = delete;
  CountedOperator& operator=(const CountedOperator&) = delete;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_sparse() const { return std::holds_alternative<SparseMatrixCSR>(*kernel_); }
  const Kernel& kernel() const { return *kernel_; }

  Vector apply(const Vector& x) const;
  Vector apply_transpose(const Vector& y) const;

  std::uint64_t forward_count() const { return forward_count_.load(std::memory_order_relaxed); }
  std::uint64_t transpose_count() const { return transpose_count_.load(std::memory_order_relaxed); }
  std::uint64_t total_count() const { return forward_count() + transpose_count(); }

  // Same kernel, counters starting at zero.
  std::shared_ptr<CountedOperator> fresh_copy() const;

 private:
  std::shared_ptr<const Kernel> kernel_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  mutable std::atomic<std::uint64_t> forward_count_{0};
  mutable std::atomic<std::uint64_t> transpose_count_{0};
};

bool all_finite(const Vector& v);

}  // namespace adaprox
