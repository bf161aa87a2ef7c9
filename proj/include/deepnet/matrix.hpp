#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace deepnet {

// Dense row-major matrix of doubles. Rows are samples, columns are features.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Takes ownership of `data`; its length must equal rows*cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix row_vector(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  const std::vector<double>& storage() const noexcept { return data_; }

  void fill(double v);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// "(rows x cols)", used in error messages.
std::string shape_str(const Matrix& m);

// a * b. Throws ShapeError when a.cols() != b.rows().
//
// Every output element accumulates its products in ascending k order, so the
// result agrees with a naive triple loop up to floating-point contraction.
Matrix matmul(const Matrix& a, const Matrix& b);
// a * transpose(b) without materializing the transpose; same ordering guarantee.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

struct ColumnStats {
  std::vector<double> mean;
  std::vector<double> var;  // biased: divides by N
};

// Per-column mean and biased variance. Throws ShapeError on an empty matrix.
ColumnStats col_stats(const Matrix& a);

std::vector<double> col_sums(const Matrix& a);

// Rows of `a` picked by `indices`, in that order.
Matrix gather_rows(const Matrix& a, std::span<const std::size_t> indices);

bool all_finite(const Matrix& a) noexcept;

// Element-wise helpers used by the layers; all throw ShapeError on mismatch.
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
void add_row_inplace(Matrix& a, std::span<const double> row);
void scale_inplace(Matrix& a, double s);

}  // namespace deepnet
