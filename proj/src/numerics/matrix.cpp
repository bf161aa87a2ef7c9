#include "deepnet/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "deepnet/errors.hpp"

namespace deepnet {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) + " does not match (" +
                     std::to_string(rows) + " x " + std::to_string(cols) + ")");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged initializer list");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::row_vector(std::span<const double> values) {
  return Matrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string shape_str(const Matrix& m) {
  std::ostringstream os;
  os << '(' << m.rows() << " x " << m.cols() << ')';
  return os.str();
}

namespace {

constexpr std::size_t kBlockK = 256;
constexpr std::size_t kBlockN = 256;
constexpr std::size_t kTileN = 16;
constexpr std::size_t kTileM = 4;

// Packs B[k0:k0+kb, n0:n0+nb] into column panels of width kTileN, zero padded.
// With Transposed, B is read as the transpose of `b`.
template <bool Transposed>
void pack_b(const Matrix& b, std::size_t k0, std::size_t kb, std::size_t n0, std::size_t nb,
            std::vector<double>& out) {
  const std::size_t panels = (nb + kTileN - 1) / kTileN;
  out.assign(panels * kb * kTileN, 0.0);
  for (std::size_t p = 0; p < panels; ++p) {
    const std::size_t j0 = n0 + p * kTileN;
    const std::size_t w = std::min(kTileN, n0 + nb - j0);
    double* dst = out.data() + p * kb * kTileN;
    if constexpr (Transposed) {
      for (std::size_t jj = 0; jj < w; ++jj) {
        const double* src = b.row(j0 + jj).data() + k0;
        for (std::size_t kk = 0; kk < kb; ++kk) dst[kk * kTileN + jj] = src[kk];
      }
    } else {
      for (std::size_t kk = 0; kk < kb; ++kk) {
        const double* src = b.row(k0 + kk).data() + j0;
        std::copy(src, src + w, dst + kk * kTileN);
      }
    }
  }
}

// Four-wide double vectors; GCC and Clang lower these to SSE/AVX as available.
typedef double vec4 __attribute__((vector_size(32)));
constexpr std::size_t kLanes = 4;
constexpr std::size_t kVecs = kTileN / kLanes;

inline vec4 load4(const double* p) noexcept {
  vec4 v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline void store4(double* p, vec4 v) noexcept { std::memcpy(p, &v, sizeof v); }

// C[Rows x kTileN] += A[Rows x kb] * panel[kb x kTileN]; only `width` columns of C are live.
template <std::size_t Rows>
void micro_kernel(const double* const* a, const double* panel, std::size_t kb, double* const* c,
                  std::size_t width) {
  vec4 acc[Rows][kVecs];
  if (width == kTileN) {
    for (std::size_t r = 0; r < Rows; ++r) {
      for (std::size_t v = 0; v < kVecs; ++v) acc[r][v] = load4(c[r] + v * kLanes);
    }
  } else {
    double tmp[kTileN];
    for (std::size_t r = 0; r < Rows; ++r) {
      for (std::size_t j = 0; j < kTileN; ++j) tmp[j] = j < width ? c[r][j] : 0.0;
      for (std::size_t v = 0; v < kVecs; ++v) acc[r][v] = load4(tmp + v * kLanes);
    }
  }
  for (std::size_t kk = 0; kk < kb; ++kk) {
    const double* brow = panel + kk * kTileN;
    vec4 b[kVecs];
    for (std::size_t v = 0; v < kVecs; ++v) b[v] = load4(brow + v * kLanes);
    for (std::size_t r = 0; r < Rows; ++r) {
      const double av = a[r][kk];
      for (std::size_t v = 0; v < kVecs; ++v) acc[r][v] += av * b[v];
    }
  }
  if (width == kTileN) {
    for (std::size_t r = 0; r < Rows; ++r) {
      for (std::size_t v = 0; v < kVecs; ++v) store4(c[r] + v * kLanes, acc[r][v]);
    }
  } else {
    double tmp[kTileN];
    for (std::size_t r = 0; r < Rows; ++r) {
      for (std::size_t v = 0; v < kVecs; ++v) store4(tmp + v * kLanes, acc[r][v]);
      for (std::size_t j = 0; j < width; ++j) c[r][j] = tmp[j];
    }
  }
}

template <bool Transposed>
Matrix blocked_product(const Matrix& a, const Matrix& b, std::size_t n) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  Matrix c(m, n);
  if (m == 0 || n == 0 || k == 0) return c;

  std::vector<double> packed;
  for (std::size_t n0 = 0; n0 < n; n0 += kBlockN) {
    const std::size_t nb = std::min(kBlockN, n - n0);
    const std::size_t panels = (nb + kTileN - 1) / kTileN;
    for (std::size_t k0 = 0; k0 < k; k0 += kBlockK) {
      const std::size_t kb = std::min(kBlockK, k - k0);
      pack_b<Transposed>(b, k0, kb, n0, nb, packed);
      // Panel-outer order keeps one packed panel hot in L1 across all row tiles.
      for (std::size_t p = 0; p < panels; ++p) {
        const std::size_t j0 = n0 + p * kTileN;
        const std::size_t width = std::min(kTileN, n0 + nb - j0);
        const double* panel = packed.data() + p * kb * kTileN;
        std::size_t i = 0;
        for (; i + kTileM <= m; i += kTileM) {
          const double* arows[kTileM];
          double* crows[kTileM];
          for (std::size_t r = 0; r < kTileM; ++r) {
            arows[r] = a.row(i + r).data() + k0;
            crows[r] = &c(i + r, j0);
          }
          micro_kernel<kTileM>(arows, panel, kb, crows, width);
        }
        for (; i < m; ++i) {
          const double* arow[1] = {a.row(i).data() + k0};
          double* crow[1] = {&c(i, j0)};
          micro_kernel<1>(arow, panel, kb, crow, width);
        }
      }
    }
  }
  return c;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul shape mismatch: " + shape_str(a) + " * " + shape_str(b));
  }
  return blocked_product<false>(a, b, b.cols());
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt shape mismatch: " + shape_str(a) + " * transpose" + shape_str(b));
  }
  return blocked_product<true>(a, b, b.rows());
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  constexpr std::size_t kTile = 32;
  for (std::size_t i0 = 0; i0 < a.rows(); i0 += kTile) {
    for (std::size_t j0 = 0; j0 < a.cols(); j0 += kTile) {
      const std::size_t ie = std::min(a.rows(), i0 + kTile);
      const std::size_t je = std::min(a.cols(), j0 + kTile);
      for (std::size_t i = i0; i < ie; ++i) {
        for (std::size_t j = j0; j < je; ++j) t(j, i) = a(i, j);
      }
    }
  }
  return t;
}

ColumnStats col_stats(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw ShapeError("col_stats needs a non-empty matrix, got " + shape_str(a));
  }
  const auto n = static_cast<double>(a.rows());
  ColumnStats s{col_sums(a), std::vector<double>(a.cols(), 0.0)};
  for (double& m : s.mean) m /= n;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double d = r[j] - s.mean[j];
      s.var[j] += d * d;
    }
  }
  for (double& v : s.var) v /= n;
  return s;
}

std::vector<double> col_sums(const Matrix& a) {
  std::vector<double> s(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s[j] += r[j];
  }
  return s;
}

Matrix gather_rows(const Matrix& a, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), a.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= a.rows()) {
      throw ShapeError("row index " + std::to_string(indices[i]) + " out of range for " + shape_str(a));
    }
    const auto src = a.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

bool all_finite(const Matrix& a) noexcept {
  return std::all_of(a.values().begin(), a.values().end(), [](double v) { return std::isfinite(v); });
}

namespace {
void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + " shape mismatch: " + shape_str(a) + " vs " + shape_str(b));
  }
}
}  // namespace

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out = a;
  auto o = out.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] *= bv[i];
  return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "subtract");
  Matrix out = a;
  auto o = out.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  return out;
}

void add_row_inplace(Matrix& a, std::span<const double> row) {
  if (row.size() != a.cols()) {
    throw ShapeError("row broadcast of length " + std::to_string(row.size()) + " onto " + shape_str(a));
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += row[j];
  }
}

void scale_inplace(Matrix& a, double s) {
  for (double& v : a.values()) v *= s;
}

}  // namespace deepnet
