#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "deepnet/errors.hpp"
#include "deepnet/matrix.hpp"
#include "deepnet/rng.hpp"
#include "oracles.hpp"

using namespace deepnet;

TEST_CASE("matmul hand examples") {
  const Matrix a{{1, 2}, {3, 4}};
  CHECK(matmul(Matrix::identity(2), a) == a);
  CHECK(matmul(a, Matrix{{5}, {6}}) == Matrix{{17}, {39}});
  oracle::TestRandom r(3);
  CHECK(matmul(Matrix(2, 3), r.matrix(3, 4)) == Matrix(2, 4));
}

TEST_CASE("matmul shape mismatch names both shapes") {
  try {
    matmul(Matrix(2, 3), Matrix(2, 3));
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("(2 x 3) * (2 x 3)") != std::string::npos);
  }
  CHECK_THROWS_AS(matmul_nt(Matrix(2, 3), Matrix(2, 4)), ShapeError);
}

// Error of each entry relative to sum_k |a_ik b_kj|, so entries that cancel
// towards zero are not judged against their own tiny magnitude.
double scaled_error(const Matrix& got, const Matrix& expect, const Matrix& scale) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    worst = std::max(worst, std::abs(got.values()[i] - expect.values()[i]) / std::max(scale.values()[i], 1e-300));
  }
  return worst;
}

Matrix abs_values(Matrix m) {
  for (double& v : m.values()) v = std::abs(v);
  return m;
}

TEST_CASE("matmul agrees with the triple-loop oracle across block boundaries") {
  oracle::TestRandom r(11);
  const std::size_t shapes[][3] = {{1, 1, 1}, {3, 5, 7}, {4, 16, 16}, {7, 300, 33}, {65, 257, 270}, {9, 513, 17}};
  for (const auto& s : shapes) {
    const Matrix a = r.matrix(s[0], s[1]);
    const Matrix b = r.matrix(s[1], s[2]);
    const Matrix expect = oracle::naive_matmul(a, b);
    const Matrix scale = oracle::naive_matmul(abs_values(a), abs_values(b));
    CHECK(scaled_error(matmul(a, b), expect, scale) <= 1e-12);
    CHECK(scaled_error(matmul_nt(a, transpose(b)), expect, scale) <= 1e-12);
  }
}

TEST_CASE("matmul is associative on small random matrices") {
  oracle::TestRandom r(5);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = r.matrix(1 + r.index(6), 1 + r.index(6));
    const Matrix b = r.matrix(a.cols(), 1 + r.index(6));
    const Matrix c = r.matrix(b.cols(), 1 + r.index(6));
    const Matrix left = matmul(matmul(a, b), c);
    const Matrix right = matmul(a, matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) CHECK(std::abs(left.values()[i] - right.values()[i]) <= 1e-9);
  }
}

TEST_CASE("transpose") {
  oracle::TestRandom r(8);
  const Matrix a = r.matrix(37, 70);
  const Matrix t = transpose(a);
  REQUIRE(t.rows() == 70);
  REQUIRE(t.cols() == 37);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) CHECK(t(j, i) == a(i, j));
  }
  CHECK(transpose(t) == a);
}

TEST_CASE("col_stats") {
  const ColumnStats s = col_stats(Matrix{{1}, {3}});
  CHECK(s.mean[0] == 2.0);
  CHECK(s.var[0] == 1.0);

  const ColumnStats c = col_stats(Matrix{{4, 1}, {4, 2}, {4, 3}});
  CHECK(c.var[0] == 0.0);
  CHECK(col_stats(Matrix{{1, 2, 3}}).var == std::vector<double>{0, 0, 0});
  CHECK_THROWS_AS(col_stats(Matrix(0, 3)), ShapeError);

  oracle::TestRandom r(2);
  const Matrix m = r.matrix(50, 6, -3, 5);
  const ColumnStats st = col_stats(m);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) mean += m(i, j);
    mean /= 50.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) sq += (m(i, j) - mean) * (m(i, j) - mean);
    CHECK(std::abs(st.mean[j] - mean) <= 1e-12);
    CHECK(std::abs(st.var[j] - sq / 50.0) <= 1e-12);
    CHECK(st.var[j] >= 0.0);
  }
}

TEST_CASE("xoshiro256** reference stream") {
  // Re-derives the generator from its reference definition.
  std::uint64_t sm = 0;
  std::uint64_t s[4];
  for (auto& w : s) w = splitmix64(sm);
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  Rng rng(0);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t expect = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    REQUIRE(rng.next_u64() == expect);
  }
  std::uint64_t z = 0;
  CHECK(splitmix64(z) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("rng_uniform") {
  Rng a(42);
  Rng b(42);
  CHECK(rng_uniform(a, -1, 2, 5, 7) == rng_uniform(b, -1, 2, 5, 7));

  Rng r(42);
  const Matrix m = rng_uniform(r, 0.0, 1.0, 100, 100);
  double sum = 0.0;
  for (double v : m.values()) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    sum += v;
  }
  CHECK(std::abs(sum / 1e4 - 0.5) <= 0.02);

  CHECK_THROWS_AS(rng_uniform(r, 1.0, 1.0, 2, 2), ArgumentError);
  CHECK_THROWS_AS(rng_uniform(r, 2.0, 1.0, 2, 2), ArgumentError);
}

TEST_CASE("shuffled_indices") {
  Rng r(1);
  CHECK(shuffled_indices(r, 0).empty());
  auto p = shuffled_indices(r, 5);
  std::sort(p.begin(), p.end());
  CHECK(p == std::vector<std::size_t>{0, 1, 2, 3, 4});

  Rng a(9);
  Rng b(9);
  CHECK(shuffled_indices(a, 100) == shuffled_indices(b, 100));
}

TEST_CASE("rng helpers") {
  Rng r(3);
  for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
  const Rng base(5);
  CHECK(base.fork(0).next_u64() == Rng(5).fork(0).next_u64());
  CHECK(base.fork(0).next_u64() != base.fork(1).next_u64());

  Rng n(17);
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = n.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / 20000) < 0.03);
  CHECK(std::abs(s2 / 20000 - 1.0) < 0.05);
}
