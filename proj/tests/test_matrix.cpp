#include <doctest.h>

#include <cmath>

#include "graphsum/errors.hpp"
#include "graphsum/matrix.hpp"
#include "graphsum/rng.hpp"

using namespace graphsum;

TEST_CASE("matmul basics") {
  const Matrix m = Matrix::from_rows({{1, 2}, {3, 4}});

  SUBCASE("identity is neutral") {
    const Matrix out = matmul(Matrix::identity(2), m);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(out(i, j) == m(i, j));
      }
    }
  }

  SUBCASE("hand-computed product") {
    const Matrix ones = Matrix::from_rows({{1}, {1}});
    const Matrix out = matmul(m, ones);
    CHECK(out(0, 0) == doctest::Approx(3.0));
    CHECK(out(1, 0) == doctest::Approx(7.0));
  }

  SUBCASE("zero matrix annihilates") {
    const Matrix zero(2, 2, 0.0);
    const Matrix out = matmul(zero, m);
    for (double v : out.data()) {
      CHECK(v == 0.0);
    }
  }

  SUBCASE("shape mismatch names both shapes") {
    const Matrix bad(3, 3);
    CHECK_THROWS_WITH_AS(matmul(m, bad), doctest::Contains("2x2"), DimensionError);
    CHECK_THROWS_WITH_AS(matmul(m, bad), doctest::Contains("3x3"), DimensionError);
  }
}

TEST_CASE("matmul gradient rules match finite differences") {
  Rng rng(7);
  Matrix a(3, 4), b(4, 2);
  for (double& v : a.data()) v = rng.uniform(-1, 1);
  for (double& v : b.data()) v = rng.uniform(-1, 1);
  Matrix d_out(3, 2);
  for (double& v : d_out.data()) v = rng.uniform(-1, 1);

  // loss = <d_out, a*b>; gradient w.r.t. a is d_out*b^T, w.r.t. b is a^T*d_out.
  const Matrix da = matmul_grad_lhs(d_out, b);
  const Matrix db = matmul_grad_rhs(a, d_out);
  const double h = 1e-6;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double saved = a.data()[i];
    a.data()[i] = saved + h;
    const double up = dot(d_out, matmul(a, b));
    a.data()[i] = saved - h;
    const double down = dot(d_out, matmul(a, b));
    a.data()[i] = saved;
    CHECK(da.data()[i] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double saved = b.data()[i];
    b.data()[i] = saved + h;
    const double up = dot(d_out, matmul(a, b));
    b.data()[i] = saved - h;
    const double down = dot(d_out, matmul(a, b));
    b.data()[i] = saved;
    CHECK(db.data()[i] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("activations") {
  const Matrix x = Matrix::from_rows({{0.0, 1.0, -2.0}});
  const Matrix t = activate(x, Activation::Tanh);
  CHECK(t(0, 0) == doctest::Approx(0.0));
  CHECK(t(0, 1) == doctest::Approx(0.761594).epsilon(1e-6));
  const Matrix s = activate(x, Activation::Sigmoid);
  CHECK(s(0, 0) == doctest::Approx(0.5));
  const Matrix r = activate(x, Activation::Relu);
  CHECK(r(0, 2) == 0.0);
  CHECK(r(0, 1) == 1.0);

  SUBCASE("no overflow for extreme finite inputs") {
    const Matrix wild = Matrix::from_rows({{1e308, -1e308, 745.0, -745.0}});
    for (auto kind : {Activation::Tanh, Activation::Sigmoid, Activation::Relu}) {
      CHECK(all_finite(activate(wild, kind)));
    }
  }
}

TEST_CASE("softmax rows") {
  SUBCASE("uniform on constant rows") {
    const Matrix out = softmax_rows(Matrix::from_rows({{0, 0, 0}}));
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(out(0, j) == doctest::Approx(1.0 / 3));
    }
  }

  SUBCASE("huge values stay stable") {
    const Matrix out = softmax_rows(Matrix::from_rows({{1000.0, 1000.0}}));
    CHECK(out(0, 0) == doctest::Approx(0.5));
    CHECK(all_finite(out));
  }

  SUBCASE("hand-computed case") {
    const Matrix out = softmax_rows(Matrix::from_rows({{0.0, std::log(3.0)}}));
    CHECK(out(0, 0) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(out(0, 1) == doctest::Approx(0.75).epsilon(1e-9));
  }

  SUBCASE("rows sum to one, any input") {
    Rng rng(3);
    Matrix x(5, 7);
    for (double& v : x.data()) v = rng.uniform(-50, 50);
    const Matrix out = softmax_rows(x);
    for (std::size_t i = 0; i < out.rows(); ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < out.cols(); ++j) {
        CHECK(out(i, j) >= 0.0);
        total += out(i, j);
      }
      CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
  }

  SUBCASE("permutation equivariance") {
    Rng rng(11);
    Matrix x(1, 6);
    for (double& v : x.data()) v = rng.uniform(-2, 2);
    const Matrix out = softmax_rows(x);
    Matrix reversed(1, 6);
    for (std::size_t j = 0; j < 6; ++j) {
      reversed(0, j) = x(0, 5 - j);
    }
    const Matrix out_rev = softmax_rows(reversed);
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(out_rev(0, j) == doctest::Approx(out(0, 5 - j)).epsilon(1e-14));
    }
  }
}
