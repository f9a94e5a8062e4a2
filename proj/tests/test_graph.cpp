#include <doctest.h>

#include <cmath>

#include "graphsum/errors.hpp"
#include "graphsum/graph.hpp"
#include "graphsum/rng.hpp"

using namespace graphsum;

TEST_CASE("cosine similarity") {
  CHECK(cosine_similarity({1, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(cosine_similarity({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK(cosine_similarity({1, 1}, {1, 0}) == doctest::Approx(0.70711).epsilon(1e-5));

  SUBCASE("symmetric and self-similar") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> u(4), v(4);
      for (auto& x : u) x = rng.uniform(-1, 1);
      for (auto& x : v) x = rng.uniform(-1, 1);
      CHECK(cosine_similarity(u, v) == doctest::Approx(cosine_similarity(v, u)).epsilon(1e-14));
      CHECK(cosine_similarity(u, u) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("zero-norm vector rejected") {
    CHECK_THROWS_AS(cosine_similarity({0, 0}, {1, 0}), DegenerateInputError);
  }
  SUBCASE("length mismatch rejected") {
    CHECK_THROWS_AS(cosine_similarity({1, 0, 0}, {1, 0}), DimensionError);
  }
}

TEST_CASE("build_adjacency") {
  SUBCASE("identical rows give a unit edge") {
    const WeightedGraph g = build_adjacency(Matrix::from_rows({{2, 0}, {2, 0}}));
    CHECK(g.adjacency(0, 1) == doctest::Approx(1.0));
    CHECK(g.adjacency(0, 0) == 0.0);
    CHECK(g.adjacency(1, 1) == 0.0);
  }

  SUBCASE("orthogonal rows give isolated nodes, normalization keeps them usable") {
    const WeightedGraph g = build_adjacency(Matrix::from_rows({{1, 0}, {0, 1}}));
    CHECK(g.adjacency(0, 1) == 0.0);
    CHECK(g.normalized(0, 0) == doctest::Approx(1.0));
    CHECK(g.normalized(1, 1) == doctest::Approx(1.0));
  }

  SUBCASE("hand-computed off-diagonal") {
    const WeightedGraph g = build_adjacency(Matrix::from_rows({{1, 0}, {1, 1}}));
    CHECK(g.adjacency(0, 1) == doctest::Approx(0.70711).epsilon(1e-5));
  }

  SUBCASE("negative cosine clamps to zero") {
    const WeightedGraph g = build_adjacency(Matrix::from_rows({{1, 0}, {-1, 0}}));
    CHECK(g.adjacency(0, 1) == 0.0);
  }

  SUBCASE("zero-norm row names the row") {
    CHECK_THROWS_WITH_AS(build_adjacency(Matrix::from_rows({{1, 0}, {0, 0}})),
                         doctest::Contains("row 1"), DegenerateInputError);
  }

  SUBCASE("min_edge_weight drops weak edges") {
    const Matrix x = Matrix::from_rows({{1, 0}, {1, 1}, {1, 0.1}});
    const WeightedGraph g = build_adjacency(x, 0.8);
    CHECK(g.adjacency(0, 1) == 0.0);  // 0.707 < 0.8
    CHECK(g.adjacency(0, 2) > 0.8);   // 0.995
  }

  SUBCASE("permutation equivariance") {
    Rng rng(17);
    Matrix x(5, 3);
    for (double& v : x.data()) v = rng.uniform(-1, 1);
    const WeightedGraph g = build_adjacency(x);
    // Reverse the rows and compare a(i,j) with a'(n-1-i, n-1-j).
    Matrix rev(5, 3);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        rev(i, j) = x(4 - i, j);
      }
    }
    const WeightedGraph gr = build_adjacency(rev);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        CHECK(gr.adjacency(4 - i, 4 - j) == doctest::Approx(g.adjacency(i, j)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("normalize_adjacency") {
  SUBCASE("no edges gives the identity") {
    const Matrix out = normalize_adjacency(Matrix(2, 2, 0.0));
    CHECK(out(0, 0) == doctest::Approx(1.0));
    CHECK(out(0, 1) == doctest::Approx(0.0));
  }

  SUBCASE("single unit edge gives the half matrix") {
    const Matrix out = normalize_adjacency(Matrix::from_rows({{0, 1}, {1, 0}}));
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(out(i, j) == doctest::Approx(0.5));
      }
    }
  }

  SUBCASE("single node") {
    const Matrix out = normalize_adjacency(Matrix(1, 1, 0.0));
    CHECK(out(0, 0) == doctest::Approx(1.0));
  }

  SUBCASE("symmetric, finite, row sums bounded by sqrt(n)") {
    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = 2 + rng.next_index(8);
      Matrix x(n, 4);
      for (double& v : x.data()) v = rng.uniform(-1, 1);
      const Matrix norm = build_adjacency(x).normalized;
      CHECK(all_finite(norm));
      for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          CHECK(std::fabs(norm(i, j) - norm(j, i)) <= 1e-12);
          CHECK(norm(i, j) >= 0.0);
          row_sum += norm(i, j);
        }
        CHECK(row_sum > 0.0);
        CHECK(row_sum <= std::sqrt(static_cast<double>(n)) + 1e-9);
      }
    }
  }

  SUBCASE("row sums are exactly one on degree-regular graphs") {
    for (double w : {1.0, 0.4}) {
      const std::size_t n = 6;
      Matrix a(n, n, w);
      for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = 0.0;
      }
      const Matrix norm = normalize_adjacency(a);
      for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          row_sum += norm(i, j);
        }
        CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("graph_from_adjacency validation") {
  CHECK_THROWS_AS(graph_from_adjacency(Matrix::from_rows({{1, 0}, {0, 0}})), PreconditionError);
  CHECK_THROWS_AS(graph_from_adjacency(Matrix::from_rows({{0, 1}, {0.5, 0}})), PreconditionError);
  CHECK_THROWS_AS(graph_from_adjacency(Matrix::from_rows({{0, -1}, {-1, 0}})), PreconditionError);
  const WeightedGraph g = graph_from_adjacency(Matrix::from_rows({{0, 0.5}, {0.5, 0}}));
  CHECK(g.n == 2);
  CHECK(g.normalized(0, 0) > 0.0);
}
