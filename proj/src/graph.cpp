#include "graphsum/graph.hpp"

#include <algorithm>
#include <cmath>

#include "graphsum/errors.hpp"

namespace graphsum {

namespace {

double row_norm(const Matrix& m, std::size_t r) {
  double acc = 0.0;
  const double* p = m.row_ptr(r);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    acc += p[c] * p[c];
  }
  return std::sqrt(acc);
}

double row_dot(const Matrix& m, std::size_t a, std::size_t b) {
  double acc = 0.0;
  const double* pa = m.row_ptr(a);
  const double* pb = m.row_ptr(b);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    acc += pa[c] * pb[c];
  }
  return acc;
}

}  // namespace

double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) {
    throw DimensionError("cosine_similarity: length mismatch (" + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()) + ")");
  }
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uu += u[i] * u[i];
    vv += v[i] * v[i];
    uv += u[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw DegenerateInputError("cosine_similarity: zero-norm vector");
  }
  return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

Matrix cosine_adjacency(const Matrix& embeddings, double min_edge_weight) {
  if (embeddings.rows() == 0) {
    throw DegenerateInputError("cosine_adjacency: empty embedding matrix");
  }
  const std::size_t n = embeddings.rows();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    norms[i] = row_norm(embeddings, i);
    if (norms[i] == 0.0) {
      throw DegenerateInputError("cosine_adjacency: zero-norm row " + std::to_string(i));
    }
  }
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double cos = row_dot(embeddings, i, j) / (norms[i] * norms[j]);
      cos = std::clamp(cos, -1.0, 1.0);
      double w = std::max(0.0, cos);
      if (w < min_edge_weight) {
        w = 0.0;
      }
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  return a;
}

Matrix normalize_adjacency(const Matrix& adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw DimensionError("normalize_adjacency: matrix is not square (" + adjacency.shape_str() +
                         ")");
  }
  const std::size_t n = adjacency.rows();
  std::vector<double> inv_sqrt_degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 1.0;  // self loop
    for (std::size_t j = 0; j < n; ++j) {
      degree += adjacency(i, j);
    }
    inv_sqrt_degree[i] = 1.0 / std::sqrt(degree);
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double with_loop = adjacency(i, j) + (i == j ? 1.0 : 0.0);
      out(i, j) = with_loop * inv_sqrt_degree[i] * inv_sqrt_degree[j];
    }
  }
  return out;
}

WeightedGraph build_adjacency(const Matrix& embeddings, double min_edge_weight) {
  WeightedGraph g;
  g.adjacency = cosine_adjacency(embeddings, min_edge_weight);
  g.normalized = normalize_adjacency(g.adjacency);
  g.n = embeddings.rows();
  return g;
}

WeightedGraph graph_from_adjacency(Matrix adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw DimensionError("graph_from_adjacency: matrix is not square (" + adjacency.shape_str() +
                         ")");
  }
  const std::size_t n = adjacency.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0.0) {
      throw PreconditionError("graph_from_adjacency: nonzero diagonal at node " +
                              std::to_string(i));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency(i, j) < 0.0) {
        throw PreconditionError("graph_from_adjacency: negative weight at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
      }
      if (std::fabs(adjacency(i, j) - adjacency(j, i)) > 1e-12) {
        throw PreconditionError("graph_from_adjacency: asymmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      }
    }
  }
  WeightedGraph g;
  g.n = n;
  g.normalized = normalize_adjacency(adjacency);
  g.adjacency = std::move(adjacency);
  return g;
}

}  // namespace graphsum
