#include "graphsum/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "graphsum/errors.hpp"
#include "graphsum/graph.hpp"

namespace graphsum {

Matrix affinity(const Matrix& latent) { return cosine_adjacency(latent); }

Matrix normalized_laplacian(const Matrix& w) {
  if (w.rows() != w.cols()) {
    throw DimensionError("normalized_laplacian: matrix is not square (" + w.shape_str() + ")");
  }
  const std::size_t n = w.rows();
  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      degree[i] += w(i, j);
    }
  }
  Matrix l = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] <= 0.0) {
      continue;  // isolated node keeps its identity row
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && degree[j] > 0.0) {
        l(i, j) = -w(i, j) / std::sqrt(degree[i] * degree[j]);
      }
    }
  }
  return l;
}

EigenResult symmetric_eigensolve(const Matrix& m, std::size_t k) {
  const std::size_t n = m.rows();
  if (m.cols() != n) {
    throw PreconditionError("symmetric_eigensolve: matrix is not square (" + m.shape_str() + ")");
  }
  if (k > n) {
    throw PreconditionError("symmetric_eigensolve: k (" + std::to_string(k) +
                            ") exceeds matrix size (" + std::to_string(n) + ")");
  }
  double scale = 0.0;
  for (double v : m.data()) {
    scale = std::max(scale, std::fabs(v));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(m(i, j) - m(j, i)) > 1e-10 * std::max(1.0, scale)) {
        throw PreconditionError("symmetric_eigensolve: input is not symmetric at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  Matrix a = m;
  Matrix v = Matrix::identity(n);
  const std::size_t max_sweeps = 64;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        off += a(p, q) * a(p, q);
      }
    }
    if (std::sqrt(2.0 * off) <= 1e-14 * std::max(1.0, scale)) {
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) {
          continue;
        }
        // Classic two-sided Jacobi rotation annihilating a(p,q).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a(p, i);
          const double aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenResult result;
  result.vectors = Matrix(n, k);
  result.values.resize(k);
  for (std::size_t col = 0; col < k; ++col) {
    const std::size_t src = order[col];
    result.values[col] = a(src, src);
    // Canonical sign: the largest-magnitude component points up.
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::fabs(v(i, src)) > best) {
        best = std::fabs(v(i, src));
        arg = i;
      }
    }
    const double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      result.vectors(i, col) = sign * v(i, src);
    }
  }
  return result;
}

namespace {

double sq_dist(const Matrix& rows, std::size_t r, const std::vector<double>& center) {
  double acc = 0.0;
  const double* p = rows.row_ptr(r);
  for (std::size_t c = 0; c < rows.cols(); ++c) {
    const double d = p[c] - center[c];
    acc += d * d;
  }
  return acc;
}

// Reassign one farthest point from the largest cluster to each empty cluster.
void repair_empty_clusters(const Matrix& rows, std::size_t k,
                           const std::vector<std::vector<double>>& centers,
                           std::vector<std::size_t>& labels) {
  for (std::size_t c = 0; c < k; ++c) {
    if (std::count(labels.begin(), labels.end(), c) > 0) {
      continue;
    }
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t lbl : labels) {
      sizes[lbl]++;
    }
    std::size_t largest = 0;
    for (std::size_t i = 1; i < k; ++i) {
      if (sizes[i] > sizes[largest]) {
        largest = i;
      }
    }
    if (sizes[largest] < 2) {
      continue;
    }
    std::size_t farthest = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      if (labels[r] != largest) {
        continue;
      }
      const double d = sq_dist(rows, r, centers[largest]);
      if (d > best) {
        best = d;
        farthest = r;
      }
    }
    labels[farthest] = c;
  }
}

}  // namespace

ClusterAssignment kmeans(const Matrix& rows, std::size_t k, Rng& rng) {
  const std::size_t n = rows.rows();
  if (k < 1) {
    throw PreconditionError("kmeans: k must be at least 1");
  }
  if (k > n) {
    throw PreconditionError("kmeans: k (" + std::to_string(k) + ") exceeds point count (" +
                            std::to_string(n) + ")");
  }

  // k-means++ seeding.
  std::vector<std::vector<double>> centers;
  centers.reserve(k);
  centers.push_back(rows.row_copy(rng.next_index(n)));
  std::vector<double> min_d2(n, 0.0);
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double best = std::numeric_limits<double>::max();
      for (const auto& c : centers) {
        best = std::min(best, sq_dist(rows, r, c));
      }
      min_d2[r] = best;
      total += best;
    }
    if (total <= 0.0) {
      centers.push_back(rows.row_copy(rng.next_index(n)));
      continue;
    }
    const double draw = rng.next_double() * total;
    double acc = 0.0;
    std::size_t chosen = n - 1;
    for (std::size_t r = 0; r < n; ++r) {
      acc += min_d2[r];
      if (draw < acc) {
        chosen = r;
        break;
      }
    }
    centers.push_back(rows.row_copy(chosen));
  }

  std::vector<std::size_t> labels(n, 0);
  for (std::size_t iter = 0; iter < 100; ++iter) {
    std::vector<std::size_t> next(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
      double best = std::numeric_limits<double>::max();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = sq_dist(rows, r, centers[c]);
        if (d < best) {
          best = d;
          next[r] = c;
        }
      }
    }
    repair_empty_clusters(rows, k, centers, next);
    const bool converged = iter > 0 && next == labels;
    labels = std::move(next);
    if (converged) {
      break;
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::fill(centers[c].begin(), centers[c].end(), 0.0);
      std::size_t count = 0;
      for (std::size_t r = 0; r < n; ++r) {
        if (labels[r] == c) {
          const double* p = rows.row_ptr(r);
          for (std::size_t col = 0; col < rows.cols(); ++col) {
            centers[c][col] += p[col];
          }
          ++count;
        }
      }
      if (count > 0) {
        for (double& v : centers[c]) {
          v /= static_cast<double>(count);
        }
      }
    }
  }
  return ClusterAssignment{std::move(labels), k};
}

ClusterAssignment spectral_partition(const Matrix& w, std::size_t clusters, std::uint64_t seed) {
  const std::size_t n = w.rows();
  if (clusters < 1) {
    throw PreconditionError("spectral_partition: cluster count must be at least 1");
  }
  if (clusters > n) {
    throw PreconditionError("spectral_partition: cluster count (" + std::to_string(clusters) +
                            ") exceeds node count (" + std::to_string(n) + ")");
  }
  if (clusters == 1) {
    return ClusterAssignment{std::vector<std::size_t>(n, 0), 1};
  }
  const Matrix laplacian = normalized_laplacian(w);
  EigenResult eig = symmetric_eigensolve(laplacian, clusters);
  // Row-normalize the spectral embedding; zero rows stay as-is.
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (std::size_t j = 0; j < clusters; ++j) {
      norm += eig.vectors(i, j) * eig.vectors(i, j);
    }
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (std::size_t j = 0; j < clusters; ++j) {
        eig.vectors(i, j) /= norm;
      }
    }
  }
  Rng rng(seed);
  return kmeans(eig.vectors, clusters, rng);
}

ClusterAssignment spectral_cluster(const Matrix& latent, std::size_t clusters,
                                   std::uint64_t seed) {
  return spectral_partition(affinity(latent), clusters, seed);
}

}  // namespace graphsum
