#ifndef GRAPHSUM_CLUSTERING_HPP
#define GRAPHSUM_CLUSTERING_HPP

#include <cstdint>
#include <vector>

#include "graphsum/matrix.hpp"
#include "graphsum/rng.hpp"

namespace graphsum {

/// One label per row, each in [0, cluster_count). Every cluster is nonempty
/// whenever cluster_count <= row count.
struct ClusterAssignment {
  std::vector<std::size_t> labels;
  std::size_t cluster_count = 0;
};

/// Clamped-cosine affinity over latent rows: symmetric, nonnegative,
/// zero diagonal. Same construction as the similarity graph adjacency.
Matrix affinity(const Matrix& latent);

/// Symmetric normalized Laplacian L = I - D^{-1/2} W D^{-1/2}. Rows of
/// isolated nodes (zero degree) become identity rows.
Matrix normalized_laplacian(const Matrix& affinity);

struct EigenResult {
  Matrix vectors;              // one eigenvector per column, ascending eigenvalue
  std::vector<double> values;  // matching eigenvalues
};

/// Bottom-k eigenpairs of a symmetric matrix by cyclic Jacobi rotation.
/// Columns are orthonormal; residuals |Lv - lambda v| stay below 1e-8.
/// Throws PreconditionError on asymmetric input or k > n.
EigenResult symmetric_eigensolve(const Matrix& m, std::size_t k);

/// Lloyd k-means with k-means++ seeding from the given generator. Empty
/// clusters are repaired by stealing the farthest point from the largest
/// cluster. Converges or stops after 100 iterations.
ClusterAssignment kmeans(const Matrix& rows, std::size_t k, Rng& rng);

/// Spectral clustering of a precomputed affinity: Laplacian, bottom
/// eigenvectors, row normalization, k-means. Deterministic given the seed.
ClusterAssignment spectral_partition(const Matrix& affinity, std::size_t clusters,
                                     std::uint64_t seed);

/// Spectral clustering of latent rows via their cosine affinity.
ClusterAssignment spectral_cluster(const Matrix& latent, std::size_t clusters,
                                   std::uint64_t seed);

}  // namespace graphsum

#endif  // GRAPHSUM_CLUSTERING_HPP
