#ifndef GRAPHSUM_GRAPH_HPP
#define GRAPHSUM_GRAPH_HPP

#include <vector>

#include "graphsum/matrix.hpp"

namespace graphsum {

/// Weighted similarity graph over embedding rows. `adjacency` is symmetric
/// with entries in [0,1] and zero diagonal; `normalized` is the self-looped,
/// degree-normalized form the encoder propagates over.
struct WeightedGraph {
  std::size_t n = 0;
  Matrix adjacency;
  Matrix normalized;
};

/// u.v / (|u||v|), clamped to [-1, 1]. Throws DegenerateInputError on a
/// zero-norm vector.
double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v);

/// Pairwise clamped-cosine adjacency over the rows of `embeddings`:
/// entries max(0, cos) off the diagonal, zero diagonal. Entries below
/// `min_edge_weight` are dropped to zero. Throws DegenerateInputError
/// naming the first zero-norm row.
Matrix cosine_adjacency(const Matrix& embeddings, double min_edge_weight = 0.0);

/// Symmetric renormalization with self loops: D^{-1/2} (A + I) D^{-1/2}
/// where D is the degree matrix of A + I.
Matrix normalize_adjacency(const Matrix& adjacency);

/// Build the similarity graph over embedding rows and its normalized form.
WeightedGraph build_adjacency(const Matrix& embeddings, double min_edge_weight = 0.0);

/// Wrap an existing adjacency (tests, planted graphs). Validates symmetry,
/// nonnegativity, and zero diagonal, then normalizes.
WeightedGraph graph_from_adjacency(Matrix adjacency);

}  // namespace graphsum

#endif  // GRAPHSUM_GRAPH_HPP
