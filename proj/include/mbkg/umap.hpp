#pragma once

#include <cstdint>
#include <vector>

#include "mbkg/matrix.hpp"

namespace mbkg {

struct UmapParams {
  int n_neighbors = 15;
  double min_dist = 0.1;
  int target_dim = 2;
  double spread = 1.0;
  int n_epochs = 0;  // 0 picks 500 for small inputs, 200 otherwise
  double negative_sample_rate = 5.0;
  std::uint64_t seed = 0;
};

// Exact k nearest neighbours (self excluded), ascending distance, ties by index.
struct KnnGraph {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> indices;
  std::vector<std::vector<double>> distances;

  // The first k' columns, for reuse across n_neighbors settings.
  KnnGraph truncated(std::size_t k_prime) const;
};

KnnGraph exact_knn(const Matrix& points, std::size_t k);

// Curve 1/(1 + a d^(2b)) fitted to the min_dist/spread target.
std::pair<double, double> fit_ab(double spread, double min_dist);

struct FuzzyEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;
};

// Symmetrized fuzzy simplicial set over the kNN graph (i < j per edge).
std::vector<FuzzyEdge> fuzzy_simplicial_set(const KnnGraph& knn);

// Throws std::invalid_argument when points.rows() < n_neighbors + 1 or target_dim is not below the input dimension.
Matrix umap_embed(const Matrix& points, const UmapParams& params, const KnnGraph* knn = nullptr);

}  // namespace mbkg
