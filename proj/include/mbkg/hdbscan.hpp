#pragma once

#include <vector>

#include "mbkg/matrix.hpp"

namespace mbkg {

inline constexpr int kOutlier = -1;

struct HdbscanParams {
  int min_cluster_size = 5;
  int min_samples = 5;  // core distance is to the min_samples-th neighbour, the point itself counted
};

// One row of the condensed cluster tree. Children below n are points.
struct CondensedEdge {
  int parent = 0;
  int child = 0;
  double lambda = 0.0;
  int size = 0;
};

struct HdbscanResult {
  std::vector<int> labels;  // 0..k-1, or kOutlier
  int num_clusters = 0;
  std::vector<CondensedEdge> condensed_tree;
};

// Euclidean HDBSCAN with excess-of-mass selection; the root is never selected, except that
// a set of identical points forms one cluster.
HdbscanResult hdbscan(const Matrix& points, const HdbscanParams& params);

}  // namespace mbkg
