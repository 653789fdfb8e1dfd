#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbkg/corpus_io.hpp"
#include "mbkg/hdbscan.hpp"
#include "mbkg/matrix.hpp"
#include "mbkg/relation_extract.hpp"
#include "mbkg/umap.hpp"

namespace mbkg {

struct RelationVector {
  std::string form;   // lowercased verb surface, e.g. "driven by"
  std::string lemma;  // e.g. "drive by"
  std::vector<double> vector;
  std::size_t frequency = 0;
  bool in_vocabulary = true;  // false: every token OOV, forced outlier
};

// One entry per distinct form, sorted by form. Vectors are means over in-vocabulary tokens.
std::vector<RelationVector> embed_relations(const std::vector<SurfaceTriple>& triples, const WordVectorTable& table);

// Per-column z-score; zero-variance columns are only centred. Needs at least 2 rows.
Matrix standardize(const Matrix& vectors);

struct ClusteringConfig {
  int n_neighbors = 5;
  double min_dist = 0.0;
  int target_dim = 2;
  int min_cluster_size = 5;
  int min_samples = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const ClusteringConfig&, const ClusteringConfig&) = default;
};

// Throws std::invalid_argument for an invalid config or too few points.
Matrix reduce_dimensions(const Matrix& vectors, const ClusteringConfig& config, const KnnGraph* knn = nullptr);
std::vector<int> cluster_density(const Matrix& reduced, const ClusteringConfig& config);

struct Silhouette {
  double value = 0.0;
  bool defined = false;  // false with fewer than two clusters
};

// Mean (b - a) / max(a, b) over clustered points; outliers are ignored. Singleton clusters score 0.
Silhouette silhouette_mean(const Matrix& points, const std::vector<int>& labels);

struct ClusteringResult {
  std::vector<int> labels;
  int num_clusters = 0;
  double silhouette_mean = 0.0;
  bool silhouette_defined = false;
  double clustered_fraction = 0.0;
  double score = 0.0;
  bool failed = false;
  std::string error;
};

double score(const ClusteringResult& result);

// Reduce, cluster and score. `total_forms` is the clustered_fraction denominator (>= rows).
ClusteringResult evaluate_config(const Matrix& standardized, const ClusteringConfig& config, std::size_t total_forms,
                                 const KnnGraph* knn = nullptr);

struct GridRow {
  ClusteringConfig config;
  ClusteringResult result;
};

struct GridSearchResult {
  std::size_t best = 0;  // index into rows
  std::vector<GridRow> rows;
};

// Failed configs score -inf. Ties: higher score, then fewer clusters, then grid order.
GridSearchResult grid_search(const Matrix& standardized, const std::vector<ClusteringConfig>& grid, int jobs = 1,
                             std::size_t total_forms = 0);

// Fewest clusters among rows scoring within `band` of the best (first row on ties).
std::size_t select_config(const std::vector<GridRow>& rows, double band = 0.95);

struct GridSpec {
  std::vector<int> n_neighbors{5, 10, 15, 30};
  std::vector<double> min_dist{0.0, 0.1};
  std::vector<int> target_dim{2, 5};
  std::vector<int> min_cluster_size{5, 10, 15, 25};
  std::vector<int> min_samples{1, 5};
};

std::vector<ClusteringConfig> expand_grid(const GridSpec& spec, std::uint64_t seed);

struct RelationMap {
  std::map<std::string, std::string> entries;  // form -> predicate lemma (lowercase)

  // Throws InvariantError for an unmapped form.
  const std::string& at(const std::string& form) const;
};

std::string display_label(const std::string& predicate);  // "buy" -> "BUY"

// Labels align with vectors; kOutlier forms map to their own lemma.
RelationMap build_relation_map(const std::vector<RelationVector>& vectors, const std::vector<int>& labels);

struct RelationClustering {
  std::vector<RelationVector> vectors;
  GridSearchResult grid;
  std::optional<std::size_t> chosen;  // empty when every config failed
  std::vector<int> labels;            // per vector, OOV forms always kOutlier
  RelationMap map;
};

// Full relation-refining step over the surface triples.
RelationClustering cluster_relations(const std::vector<SurfaceTriple>& triples, const WordVectorTable& table,
                                     const std::vector<ClusteringConfig>& grid, int jobs = 1, double band = 0.95);

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);
void write_relation_map_tsv(std::ostream& out, const RelationMap& map);

}  // namespace mbkg
