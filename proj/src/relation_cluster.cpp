#include "mbkg/relation_cluster.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "mbkg/text.hpp"

namespace mbkg {

std::vector<RelationVector> embed_relations(const std::vector<SurfaceTriple>& triples, const WordVectorTable& table) {
  struct Acc {
    std::size_t frequency = 0;
    std::map<std::string, std::size_t> lemmas;
  };
  std::map<std::string, Acc> forms;
  for (const auto& t : triples) {
    auto& acc = forms[to_lower(t.verb_surface)];
    ++acc.frequency;
    ++acc.lemmas[t.verb_lemma.empty() ? to_lower(t.verb_surface) : t.verb_lemma];
  }

  std::vector<RelationVector> out;
  for (const auto& [form, acc] : forms) {
    RelationVector rv;
    rv.form = form;
    rv.frequency = acc.frequency;
    // Most frequent lemma reading, smallest on ties (map order).
    std::size_t best = 0;
    for (const auto& [lemma, count] : acc.lemmas) {
      if (count > best) {
        best = count;
        rv.lemma = lemma;
      }
    }
    rv.vector.assign(table.dimension(), 0.0);
    std::size_t found = 0;
    for (const auto& token : split_ws(form)) {
      const auto* v = table.find(token);
      if (v == nullptr) continue;
      for (std::size_t d = 0; d < v->size(); ++d) rv.vector[d] += (*v)[d];
      ++found;
    }
    rv.in_vocabulary = found > 0;
    if (found > 0) {
      for (auto& x : rv.vector) x /= static_cast<double>(found);
    }
    out.push_back(std::move(rv));
  }
  return out;
}

Matrix standardize(const Matrix& x) {
  if (x.rows() < 2) throw std::invalid_argument("standardize needs at least two vectors");
  Matrix out = x;
  const auto n = static_cast<double>(x.rows());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double mean = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, j);
    mean /= n;
    double var = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) var += (x(i, j) - mean) * (x(i, j) - mean);
    const double sd = std::sqrt(var / n);
    for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = sd > 0 ? (x(i, j) - mean) / sd : x(i, j) - mean;
  }
  return out;
}

namespace {

void validate(const ClusteringConfig& c, std::size_t input_dim) {
  if (c.n_neighbors < 1) throw std::invalid_argument("n_neighbors must be positive");
  if (c.min_dist < 0) throw std::invalid_argument("min_dist must be non-negative");
  if (c.target_dim < 1) throw std::invalid_argument("target_dim must be positive");
  if (static_cast<std::size_t>(c.target_dim) >= input_dim) {
    throw std::invalid_argument("target_dim " + std::to_string(c.target_dim) + " must be below input dimension " +
                                std::to_string(input_dim));
  }
  if (c.min_cluster_size < 2) throw std::invalid_argument("min_cluster_size must be at least 2");
  if (c.min_samples < 1) throw std::invalid_argument("min_samples must be positive");
}

}  // namespace

Matrix reduce_dimensions(const Matrix& x, const ClusteringConfig& c, const KnnGraph* knn) {
  validate(c, x.cols());
  UmapParams p;
  p.n_neighbors = c.n_neighbors;
  p.min_dist = c.min_dist;
  p.target_dim = c.target_dim;
  p.seed = c.seed;
  return umap_embed(x, p, knn);
}

std::vector<int> cluster_density(const Matrix& reduced, const ClusteringConfig& c) {
  return hdbscan(reduced, {c.min_cluster_size, c.min_samples}).labels;
}

Silhouette silhouette_mean(const Matrix& x, const std::vector<int>& labels) {
  if (labels.size() != x.rows()) throw std::invalid_argument("labels do not align with points");
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kOutlier) members[labels[i]].push_back(i);
  }
  Silhouette s;
  if (members.size() < 2) return s;
  s.defined = true;
  double total = 0;
  std::size_t count = 0;
  for (const auto& [label, own] : members) {
    for (std::size_t i : own) {
      ++count;
      if (own.size() == 1) continue;
      double a = 0;
      for (std::size_t j : own) {
        if (j != i) a += row_distance(x, i, j);
      }
      a /= static_cast<double>(own.size() - 1);
      double b = std::numeric_limits<double>::infinity();
      for (const auto& [other_label, other] : members) {
        if (other_label == label) continue;
        double m = 0;
        for (std::size_t j : other) m += row_distance(x, i, j);
        b = std::min(b, m / static_cast<double>(other.size()));
      }
      const double denom = std::max(a, b);
      total += denom > 0 ? (b - a) / denom : 0.0;
    }
  }
  s.value = total / static_cast<double>(count);
  return s;
}

double score(const ClusteringResult& r) { return r.silhouette_mean * r.clustered_fraction; }

ClusteringResult evaluate_config(const Matrix& x, const ClusteringConfig& c, std::size_t total_forms,
                                 const KnnGraph* knn) {
  ClusteringResult r;
  try {
    const Matrix reduced = reduce_dimensions(x, c, knn);
    auto h = hdbscan(reduced, {c.min_cluster_size, c.min_samples});
    r.labels = std::move(h.labels);
    r.num_clusters = h.num_clusters;
    const auto sil = silhouette_mean(reduced, r.labels);
    r.silhouette_mean = sil.value;
    r.silhouette_defined = sil.defined;
    const auto clustered = static_cast<std::size_t>(
        std::count_if(r.labels.begin(), r.labels.end(), [](int l) { return l != kOutlier; }));
    const std::size_t denom = std::max(total_forms, x.rows());
    r.clustered_fraction = denom > 0 ? static_cast<double>(clustered) / static_cast<double>(denom) : 0.0;
    r.score = score(r);
  } catch (const std::exception& e) {
    r = ClusteringResult{};
    r.failed = true;
    r.error = e.what();
    r.score = -std::numeric_limits<double>::infinity();
  }
  return r;
}

GridSearchResult grid_search(const Matrix& x, const std::vector<ClusteringConfig>& grid, int jobs,
                             std::size_t total_forms) {
  if (grid.empty()) throw std::invalid_argument("grid is empty");
  GridSearchResult out;
  out.rows.resize(grid.size());

  // One shared neighbour graph at the widest feasible k; each config truncates it.
  int widest = 0;
  for (const auto& c : grid) widest = std::max(widest, c.n_neighbors);
  KnnGraph knn;
  const bool have_knn = x.rows() >= 2;
  if (have_knn) knn = exact_knn(x, std::min<std::size_t>(static_cast<std::size_t>(widest), x.rows() - 1));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
      out.rows[i].config = grid[i];
      out.rows[i].result = evaluate_config(x, grid[i], total_forms, have_knn ? &knn : nullptr);
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    const auto& cand = out.rows[i].result;
    const auto& best = out.rows[out.best].result;
    if (cand.score > best.score || (cand.score == best.score && cand.num_clusters < best.num_clusters)) out.best = i;
  }
  return out;
}

std::size_t select_config(const std::vector<GridRow>& rows, double band) {
  if (rows.empty()) throw std::invalid_argument("results table is empty");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) best = std::max(best, r.result.score);
  if (std::isinf(best) && best < 0) throw std::invalid_argument("every clustering configuration failed");
  // Band measured from the top, so a negative best still admits itself.
  const double floor = best - (1.0 - band) * std::abs(best);
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i].result;
    if (r.failed || r.score < floor) continue;
    if (!pick || r.num_clusters < rows[*pick].result.num_clusters) pick = i;
  }
  return *pick;
}

std::vector<ClusteringConfig> expand_grid(const GridSpec& s, std::uint64_t seed) {
  std::vector<ClusteringConfig> out;
  for (int nn : s.n_neighbors)
    for (double md : s.min_dist)
      for (int td : s.target_dim)
        for (int mcs : s.min_cluster_size)
          for (int ms : s.min_samples) out.push_back({nn, md, td, mcs, ms, seed});
  return out;
}

const std::string& RelationMap::at(const std::string& form) const {
  auto it = entries.find(form);
  if (it == entries.end()) throw InvariantError("relation form '" + form + "' has no predicate");
  return it->second;
}

std::string display_label(const std::string& predicate) { return to_upper(predicate); }

RelationMap build_relation_map(const std::vector<RelationVector>& vectors, const std::vector<int>& labels) {
  if (labels.size() != vectors.size()) throw std::invalid_argument("labels do not align with relation vectors");
  std::map<int, const RelationVector*> rep;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (labels[i] == kOutlier) continue;
    const auto& v = vectors[i];
    auto [it, fresh] = rep.emplace(labels[i], &v);
    if (fresh) continue;
    const auto* cur = it->second;
    if (v.frequency > cur->frequency || (v.frequency == cur->frequency && v.lemma < cur->lemma)) it->second = &v;
  }
  RelationMap m;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    m.entries[vectors[i].form] = labels[i] == kOutlier ? vectors[i].lemma : rep.at(labels[i])->lemma;
  }
  return m;
}

RelationClustering cluster_relations(const std::vector<SurfaceTriple>& triples, const WordVectorTable& table,
                                     const std::vector<ClusteringConfig>& grid, int jobs, double band) {
  RelationClustering rc;
  rc.vectors = embed_relations(triples, table);
  rc.labels.assign(rc.vectors.size(), kOutlier);

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < rc.vectors.size(); ++i) {
    if (rc.vectors[i].in_vocabulary) rows.push_back(i);
  }
  if (!grid.empty() && rows.size() >= 2) {
    Matrix x(rows.size(), table.dimension());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::copy(rc.vectors[rows[r]].vector.begin(), rc.vectors[rows[r]].vector.end(), x.row(r));
    }
    rc.grid = grid_search(standardize(x), grid, jobs, rc.vectors.size());
    try {
      rc.chosen = select_config(rc.grid.rows, band);
    } catch (const std::invalid_argument&) {
      rc.chosen.reset();
    }
    if (rc.chosen) {
      const auto& labels = rc.grid.rows[*rc.chosen].result.labels;
      for (std::size_t r = 0; r < rows.size(); ++r) rc.labels[rows[r]] = labels[r];
    }
  } else if (!grid.empty()) {
    // Too few vectors to cluster: every config fails.
    for (const auto& c : grid) {
      ClusteringResult r;
      r.failed = true;
      r.error = "fewer than two in-vocabulary relation forms";
      r.score = -std::numeric_limits<double>::infinity();
      rc.grid.rows.push_back({c, r});
    }
  }
  rc.map = build_relation_map(rc.vectors, rc.labels);
  return rc;
}

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  out << "n_neighbors,min_dist,target_dim,min_cluster_size,min_samples,seed,silhouette_mean,clustered_fraction,"
         "num_clusters,score,status\n";
  for (const auto& r : rows) {
    const auto& c = r.config;
    out << c.n_neighbors << ',' << fmt_double(c.min_dist) << ',' << c.target_dim << ',' << c.min_cluster_size << ','
        << c.min_samples << ',' << c.seed << ',' << fmt_double(r.result.silhouette_mean) << ','
        << fmt_double(r.result.clustered_fraction) << ',' << r.result.num_clusters << ','
        << fmt_double(r.result.score) << ',' << (r.result.failed ? "failed" : "ok") << '\n';
  }
}

void write_relation_map_tsv(std::ostream& out, const RelationMap& map) {
  out << "form\tpredicate\n";
  for (const auto& [form, predicate] : map.entries) out << form << '\t' << display_label(predicate) << '\n';
}

}  // namespace mbkg
