#include "mbkg/hdbscan.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mbkg {

namespace {

// Below this a merge distance counts as zero; keeps lambdas finite.
constexpr double kMinDistance = 1e-10;

struct MstEdge {
  int a, b;
  double w;
};

std::vector<double> core_distances(const Matrix& x, int min_samples) {
  const std::size_t n = x.rows();
  const auto k = static_cast<std::size_t>(std::clamp<int>(min_samples, 1, static_cast<int>(n)));
  std::vector<double> core(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = j == i ? 0.0 : row_distance(x, i, j);
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    core[i] = row[k - 1];
  }
  return core;
}

// Prim's algorithm on the dense mutual-reachability graph.
std::vector<MstEdge> mutual_reachability_mst(const Matrix& x, const std::vector<double>& core) {
  const int n = static_cast<int>(x.rows());
  std::vector<MstEdge> mst;
  if (n < 2) return mst;
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<int> from(static_cast<std::size_t>(n), -1);
  int cur = 0;
  in_tree[0] = 1;
  for (int step = 1; step < n; ++step) {
    int next = -1;
    for (int j = 0; j < n; ++j) {
      if (in_tree[static_cast<std::size_t>(j)]) continue;
      const double d = std::max({row_distance(x, static_cast<std::size_t>(cur), static_cast<std::size_t>(j)),
                                 core[static_cast<std::size_t>(cur)], core[static_cast<std::size_t>(j)]});
      if (d < best[static_cast<std::size_t>(j)]) {
        best[static_cast<std::size_t>(j)] = d;
        from[static_cast<std::size_t>(j)] = cur;
      }
      if (next < 0 || best[static_cast<std::size_t>(j)] < best[static_cast<std::size_t>(next)]) next = j;
    }
    mst.push_back({from[static_cast<std::size_t>(next)], next, best[static_cast<std::size_t>(next)]});
    in_tree[static_cast<std::size_t>(next)] = 1;
    cur = next;
  }
  return mst;
}

struct Merge {
  int left, right;
  double dist;
  int size;
};

// Single-linkage dendrogram; node n+i is created by merge i.
std::vector<Merge> single_linkage(std::vector<MstEdge> mst, int n) {
  std::stable_sort(mst.begin(), mst.end(), [](const MstEdge& p, const MstEdge& q) { return p.w < q.w; });
  std::vector<int> parent(static_cast<std::size_t>(2 * n - 1));
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> size(static_cast<std::size_t>(2 * n - 1), 1);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  std::vector<Merge> merges;
  int next = n;
  for (const auto& e : mst) {
    const int ra = find(e.a), rb = find(e.b);
    const int s = size[static_cast<std::size_t>(ra)] + size[static_cast<std::size_t>(rb)];
    merges.push_back({ra, rb, e.w, s});
    parent[static_cast<std::size_t>(ra)] = next;
    parent[static_cast<std::size_t>(rb)] = next;
    size[static_cast<std::size_t>(next)] = s;
    ++next;
  }
  return merges;
}

std::vector<CondensedEdge> condense(const std::vector<Merge>& merges, int n, int min_cluster_size) {
  const int root = 2 * n - 2;
  auto node_size = [&](int v) { return v < n ? 1 : merges[static_cast<std::size_t>(v - n)].size; };
  auto leaves_of = [&](int v) {
    std::vector<int> out;
    std::vector<int> stack{v};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (u < n) {
        out.push_back(u);
      } else {
        stack.push_back(merges[static_cast<std::size_t>(u - n)].right);
        stack.push_back(merges[static_cast<std::size_t>(u - n)].left);
      }
    }
    return out;
  };

  std::vector<CondensedEdge> tree;
  std::vector<int> relabel(static_cast<std::size_t>(2 * n - 1), -1);
  relabel[static_cast<std::size_t>(root)] = n;
  int next_label = n + 1;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop_front();
    if (node < n) continue;
    const auto& m = merges[static_cast<std::size_t>(node - n)];
    const double lambda = 1.0 / std::max(m.dist, kMinDistance);
    const int parent = relabel[static_cast<std::size_t>(node)];
    const int ls = node_size(m.left), rs = node_size(m.right);
    const bool left_big = ls >= min_cluster_size, right_big = rs >= min_cluster_size;
    auto fall_out = [&](int sub) {
      for (int p : leaves_of(sub)) tree.push_back({parent, p, lambda, 1});
    };
    if (left_big && right_big) {
      for (int child : {m.left, m.right}) {
        relabel[static_cast<std::size_t>(child)] = next_label++;
        tree.push_back({parent, relabel[static_cast<std::size_t>(child)], lambda, node_size(child)});
        queue.push_back(child);
      }
    } else if (!left_big && !right_big) {
      fall_out(m.left);
      fall_out(m.right);
    } else if (!left_big) {
      relabel[static_cast<std::size_t>(m.right)] = parent;
      fall_out(m.left);
      queue.push_back(m.right);
    } else {
      relabel[static_cast<std::size_t>(m.left)] = parent;
      fall_out(m.right);
      queue.push_back(m.left);
    }
  }
  return tree;
}

}  // namespace

HdbscanResult hdbscan(const Matrix& x, const HdbscanParams& params) {
  if (params.min_cluster_size < 2) throw std::invalid_argument("min_cluster_size must be at least 2");
  if (params.min_samples < 1) throw std::invalid_argument("min_samples must be positive");
  const int n = static_cast<int>(x.rows());
  HdbscanResult result;
  result.labels.assign(static_cast<std::size_t>(n), kOutlier);
  if (n < 2) return result;

  const auto core = core_distances(x, params.min_samples);
  const auto mst = mutual_reachability_mst(x, core);
  double max_edge = 0;
  for (const auto& e : mst) max_edge = std::max(max_edge, e.w);
  if (max_edge <= 0) {
    // No density contrast at all: the whole set is one cluster.
    std::fill(result.labels.begin(), result.labels.end(), 0);
    result.num_clusters = 1;
    return result;
  }

  const auto merges = single_linkage(mst, n);
  result.condensed_tree = condense(merges, n, params.min_cluster_size);
  const auto& tree = result.condensed_tree;

  int max_cluster = n;
  for (const auto& e : tree) max_cluster = std::max(max_cluster, e.parent);
  const auto n_clusters = static_cast<std::size_t>(max_cluster - n + 1);
  std::vector<double> birth(n_clusters, 0.0);
  std::vector<int> parent_of(n_clusters, -1);
  std::vector<std::vector<int>> kids(n_clusters);
  for (const auto& e : tree) {
    if (e.child >= n) {
      birth[static_cast<std::size_t>(e.child - n)] = e.lambda;
      parent_of[static_cast<std::size_t>(e.child - n)] = e.parent;
      kids[static_cast<std::size_t>(e.parent - n)].push_back(e.child);
    }
  }
  std::vector<double> stability(n_clusters, 0.0);
  for (const auto& e : tree) {
    const auto p = static_cast<std::size_t>(e.parent - n);
    stability[p] += (e.lambda - birth[p]) * e.size;
  }

  // Excess of mass, children before parents (children carry larger ids).
  std::vector<char> selected(n_clusters, 0);
  for (std::size_t c = n_clusters; c-- > 1;) {
    double child_sum = 0;
    for (int k : kids[c]) child_sum += stability[static_cast<std::size_t>(k - n)];
    if (!kids[c].empty() && child_sum > stability[c]) {
      stability[c] = child_sum;
    } else {
      selected[c] = 1;
      std::vector<int> stack(kids[c].begin(), kids[c].end());
      while (!stack.empty()) {
        const auto d = static_cast<std::size_t>(stack.back() - n);
        stack.pop_back();
        selected[d] = 0;
        stack.insert(stack.end(), kids[d].begin(), kids[d].end());
      }
    }
  }

  // Each point joins the selected cluster it fell out of, directly or via a descendant.
  std::map<int, int> label_of;
  for (std::size_t c = 1; c < n_clusters; ++c) {
    if (selected[c]) label_of.emplace(static_cast<int>(c) + n, 0);
  }
  int next = 0;
  for (auto& [_, label] : label_of) label = next++;
  result.num_clusters = next;
  for (const auto& e : tree) {
    if (e.child >= n) continue;
    for (int c = e.parent; c != -1 && c != n; c = parent_of[static_cast<std::size_t>(c - n)]) {
      auto it = label_of.find(c);
      if (it != label_of.end()) {
        result.labels[static_cast<std::size_t>(e.child)] = it->second;
        break;
      }
    }
  }
  return result;
}

}  // namespace mbkg
