#include "mbkg/umap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace mbkg {

KnnGraph KnnGraph::truncated(std::size_t k_prime) const {
  if (k_prime > k) throw std::invalid_argument("cannot widen a kNN graph");
  KnnGraph out;
  out.k = k_prime;
  out.indices.reserve(indices.size());
  out.distances.reserve(distances.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.indices.emplace_back(indices[i].begin(), indices[i].begin() + static_cast<std::ptrdiff_t>(k_prime));
    out.distances.emplace_back(distances[i].begin(), distances[i].begin() + static_cast<std::ptrdiff_t>(k_prime));
  }
  return out;
}

KnnGraph exact_knn(const Matrix& points, std::size_t k) {
  const std::size_t n = points.rows();
  if (k >= n) throw std::invalid_argument("need more than " + std::to_string(k) + " points for " +
                                          std::to_string(k) + " neighbours, got " + std::to_string(n));
  KnnGraph g;
  g.k = k;
  g.indices.resize(n);
  g.distances.resize(n);
  std::vector<std::pair<double, std::size_t>> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.emplace_back(row_distance(points, i, j), j);
    }
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    for (std::size_t r = 0; r < k; ++r) {
      g.distances[i].push_back(row[r].first);
      g.indices[i].push_back(row[r].second);
    }
  }
  return g;
}

std::pair<double, double> fit_ab(double spread, double min_dist) {
  constexpr int kSamples = 300;
  std::vector<double> xs(kSamples), ys(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    xs[i] = spread * 3.0 * i / (kSamples - 1);
    ys[i] = xs[i] < min_dist ? 1.0 : std::exp(-(xs[i] - min_dist) / spread);
  }
  auto residual_sq = [&](double a, double b) {
    double s = 0;
    for (int i = 0; i < kSamples; ++i) {
      const double f = 1.0 / (1.0 + a * std::pow(xs[i], 2 * b));
      s += (f - ys[i]) * (f - ys[i]);
    }
    return s;
  };

  // Levenberg-Marquardt on two parameters.
  double a = 1.0, b = 1.0, lambda = 1e-3;
  double err = residual_sq(a, b);
  for (int iter = 0; iter < 500; ++iter) {
    double jaa = 0, jab = 0, jbb = 0, ga = 0, gb = 0;
    for (int i = 0; i < kSamples; ++i) {
      const double x = xs[i];
      const double u = x > 0 ? std::pow(x, 2 * b) : 0.0;
      const double den = 1.0 + a * u;
      const double f = 1.0 / den;
      const double r = f - ys[i];
      const double da = -u / (den * den);
      const double db = x > 0 ? -a * u * 2.0 * std::log(x) / (den * den) : 0.0;
      jaa += da * da;
      jab += da * db;
      jbb += db * db;
      ga += da * r;
      gb += db * r;
    }
    bool improved = false;
    while (lambda < 1e12) {
      const double m11 = jaa * (1 + lambda), m22 = jbb * (1 + lambda), m12 = jab;
      const double det = m11 * m22 - m12 * m12;
      if (det == 0) break;
      const double step_a = -(m22 * ga - m12 * gb) / det;
      const double step_b = -(m11 * gb - m12 * ga) / det;
      const double na = a + step_a, nb = b + step_b;
      const double nerr = na > 0 && nb > 0 ? residual_sq(na, nb) : std::numeric_limits<double>::infinity();
      if (nerr < err) {
        const bool converged = err - nerr < 1e-14 * std::max(1.0, err);
        a = na;
        b = nb;
        err = nerr;
        lambda = std::max(lambda / 10, 1e-12);
        improved = !converged;
        break;
      }
      lambda *= 10;
    }
    if (!improved) break;
  }
  return {a, b};
}

namespace {

struct Smoothing {
  std::vector<double> sigma;
  std::vector<double> rho;
};

Smoothing smooth_knn_dist(const KnnGraph& knn) {
  constexpr double kTolerance = 1e-5;
  constexpr double kMinScale = 1e-3;
  const std::size_t n = knn.indices.size();
  const double target = std::log2(static_cast<double>(knn.k));
  double mean_all = 0;
  for (const auto& row : knn.distances) mean_all += std::accumulate(row.begin(), row.end(), 0.0);
  mean_all /= static_cast<double>(n * knn.k);

  Smoothing s;
  s.sigma.assign(n, 1.0);
  s.rho.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = knn.distances[i];
    for (double v : d) {
      if (v > 0) {
        s.rho[i] = v;
        break;
      }
    }
    double lo = 0, hi = std::numeric_limits<double>::infinity(), mid = 1.0;
    for (int it = 0; it < 64; ++it) {
      double psum = 0;
      for (double v : d) {
        const double gap = v - s.rho[i];
        psum += gap > 0 ? std::exp(-gap / mid) : 1.0;
      }
      if (std::abs(psum - target) < kTolerance) break;
      if (psum > target) {
        hi = mid;
        mid = (lo + hi) / 2;
      } else {
        lo = mid;
        mid = std::isinf(hi) ? mid * 2 : (lo + hi) / 2;
      }
    }
    const double mean_i = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    const double floor = kMinScale * (s.rho[i] > 0 ? mean_i : mean_all);
    s.sigma[i] = std::max(mid, floor);
    if (s.sigma[i] <= 0) s.sigma[i] = 1.0;  // every distance is zero
  }
  return s;
}

double clip(double v) { return std::clamp(v, -4.0, 4.0); }

// Uniform bits straight from the engine so results do not depend on the standard library's distributions.
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
};

}  // namespace

std::vector<FuzzyEdge> fuzzy_simplicial_set(const KnnGraph& knn) {
  const auto sm = smooth_knn_dist(knn);
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> memb;  // (lo,hi) -> (w lo->hi, w hi->lo)
  for (std::size_t i = 0; i < knn.indices.size(); ++i) {
    for (std::size_t r = 0; r < knn.k; ++r) {
      const std::size_t j = knn.indices[i][r];
      const double gap = knn.distances[i][r] - sm.rho[i];
      const double w = gap > 0 ? std::exp(-gap / sm.sigma[i]) : 1.0;
      auto& slot = memb[{std::min(i, j), std::max(i, j)}];
      (i < j ? slot.first : slot.second) = w;
    }
  }
  std::vector<FuzzyEdge> edges;
  edges.reserve(memb.size());
  for (const auto& [key, w] : memb) {
    const double combined = w.first + w.second - w.first * w.second;
    if (combined > 0) edges.push_back({key.first, key.second, combined});
  }
  return edges;
}

Matrix umap_embed(const Matrix& points, const UmapParams& p, const KnnGraph* knn_in) {
  const std::size_t n = points.rows();
  if (p.n_neighbors < 1) throw std::invalid_argument("n_neighbors must be positive");
  if (p.target_dim < 1) throw std::invalid_argument("target_dim must be positive");
  if (static_cast<std::size_t>(p.target_dim) >= points.cols()) {
    throw std::invalid_argument("target_dim must be below the input dimension");
  }
  if (p.min_dist < 0) throw std::invalid_argument("min_dist must be non-negative");
  const auto k = static_cast<std::size_t>(p.n_neighbors);
  if (n < k + 1) {
    throw std::invalid_argument("UMAP with n_neighbors=" + std::to_string(k) + " needs at least " +
                                std::to_string(k + 1) + " points, got " + std::to_string(n));
  }

  KnnGraph local;
  const KnnGraph* knn = knn_in;
  if (knn == nullptr || knn->k < k || knn->indices.size() != n) {
    local = exact_knn(points, k);
    knn = &local;
  } else if (knn->k > k) {
    local = knn->truncated(k);
    knn = &local;
  }

  const auto [a, b] = fit_ab(p.spread, p.min_dist);
  const int n_epochs = p.n_epochs > 0 ? p.n_epochs : (n <= 10000 ? 500 : 200);
  auto undirected = fuzzy_simplicial_set(*knn);

  double max_w = 0;
  for (const auto& e : undirected) max_w = std::max(max_w, e.weight);
  struct Directed {
    std::size_t head, tail;
    double eps, next, eps_neg, next_neg;
  };
  std::vector<Directed> edges;
  for (const auto& e : undirected) {
    if (e.weight < max_w / n_epochs) continue;
    const double eps = max_w / e.weight;
    const double eps_neg = eps / p.negative_sample_rate;
    edges.push_back({e.i, e.j, eps, eps, eps_neg, eps_neg});
    edges.push_back({e.j, e.i, eps, eps, eps_neg, eps_neg});
  }

  Rng rng(p.seed);
  const auto dim = static_cast<std::size_t>(p.target_dim);
  Matrix y(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) y(i, d) = rng.uniform() * 20.0 - 10.0;
  }

  for (int epoch = 0; epoch < n_epochs; ++epoch) {
    const double alpha = 1.0 - static_cast<double>(epoch) / n_epochs;
    for (auto& e : edges) {
      if (e.next > epoch) continue;
      double* cur = y.row(e.head);
      double* oth = y.row(e.tail);
      double d2 = squared_distance(cur, oth, dim);
      const double gc = d2 > 0 ? -2.0 * a * b * std::pow(d2, b - 1.0) / (a * std::pow(d2, b) + 1.0) : 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double g = clip(gc * (cur[d] - oth[d]));
        cur[d] += g * alpha;
        oth[d] -= g * alpha;
      }
      e.next += e.eps;

      const int n_neg = static_cast<int>((epoch - e.next_neg) / e.eps_neg);
      for (int s = 0; s < n_neg; ++s) {
        const std::size_t other = rng.below(n);
        if (other == e.head) continue;
        const double* neg = y.row(other);
        d2 = squared_distance(cur, neg, dim);
        const double rc = d2 > 0 ? 2.0 * b / ((0.001 + d2) * (a * std::pow(d2, b) + 1.0)) : 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          const double g = rc > 0 ? clip(rc * (cur[d] - neg[d])) : 4.0;
          cur[d] += g * alpha;
        }
      }
      e.next_neg += n_neg * e.eps_neg;
    }
  }
  return y;
}

}  // namespace mbkg
