#include "mbkg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "mbkg/text.hpp"
#include "mbkg/types.hpp"

namespace mbkg {

double fleiss_kappa(const AnnotationMatrix& counts) {
  if (counts.empty()) throw InputError("annotation matrix has no items");
  const std::size_t k = counts.front().size();
  if (k < 2) throw InputError("annotation matrix needs at least two categories");
  long long n = -1;
  for (const auto& row : counts) {
    if (row.size() != k) throw InputError("annotation matrix rows differ in length");
    long long sum = 0;
    for (int c : row) {
      if (c < 0) throw InputError("negative count in annotation matrix");
      sum += c;
    }
    if (n < 0) n = sum;
    if (sum != n) throw InputError("annotation matrix rows have different rater counts");
  }
  if (n < 2) throw InputError("need at least two raters per item");

  const auto items = static_cast<double>(counts.size());
  const auto nd = static_cast<double>(n);
  std::vector<double> column(k, 0.0);
  double p_o = 0;
  for (const auto& row : counts) {
    double agree = 0;
    for (std::size_t j = 0; j < k; ++j) {
      agree += static_cast<double>(row[j]) * (row[j] - 1);
      column[j] += row[j];
    }
    p_o += agree / (nd * (nd - 1));
  }
  p_o /= items;
  double p_e = 0;
  for (double c : column) {
    const double p = c / (items * nd);
    p_e += p * p;
  }
  if (std::abs(1.0 - p_e) < 1e-15) throw UndefinedStatistic("Fleiss kappa undefined: all ratings in one category");
  return (p_o - p_e) / (1.0 - p_e);
}

double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || a.size() != b.size()) throw InputError("Cohen kappa needs two equal-length, non-empty labelings");
  const auto n = static_cast<double>(a.size());
  std::map<std::string, double> ma, mb;
  double agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma[a[i]] += 1;
    mb[b[i]] += 1;
    if (a[i] == b[i]) agree += 1;
  }
  const double p_o = agree / n;
  double p_e = 0;
  for (const auto& [label, ca] : ma) {
    auto it = mb.find(label);
    if (it != mb.end()) p_e += (ca / n) * (it->second / n);
  }
  if (std::abs(1.0 - p_e) < 1e-15) throw UndefinedStatistic("Cohen kappa undefined: chance agreement is 1");
  return (p_o - p_e) / (1.0 - p_e);
}

double majority_precision(const std::vector<std::array<bool, 3>>& votes) {
  if (votes.empty()) throw InputError("no votes");
  std::size_t accepted = 0;
  for (const auto& v : votes) accepted += (v[0] + v[1] + v[2]) >= 2;
  return static_cast<double>(accepted) / static_cast<double>(votes.size());
}

namespace {

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  char c;
  auto end_field = [&] {
    row.push_back(std::string(quoted ? std::string_view(field) : trim(field)));
    field.clear();
    quoted = false;
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  while (in.get(c)) {
    if (quoted && field_started) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          field_started = false;  // closing quote; `quoted` stays set until the separator
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && trim(field).empty() && !quoted) {
      field.clear();
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted && field_started) throw InputError("unterminated quoted CSV field");
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

std::optional<bool> as_bool(std::string_view s) {
  const auto l = to_lower(s);
  if (l == "true" || l == "t" || l == "1" || l == "yes" || l == "y" || l == "correct") return true;
  if (l == "false" || l == "f" || l == "0" || l == "no" || l == "n" || l == "incorrect") return false;
  return std::nullopt;
}

}  // namespace

RatingTable read_rating_csv(std::istream& in) {
  auto rows = read_csv(in);
  if (rows.empty()) throw InputError("rating CSV is empty");
  RatingTable t;
  const auto& header = rows.front();
  const std::size_t first = !header.empty() && (to_lower(header[0]) == "item" || to_lower(header[0]) == "id") ? 1 : 0;
  t.raters.assign(header.begin() + static_cast<std::ptrdiff_t>(first), header.end());
  if (t.raters.size() < 2) throw InputError("rating CSV needs at least two rater columns");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw InputError("rating CSV line " + std::to_string(r + 1) + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(rows[r].size()));
    }
    t.labels.emplace_back(rows[r].begin() + static_cast<std::ptrdiff_t>(first), rows[r].end());
  }
  return t;
}

AgreementSummary summarize_agreement(const RatingTable& t) {
  AgreementSummary s;
  s.items = t.labels.size();
  s.raters = t.raters.size();
  std::set<std::string> cats;
  for (const auto& row : t.labels) cats.insert(row.begin(), row.end());
  s.categories.assign(cats.begin(), cats.end());
  if (s.items == 0) return s;

  if (s.categories.size() >= 2) {
    AnnotationMatrix m;
    for (const auto& row : t.labels) {
      std::vector<int> counts(s.categories.size(), 0);
      for (const auto& l : row) {
        ++counts[static_cast<std::size_t>(std::lower_bound(s.categories.begin(), s.categories.end(), l) -
                                          s.categories.begin())];
      }
      m.push_back(std::move(counts));
    }
    try {
      s.fleiss = fleiss_kappa(m);
    } catch (const UndefinedStatistic&) {
    }
  }

  double sum = 0;
  std::size_t defined = 0;
  for (std::size_t a = 0; a < s.raters; ++a) {
    for (std::size_t b = a + 1; b < s.raters; ++b) {
      std::vector<std::string> la, lb;
      for (const auto& row : t.labels) {
        la.push_back(row[a]);
        lb.push_back(row[b]);
      }
      std::optional<double> k;
      try {
        k = cohen_kappa(la, lb);
        sum += *k;
        ++defined;
      } catch (const UndefinedStatistic&) {
      }
      s.pairwise_cohen.push_back({{t.raters[a], t.raters[b]}, k});
    }
  }
  if (defined > 0) s.mean_pairwise_cohen = sum / static_cast<double>(defined);

  if (s.raters == 3) {
    std::vector<std::array<bool, 3>> votes;
    bool boolean = true;
    for (const auto& row : t.labels) {
      std::array<bool, 3> v{};
      for (std::size_t r = 0; r < 3 && boolean; ++r) {
        auto b = as_bool(row[r]);
        if (!b) boolean = false;
        v[r] = b.value_or(false);
      }
      votes.push_back(v);
    }
    if (boolean) s.majority_precision = majority_precision(votes);
  }
  return s;
}

void to_json(nlohmann::json& j, const AgreementSummary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  auto pairs = nlohmann::json::array();
  for (const auto& [names, k] : s.pairwise_cohen) {
    pairs.push_back({{"raters", {names.first, names.second}}, {"cohen_kappa", opt(k)}});
  }
  j = {{"items", s.items},
       {"raters", s.raters},
       {"categories", s.categories},
       {"fleiss_kappa", opt(s.fleiss)},
       {"pairwise_cohen_kappa", pairs},
       {"mean_pairwise_cohen_kappa", opt(s.mean_pairwise_cohen)},
       {"majority_precision", opt(s.majority_precision)}};
}

}  // namespace mbkg
