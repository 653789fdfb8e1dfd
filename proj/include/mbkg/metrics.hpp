#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mbkg {

// Chance agreement is 1, so kappa is 0/0.
class UndefinedStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// counts[i][j]: raters who put item i in category j. Rows must share one sum n >= 2.
using AnnotationMatrix = std::vector<std::vector<int>>;

double fleiss_kappa(const AnnotationMatrix& counts);
double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);
double majority_precision(const std::vector<std::array<bool, 3>>& votes);

// One row per item, one column per rater; an optional leading `item`/`id` column is skipped.
struct RatingTable {
  std::vector<std::string> raters;
  std::vector<std::vector<std::string>> labels;  // [item][rater]
};

RatingTable read_rating_csv(std::istream& in);

struct AgreementSummary {
  std::size_t items = 0;
  std::size_t raters = 0;
  std::vector<std::string> categories;
  std::optional<double> fleiss;
  std::vector<std::pair<std::pair<std::string, std::string>, std::optional<double>>> pairwise_cohen;
  std::optional<double> mean_pairwise_cohen;
  std::optional<double> majority_precision;  // three raters with boolean labels only
};

AgreementSummary summarize_agreement(const RatingTable& table);

void to_json(nlohmann::json& j, const AgreementSummary& s);

}  // namespace mbkg
