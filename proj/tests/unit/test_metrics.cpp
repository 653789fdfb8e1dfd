#include <doctest.h>

#include <random>
#include <sstream>

#include "mbkg/metrics.hpp"
#include "mbkg/types.hpp"

using namespace mbkg;

namespace {

// Category-major restatement of the Fleiss formula.
double oracle_fleiss(const AnnotationMatrix& m) {
  const double N = static_cast<double>(m.size());
  double n = 0;
  for (int c : m[0]) n += c;
  const std::size_t k = m[0].size();
  double pe = 0;
  for (std::size_t j = 0; j < k; ++j) {
    double col = 0;
    for (const auto& row : m) col += row[j];
    pe += (col / (N * n)) * (col / (N * n));
  }
  double agree_pairs = 0;
  for (std::size_t j = 0; j < k; ++j)
    for (const auto& row : m) agree_pairs += static_cast<double>(row[j]) * (row[j] - 1);
  const double po = agree_pairs / (N * n * (n - 1));
  return (po - pe) / (1 - pe);
}

}  // namespace

TEST_CASE("fleiss kappa") {
  AnnotationMatrix wiki{{0, 0, 0, 0, 14}, {0, 2, 6, 4, 2}, {0, 0, 3, 5, 6}, {0, 3, 9, 2, 0}, {2, 2, 8, 1, 1},
                        {7, 7, 0, 0, 0},  {3, 2, 6, 3, 0}, {2, 5, 3, 2, 2}, {6, 5, 2, 1, 0}, {0, 2, 2, 3, 7}};
  CHECK(fleiss_kappa(wiki) == doctest::Approx(0.210).epsilon(0.005));
  CHECK(fleiss_kappa(wiki) == doctest::Approx(oracle_fleiss(wiki)));

  CHECK(fleiss_kappa({{3, 0}, {0, 3}, {3, 0}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fleiss_kappa({{3, 0}, {3, 0}}), UndefinedStatistic);
  CHECK_THROWS(fleiss_kappa({{3, 0}, {2, 0}}));

  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> cat(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    AnnotationMatrix m(10, std::vector<int>(2, 0));
    for (auto& row : m)
      for (int r = 0; r < 3; ++r) ++row[static_cast<std::size_t>(cat(rng))];
    bool degenerate = true;
    for (const auto& row : m) degenerate &= row[0] == m[0][0];
    if (degenerate) continue;
    CHECK(fleiss_kappa(m) == doctest::Approx(oracle_fleiss(m)).epsilon(1e-12));
  }
}

TEST_CASE("cohen kappa") {
  CHECK(cohen_kappa({"y", "y", "n", "n"}, {"y", "n", "y", "n"}) == doctest::Approx(0.0));
  CHECK(cohen_kappa({"a", "b", "a"}, {"a", "b", "a"}) == doctest::Approx(1.0));
  // po = 0.7, pe = 0.5*0.6 + 0.5*0.4 = 0.5
  std::vector<std::string> a{"y", "y", "y", "y", "y", "n", "n", "n", "n", "n"};
  std::vector<std::string> b{"y", "y", "y", "y", "n", "n", "n", "n", "y", "y"};
  CHECK(cohen_kappa(a, b) == doctest::Approx(0.4));
  CHECK_THROWS_AS(cohen_kappa({"y", "y"}, {"y", "y"}), UndefinedStatistic);
  CHECK_THROWS(cohen_kappa({"y"}, {"y", "n"}));
}

TEST_CASE("majority precision") {
  CHECK(majority_precision({{true, true, false}, {false, false, true}, {true, true, true}, {false, true, false}}) ==
        doctest::Approx(0.5));
}

TEST_CASE("rating csv") {
  std::istringstream in("item,r1,r2,r3\n1,yes,yes,no\n2,no,no,no\n3,yes,yes,yes\n");
  auto t = read_rating_csv(in);
  CHECK(t.raters == std::vector<std::string>{"r1", "r2", "r3"});
  REQUIRE(t.labels.size() == 3);
  auto s = summarize_agreement(t);
  CHECK(s.items == 3);
  CHECK(s.raters == 3);
  REQUIRE(s.fleiss);
  CHECK(s.pairwise_cohen.size() == 3);
  REQUIRE(s.majority_precision);
  CHECK(*s.majority_precision == doctest::Approx(2.0 / 3.0));

  std::istringstream ragged("r1,r2\na,b\nc\n");
  CHECK_THROWS_AS(read_rating_csv(ragged), InputError);
}
