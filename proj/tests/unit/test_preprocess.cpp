#include <doctest.h>

#include "mbkg/preprocess.hpp"
#include "support.hpp"

using namespace mbkg;
using testing::make_sentence;
using testing::Tok;

namespace {

constexpr auto H = TokenKind::hashtag;
constexpr auto M = TokenKind::mention;

std::vector<std::string> surfaces(const ParsedSentence& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) out.push_back(t.surface);
  return out;
}

using V = std::vector<std::string>;

}  // namespace

TEST_CASE("strip_nonsyntactic") {
  auto s = make_sentence({{"RT", "RT", "X", 3, "dep", TokenKind::reserved},
                          {"@u", "@u", "PROPN", 3, "nsubj", M},
                          {"wins", "win", "VERB", 0, "root"}});
  CHECK(surfaces(strip_nonsyntactic(s)) == V{"@u", "wins"});

  auto e = make_sentence({{"great", "great", "ADJ", 0, "root"}, {":)", ":)", "SYM", 1, "dep", TokenKind::emoticon}});
  CHECK(surfaces(strip_nonsyntactic(e)) == V{"great"});

  auto plain = make_sentence({{"Data", "data", "NOUN", 2, "nsubj"}, {"matters", "matter", "VERB", 0, "root"}});
  CHECK(surfaces(strip_nonsyntactic(plain)) == surfaces(plain));
  // original indices survive
  CHECK(strip_nonsyntactic(s).tokens[0].index == 2);
}

TEST_CASE("looks_like_emoticon fallback") {
  CHECK(looks_like_emoticon(":)"));
  CHECK(looks_like_emoticon(":-("));
  CHECK_FALSE(looks_like_emoticon("AI"));
  CHECK_FALSE(looks_like_emoticon(":"));
}

TEST_CASE("drop_leading_mentions") {
  auto run = make_sentence({{"@bansijpatel", "", "PROPN", 4, "npadvmod", M},
                            {"@RTatsat", "", "PROPN", 4, "npadvmod", M},
                            {"@kiranpatel1977", "", "PROPN", 4, "npadvmod", M},
                            {"Thanks", "thank", "NOUN", 0, "root"},
                            {"for", "for", "ADP", 4, "prep"},
                            {"updating", "update", "VERB", 5, "pcomp"}});
  CHECK(surfaces(drop_leading_mentions(run)) == V{"Thanks", "for", "updating"});

  auto verb = make_sentence({{"@AMDRyzen", "", "PROPN", 2, "nsubj", M},
                             {"enabling", "enable", "VERB", 0, "root"},
                             {"#DataAnalytics", "", "PROPN", 2, "dobj", H}});
  CHECK(surfaces(drop_leading_mentions(verb)) == surfaces(verb));

  auto aux = make_sentence({{"@IBM", "", "PROPN", 2, "nsubj", M},
                            {"is", "be", "AUX", 0, "root"},
                            {"ready", "ready", "ADJ", 2, "acomp"}});
  CHECK(surfaces(drop_leading_mentions(aux)) == surfaces(aux));

  auto single = make_sentence({{"@IBM", "", "PROPN", 2, "npadvmod", M},
                               {"cloud", "cloud", "NOUN", 3, "compound"},
                               {"news", "news", "NOUN", 0, "root"}});
  CHECK(surfaces(drop_leading_mentions(single)) == V{"cloud", "news"});

  auto noun = make_sentence({{"Cloud", "cloud", "NOUN", 2, "nsubj"}, {"wins", "win", "VERB", 0, "root"}});
  CHECK(surfaces(drop_leading_mentions(noun)) == surfaces(noun));

  SUBCASE("retweet marker counts towards the run") {
    auto rt = make_sentence({{"RT", "RT", "X", 3, "dep", TokenKind::reserved},
                             {"@IBM", "", "PROPN", 3, "nsubj", M},
                             {"launches", "launch", "VERB", 0, "root"}});
    CHECK(surfaces(drop_leading_mentions(rt)) == V{"launches"});
  }
}

TEST_CASE("truncate_tag_sequences") {
  auto pay = make_sentence({{"pay", "pay", "NOUN", 0, "root"},
                            {"and", "and", "CCONJ", 1, "cc"},
                            {"#benefits", "", "NOUN", 1, "conj", H},
                            {"#Sapper", "", "PROPN", 3, "appos", H},
                            {"#AI", "", "PROPN", 3, "appos", H},
                            {"#hr", "", "PROPN", 3, "appos", H}});
  CHECK(surfaces(truncate_tag_sequences(pay)) == V{"pay", "and", "#benefits"});

  auto big = make_sentence({{"Big", "big", "ADJ", 2, "amod"},
                            {"news", "news", "NOUN", 0, "root"},
                            {"!", "!", "PUNCT", 2, "punct"},
                            {"#ai", "", "NOUN", 2, "dep", H},
                            {"#ml", "", "NOUN", 4, "dep", H}});
  CHECK(surfaces(truncate_tag_sequences(big)) == V{"Big", "news", "!"});

  auto one = make_sentence({{"Use", "use", "VERB", 0, "root"},
                            {"#ai", "", "NOUN", 1, "dobj", H},
                            {"now", "now", "ADV", 1, "advmod"}});
  CHECK(surfaces(truncate_tag_sequences(one)) == surfaces(one));

  SUBCASE("urls and mentions join a run") {
    auto mixed = make_sentence({{"See", "see", "VERB", 0, "root"},
                                {"@IBM", "", "PROPN", 1, "dobj", M},
                                {"#cloud", "", "NOUN", 2, "dep", H}});
    CHECK(surfaces(truncate_tag_sequences(mixed)) == V{"See", "@IBM"});
  }
}

TEST_CASE("drop_title_prefix") {
  auto tech = make_sentence({{"Tech", "tech", "PROPN", 2, "compound"},
                             {"Update", "update", "PROPN", 0, "root"},
                             {":", ":", "PUNCT", 2, "punct"},
                             {"Apple", "Apple", "PROPN", 5, "compound"},
                             {"Watch", "Watch", "PROPN", 2, "appos"}});
  CHECK(surfaces(drop_title_prefix(tech)) == V{"Apple", "Watch"});

  auto said = make_sentence({{"He", "he", "PRON", 2, "nsubj"},
                             {"said", "say", "VERB", 0, "root"},
                             {":", ":", "PUNCT", 2, "punct"},
                             {"go", "go", "VERB", 2, "ccomp"}});
  CHECK(surfaces(drop_title_prefix(said)) == surfaces(said));

  std::vector<Tok> long_prefix;
  for (int i = 1; i <= 8; ++i) long_prefix.push_back({"w" + std::to_string(i), "", "NOUN", i == 8 ? 0 : 8, i == 8 ? "root" : "compound"});
  long_prefix.push_back({":", ":", "PUNCT", 8, "punct"});
  long_prefix.push_back({"x", "x", "NOUN", 8, "appos"});
  auto lp = make_sentence(long_prefix);
  CHECK(surfaces(drop_title_prefix(lp)) == surfaces(lp));
  // six tokens plus the colon is the limit
  std::vector<Tok> six(long_prefix.begin() + 2, long_prefix.end());
  for (auto& t : six) t.head = t.head ? t.head - 2 : 0;
  auto sp = make_sentence(six);
  CHECK(surfaces(drop_title_prefix(sp)) == V{"x"});
  CHECK(surfaces(drop_title_prefix(sp, 5)) == surfaces(sp));
}

TEST_CASE("normalize_post") {
  std::string text;
  auto s = make_sentence({{"Great", "great", "ADJ", 2, "amod"},
                          {"results", "result", "NOUN", 3, "nsubj"},
                          {"arrive", "arrive", "VERB", 0, "root"},
                          {"https://t.co/x", "", "X", 3, "dep", TokenKind::url},
                          {"#ai", "", "NOUN", 3, "dep", H},
                          {"#ml", "", "NOUN", 5, "dep", H}},
                         &text);
  RawPost post{"p", text, {}, {}};
  auto n = normalize_post(post, {s});
  CHECK(n.normalized_text == "Great results arrive #ai");
  REQUIRE(n.removed_spans.size() == 2);
  CHECK(n.removed_spans[0].reason == RemovalReason::url);
  CHECK(text.substr(n.removed_spans[1].start_char, n.removed_spans[1].end_char - n.removed_spans[1].start_char) == "#ml");
  CHECK(n.removed_spans[1].reason == RemovalReason::tag_sequence);

  SUBCASE("spacing follows the original adjacency") {
    std::string t2;
    auto c = make_sentence({{"Cloud", "cloud", "NOUN", 2, "nsubj"},
                            {"wins", "win", "VERB", 0, "root"},
                            {".", ".", "PUNCT", 2, "punct"}},
                           &t2);
    CHECK(normalize_post({"q", t2, {}, {}}, {c}).normalized_text == "Cloud wins.");
  }

  SUBCASE("mention-only post empties out") {
    std::string t3;
    auto m = make_sentence({{"@a", "", "PROPN", 0, "root", M}, {"@b", "", "PROPN", 1, "appos", M}}, &t3);
    auto out = normalize_post({"m", t3, {}, {}}, {m});
    CHECK(out.normalized_text.empty());
    CHECK(out.removed_spans.size() == 1);
    CHECK(out.removed_spans[0].reason == RemovalReason::leading_mentions);
  }

  SUBCASE("offset mismatch is an input error") {
    RawPost wrong{"p", "something else entirely, quite long indeed", {}, {}};
    CHECK_THROWS_AS(normalize_post(wrong, {s}), InputError);
  }

  SUBCASE("idempotent on its own output") {
    // Re-lay the surviving tokens over the normalized text, kinds preserved.
    std::vector<Tok> kept;
    std::string t4;
    auto first = make_sentence({{"Great", "great", "ADJ", 2, "amod"},
                                {"results", "result", "NOUN", 3, "nsubj"},
                                {"arrive", "arrive", "VERB", 0, "root"},
                                {"#ai", "", "NOUN", 3, "dep", H}},
                               &t4);
    REQUIRE(t4 == n.normalized_text);
    auto again = normalize_post({"p", t4, {}, {}}, {first});
    CHECK(again.normalized_text == t4);
    CHECK(again.removed_spans.empty());
  }
}

TEST_CASE("removal histogram lists every reason") {
  NormalizedPost a{"a", "x", {{0, 1, RemovalReason::url}, {2, 3, RemovalReason::url}}};
  auto h = removal_histogram({a});
  CHECK(h.size() == 6);
  CHECK(h.at("url") == 2);
  CHECK(h.at("emoticon") == 0);
}
