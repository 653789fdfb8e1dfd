#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mbkg/types.hpp"

namespace mbkg {

using SentencesByPost = std::map<std::string, std::vector<ParsedSentence>>;
using ChainsByPost = std::map<std::string, std::vector<CorefChain>>;

// JSON-lines posts: {"id": str, "text": str, "created_at"?: str, "lang"?: str}.
std::vector<RawPost> load_posts(const std::filesystem::path& path);
std::vector<RawPost> read_posts(std::istream& in);
void write_posts(std::ostream& out, const std::vector<RawPost>& posts);

// CoNLL-U with `# post_id = ...` (and optionally `# sent_index = ...`) per block.
// MISC carries StartChar, EndChar, TokenType and optionally EntType.
SentencesByPost load_conllu(const std::filesystem::path& path);
SentencesByPost read_conllu(std::istream& in);
void write_conllu(std::ostream& out, const SentencesByPost& parses);

// Throws InvariantError unless the head links form a single-rooted tree.
void validate_tree(const ParsedSentence& sentence);

// Coref sidecar: {"post_id": str, "chains": [[[s,t],...],...]}; first mention is the antecedent.
ChainsByPost load_coref(const std::filesystem::path& path);
ChainsByPost read_coref(std::istream& in);

// Unit-cost edit distance over UTF-8 code points.
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// 1 - dist/max(|a|,|b|) over code points; 1 when both are empty.
double levenshtein_similarity(std::string_view a, std::string_view b);

// Drops every post whose normalized text reaches `threshold` similarity with an
// earlier retained post. Posts missing from `normalized_texts` compare by raw text.
std::vector<RawPost> dedup_corpus(const std::vector<RawPost>& posts,
                                  const std::unordered_map<std::string, std::string>& normalized_texts,
                                  double threshold = 0.85);

class WordVectorTable {
 public:
  WordVectorTable() = default;
  explicit WordVectorTable(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(std::string_view token) const;
  // nullptr when the token is out of vocabulary.
  const std::vector<double>* find(std::string_view token) const;
  void insert(std::string token, std::vector<double> vec);  // throws InputError on arity mismatch

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

// One `token v1 ... vD` per line; D is fixed by the first line.
WordVectorTable load_word_vectors(const std::filesystem::path& path);
WordVectorTable read_word_vectors(std::istream& in);

}  // namespace mbkg
