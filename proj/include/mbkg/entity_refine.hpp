#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbkg/entity_extract.hpp"

namespace mbkg {

const std::set<std::string, std::less<>>& default_stopwords();

// American -> British spelling, identity for unlisted words.
std::string british_spelling(std::string_view word);

// Strips edge punctuation and stopword tokens; nullopt when nothing is left.
std::optional<std::string> clean_entity(std::string_view surface,
                                        const std::set<std::string, std::less<>>& stopwords = default_stopwords());

// "#SmartCities" -> "smart cities", "@Gartner_inc" -> "gartner inc".
std::string normalize_tag(std::string_view surface);

// Lemmatize+lowercase tokens that are neither VERB nor PROPN, lowercase the rest,
// then map American spellings to British ones.
std::string normalize_nominal(const CandidateEntity& entity);

// A normalized phrase with the byte range of its head word.
struct NormalizedForm {
  std::string text;
  std::size_t head_begin = 0;
  std::size_t head_end = 0;
};

enum class QuantifierMode { annotate, inline_key };

struct KeyOptions {
  QuantifierMode quantifiers = QuantifierMode::annotate;
  const std::set<std::string, std::less<>>* stopwords = nullptr;  // default list when null
};

// Canonical form of a candidate (quantifier excluded unless inline). nullopt when cleaning empties it.
std::optional<NormalizedForm> canonical_form(const CandidateEntity& entity, const KeyOptions& opts = {});
// Lowercased quantifier surface, e.g. "less than 15%".
std::optional<std::string> quantifier_text(const CandidateEntity& entity);

struct NormalizedEntity {
  std::string key;
  std::string head_lemma;
  std::set<std::string> quantifiers;
  std::set<std::pair<std::string, std::string>> variants;  // (surface, post_id)
};

struct EntityIndex {
  std::map<std::string, NormalizedEntity> entities;
  // Raw canonical key -> merged key (differs when a run-together tag matched a spaced key).
  std::map<std::string, std::string> remap;

  // Merged key of a candidate, nullopt when it was discarded.
  std::optional<std::string> key_of(const CandidateEntity& entity, const KeyOptions& opts = {}) const;
};

EntityIndex merge_entities(const std::vector<CandidateEntity>& entities, const KeyOptions& opts = {});

// URI-safe local name: spaces become underscores.
std::string key_to_local_name(std::string_view key);

struct MappedSpan {
  std::size_t begin = 0;  // byte offsets into the rewritten text
  std::size_t end = 0;
  std::size_t head_begin = 0;
  std::size_t head_end = 0;
  std::string key;
};

struct RewrittenSentence {
  std::string post_id;
  int sent_index = 0;
  std::string text;
  std::vector<MappedSpan> spans;
};

// Replaces each entity span with its normalized form. Overlapping spans keep the longest.
RewrittenSentence rewrite_for_linking(const ParsedSentence& sentence, const std::vector<CandidateEntity>& entities,
                                      const EntityIndex& index, const KeyOptions& opts = {});

}  // namespace mbkg
