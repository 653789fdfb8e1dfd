#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mbkg/types.hpp"

namespace mbkg {

enum class EntityKind { nominal, hashtag, mention, anaphora };

std::string_view to_string(EntityKind k);
EntityKind entity_kind_from_string(std::string_view s);

// Token snapshot carried with an entity so refining does not need the parse.
struct EntityToken {
  int index = 0;
  std::string surface;
  std::string lemma;
  std::string pos;
  TokenKind kind = TokenKind::plain;
  bool space_before = false;  // whitespace separated it from the previous span token

  friend bool operator==(const EntityToken&, const EntityToken&) = default;
};

using TokenSpan = std::pair<int, int>;  // inclusive, 1-based

struct CandidateEntity {
  std::string post_id;
  int sent_index = 0;
  TokenSpan span{0, 0};
  int head_index = 0;    // lexical head
  int anchor_index = 0;  // token whose tree position the entity occupies (pronoun for anaphora)
  std::optional<TokenSpan> quantifier_span;
  bool quantifier_via_of = false;  // "82% of cio": head re-anchored through an of-phrase
  bool has_prep = false;
  std::string surface;
  EntityKind kind = EntityKind::nominal;
  std::optional<TokenPos> resolved_from;
  int source_sent_index = 0;  // sentence the span/head/tokens refer to (antecedent's for anaphora)
  std::vector<EntityToken> tokens;

  friend bool operator==(const CandidateEntity&, const CandidateEntity&) = default;
};

// Labels that attach a modifier into a local noun phrase.
bool is_np_modifier(const ParsedSentence& sentence, const ParsedToken& token);
// NOUN/PROPN, or a hashtag/mention carrying a nominal dependency label.
bool is_entity_head_candidate(const ParsedToken& token);
bool is_quantity_token(const ParsedToken& token);

std::vector<CandidateEntity> extract_noun_phrases(const ParsedSentence& sentence);
CandidateEntity expand_with_preps(const CandidateEntity& entity, const ParsedSentence& sentence);
CandidateEntity attach_quantity_modifiers(const CandidateEntity& entity, const ParsedSentence& sentence);

// Longest span wins on overlap; earlier span wins on equal length.
std::vector<CandidateEntity> resolve_overlaps(std::vector<CandidateEntity> entities);

// extract_noun_phrases -> expand_with_preps -> attach_quantity_modifiers -> resolve_overlaps.
std::vector<CandidateEntity> extract_entities(const ParsedSentence& sentence);

// Adds one anaphora entity per chained pronoun whose antecedent carries an entity.
std::vector<CandidateEntity> resolve_anaphora(const std::vector<CandidateEntity>& entities,
                                              const std::vector<CorefChain>& chains,
                                              const std::vector<ParsedSentence>& sentences);

// Rebuilds span fields (surface, tokens) from the parse.
void fill_span(CandidateEntity& entity, const ParsedSentence& sentence);

void to_json(nlohmann::json& j, const CandidateEntity& e);
void from_json(const nlohmann::json& j, CandidateEntity& e);

}  // namespace mbkg
