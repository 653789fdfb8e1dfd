#include "mbkg/entity_extract.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "mbkg/tree.hpp"

namespace mbkg {

std::string_view to_string(EntityKind k) {
  switch (k) {
    case EntityKind::nominal: return "nominal";
    case EntityKind::hashtag: return "hashtag";
    case EntityKind::mention: return "mention";
    case EntityKind::anaphora: return "anaphora";
  }
  return "nominal";
}

EntityKind entity_kind_from_string(std::string_view s) {
  if (s == "nominal") return EntityKind::nominal;
  if (s == "hashtag") return EntityKind::hashtag;
  if (s == "mention") return EntityKind::mention;
  if (s == "anaphora") return EntityKind::anaphora;
  throw InputError("unknown entity kind '" + std::string(s) + "'");
}

namespace {

const std::set<std::string, std::less<>> kNominalDeprels = {"nsubj", "nsubjpass", "dobj", "obj",  "pobj",
                                                            "conj",  "compound",  "appos", "attr", "ROOT"};

const std::set<std::string, std::less<>> kQuantityTypes = {"MONEY", "PERCENT", "QUANTITY", "CARDINAL"};

bool in_span(int i, TokenSpan s) { return i >= s.first && i <= s.second; }

}  // namespace

bool is_entity_head_candidate(const ParsedToken& t) {
  if (is_nominal(t.pos)) return true;
  return (t.kind == TokenKind::hashtag || t.kind == TokenKind::mention) && kNominalDeprels.count(t.deprel) > 0;
}

bool is_np_modifier(const ParsedSentence& s, const ParsedToken& t) {
  if (t.deprel == "compound" || t.deprel == "amod") return true;
  // Only noun-noun nmod joins the phrase.
  if (t.deprel == "nmod") return is_entity_head_candidate(t) && t.head != 0 && is_entity_head_candidate(s.token(t.head));
  return false;
}

bool is_quantity_token(const ParsedToken& t) {
  if (!t.ent_type.empty()) return kQuantityTypes.count(t.ent_type) > 0;
  return t.pos == "NUM" || t.surface == "%" || t.surface == "percent";
}

void fill_span(CandidateEntity& e, const ParsedSentence& s) {
  e.tokens.clear();
  e.surface.clear();
  for (int i = e.span.first; i <= e.span.second; ++i) {
    const auto& t = s.token(i);
    const bool space = i > e.span.first && s.token(i - 1).end_char != t.start_char;
    e.tokens.push_back({t.index, t.surface, t.lemma, t.pos, t.kind, space});
    if (space) e.surface += ' ';
    e.surface += t.surface;
  }
}

namespace {

EntityKind kind_of_head(const ParsedToken& t) {
  if (t.kind == TokenKind::hashtag) return EntityKind::hashtag;
  if (t.kind == TokenKind::mention) return EntityKind::mention;
  return EntityKind::nominal;
}

// Head plus its modifier closure, restricted to the contiguous block around the head.
TokenSpan core_span(const ParsedSentence& s, const std::vector<std::vector<int>>& children, int head) {
  std::set<int> members{head};
  std::vector<int> stack{head};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int c : children[static_cast<std::size_t>(cur)]) {
      if (is_np_modifier(s, s.token(c)) && members.insert(c).second) stack.push_back(c);
    }
  }
  TokenSpan span{head, head};
  while (span.first > 1 && members.count(span.first - 1)) --span.first;
  while (span.second < s.size() && members.count(span.second + 1)) ++span.second;
  return span;
}

CandidateEntity make_entity(const ParsedSentence& s, TokenSpan span, int head) {
  CandidateEntity e;
  e.post_id = s.post_id;
  e.sent_index = s.sent_index;
  e.source_sent_index = s.sent_index;
  e.span = span;
  e.head_index = head;
  e.anchor_index = head;
  e.kind = kind_of_head(s.token(head));
  fill_span(e, s);
  return e;
}

// Span of root's subtree, provided the subtree is contiguous.
std::optional<TokenSpan> subtree_span(const std::vector<std::vector<int>>& children, int root) {
  int lo = root, hi = root;
  std::vector<int> stack{root};
  std::size_t count = 0;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    ++count;
    lo = std::min(lo, cur);
    hi = std::max(hi, cur);
    for (int c : children[static_cast<std::size_t>(cur)]) stack.push_back(c);
  }
  if (static_cast<std::size_t>(hi - lo + 1) != count) return std::nullopt;
  return TokenSpan{lo, hi};
}

}  // namespace

std::vector<CandidateEntity> extract_noun_phrases(const ParsedSentence& s) {
  const auto children = child_lists(s);
  std::vector<CandidateEntity> out;
  std::vector<bool> covered(static_cast<std::size_t>(s.size()) + 1, false);

  auto absorbed = [&](const ParsedToken& t) {
    return is_np_modifier(s, t) && t.head != 0 && is_entity_head_candidate(s.token(t.head));
  };

  // Phrase heads first, then any candidate token a head's contiguous block left out.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& t : s.tokens) {
      if (!is_entity_head_candidate(t) || covered[static_cast<std::size_t>(t.index)]) continue;
      if (pass == 0 && absorbed(t)) continue;
      auto span = core_span(s, children, t.index);
      for (int i = span.first; i <= span.second; ++i) covered[static_cast<std::size_t>(i)] = true;
      out.push_back(make_entity(s, span, t.index));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.span < b.span; });
  return out;
}

CandidateEntity expand_with_preps(const CandidateEntity& entity, const ParsedSentence& s) {
  if (entity.kind == EntityKind::anaphora) return entity;
  const auto children = child_lists(s);
  for (int prep : children[static_cast<std::size_t>(entity.head_index)]) {
    const auto& pt = s.token(prep);
    if (pt.deprel != "prep" || prep <= entity.span.second) continue;
    if (prep != entity.span.second + 1) break;
    for (int pobj : children[static_cast<std::size_t>(prep)]) {
      if (s.token(pobj).deprel != "pobj") continue;
      auto obj_span = core_span(s, children, pobj);
      if (obj_span.first <= prep) break;
      // Everything between the preposition and the object phrase must belong to the object.
      bool contiguous = true;
      for (int i = prep + 1; i < obj_span.first; ++i) {
        if (s.token(i).head != pobj) contiguous = false;
      }
      if (!contiguous) break;
      CandidateEntity out = entity;
      out.span.second = obj_span.second;
      out.has_prep = true;
      fill_span(out, s);
      return out;
    }
    break;  // only the first prepositional attachment is considered
  }
  return entity;
}

CandidateEntity attach_quantity_modifiers(const CandidateEntity& entity, const ParsedSentence& s) {
  if (entity.kind == EntityKind::anaphora) return entity;
  const auto children = child_lists(s);
  const auto& head = s.token(entity.head_index);

  // Tokens hanging left of the head through nummod/quantmod, with their subtrees.
  std::optional<TokenSpan> quant;
  for (int c : children[static_cast<std::size_t>(entity.head_index)]) {
    const auto& ct = s.token(c);
    if (c >= entity.head_index || (ct.deprel != "nummod" && ct.deprel != "quantmod")) continue;
    auto sub = subtree_span(children, c);
    if (!sub) continue;
    quant = quant ? TokenSpan{std::min(quant->first, sub->first), std::max(quant->second, sub->second)} : *sub;
  }

  CandidateEntity out = entity;
  if (is_quantity_token(head)) {
    // "15% of the banks": the of-phrase object becomes the lexical head.
    for (int prep : children[static_cast<std::size_t>(entity.head_index)]) {
      const auto& pt = s.token(prep);
      if (pt.deprel != "prep" || prep < entity.head_index || (pt.lemma != "of" && pt.surface != "of")) continue;
      for (int pobj : children[static_cast<std::size_t>(prep)]) {
        if (s.token(pobj).deprel != "pobj" || !is_entity_head_candidate(s.token(pobj))) continue;
        auto obj_span = core_span(s, children, pobj);
        int first = quant ? std::min(quant->first, entity.span.first) : entity.span.first;
        out.span = {first, std::max(entity.span.second, obj_span.second)};
        out.quantifier_span = TokenSpan{first, entity.head_index};
        out.quantifier_via_of = true;
        out.has_prep = false;
        out.head_index = pobj;
        out.kind = kind_of_head(s.token(pobj));
        fill_span(out, s);
        return out;
      }
    }
    return entity;  // a bare quantity is its own entity
  }

  if (quant && quant->second + 1 == entity.span.first) {
    out.span.first = quant->first;
    out.quantifier_span = *quant;
    fill_span(out, s);
  }
  return out;
}

std::vector<CandidateEntity> resolve_overlaps(std::vector<CandidateEntity> entities) {
  std::stable_sort(entities.begin(), entities.end(), [](const auto& a, const auto& b) {
    const int la = a.span.second - a.span.first, lb = b.span.second - b.span.first;
    if (la != lb) return la > lb;
    return a.span.first < b.span.first;
  });
  std::vector<CandidateEntity> kept;
  for (auto& e : entities) {
    bool clash = false;
    for (const auto& k : kept) {
      if (e.span.first <= k.span.second && k.span.first <= e.span.second) {
        clash = true;
        break;
      }
    }
    if (!clash) kept.push_back(std::move(e));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.span < b.span; });
  return kept;
}

std::vector<CandidateEntity> extract_entities(const ParsedSentence& s) {
  std::vector<CandidateEntity> out;
  for (auto& e : extract_noun_phrases(s)) out.push_back(attach_quantity_modifiers(expand_with_preps(e, s), s));
  return resolve_overlaps(std::move(out));
}

std::vector<CandidateEntity> resolve_anaphora(const std::vector<CandidateEntity>& entities,
                                              const std::vector<CorefChain>& chains,
                                              const std::vector<ParsedSentence>& sentences) {
  std::vector<CandidateEntity> out = entities;
  auto find_sentence = [&](int idx) -> const ParsedSentence* {
    for (const auto& s : sentences) {
      if (s.sent_index == idx) return &s;
    }
    return nullptr;
  };
  std::set<TokenPos> resolved;
  for (const auto& chain : chains) {
    const auto [ante_sent, ante_tok] = chain.antecedent;
    const CandidateEntity* antecedent = nullptr;
    for (const auto& e : entities) {
      if (e.kind == EntityKind::anaphora || e.sent_index != ante_sent || !in_span(ante_tok, e.span)) continue;
      if (!antecedent || (e.span.second - e.span.first) > (antecedent->span.second - antecedent->span.first)) {
        antecedent = &e;
      }
    }
    if (!antecedent) continue;
    for (const auto& mention : chain.mentions) {
      if (mention == chain.antecedent || resolved.count(mention)) continue;
      const auto* s = find_sentence(mention.first);
      if (!s || mention.second < 1 || mention.second > s->size()) continue;
      const auto& tok = s->token(mention.second);
      if (tok.pos != "PRON") continue;
      CandidateEntity a = *antecedent;
      a.sent_index = mention.first;
      a.anchor_index = mention.second;
      a.kind = EntityKind::anaphora;
      a.resolved_from = mention;
      a.source_sent_index = antecedent->source_sent_index;
      resolved.insert(mention);
      out.push_back(std::move(a));
    }
  }
  return out;
}

// ---------------------------------------------------------------- json

void to_json(nlohmann::json& j, const CandidateEntity& e) {
  nlohmann::json toks = nlohmann::json::array();
  for (const auto& t : e.tokens) {
    toks.push_back({{"i", t.index}, {"surface", t.surface}, {"lemma", t.lemma}, {"pos", t.pos},
                    {"kind", to_string(t.kind)}, {"space_before", t.space_before}});
  }
  j = {{"post_id", e.post_id},
       {"sent_index", e.sent_index},
       {"span", {e.span.first, e.span.second}},
       {"head_index", e.head_index},
       {"anchor_index", e.anchor_index},
       {"surface", e.surface},
       {"kind", to_string(e.kind)},
       {"has_prep", e.has_prep},
       {"source_sent_index", e.source_sent_index},
       {"tokens", toks}};
  j["quantifier_span"] = e.quantifier_span ? nlohmann::json{e.quantifier_span->first, e.quantifier_span->second}
                                           : nlohmann::json(nullptr);
  j["quantifier_via_of"] = e.quantifier_via_of;
  j["resolved_from"] =
      e.resolved_from ? nlohmann::json{e.resolved_from->first, e.resolved_from->second} : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, CandidateEntity& e) {
  e.post_id = j.at("post_id").get<std::string>();
  e.sent_index = j.at("sent_index").get<int>();
  e.span = {j.at("span").at(0).get<int>(), j.at("span").at(1).get<int>()};
  e.head_index = j.at("head_index").get<int>();
  e.anchor_index = j.at("anchor_index").get<int>();
  e.surface = j.at("surface").get<std::string>();
  e.kind = entity_kind_from_string(j.at("kind").get<std::string>());
  e.has_prep = j.value("has_prep", false);
  e.source_sent_index = j.value("source_sent_index", e.sent_index);
  e.tokens.clear();
  for (const auto& t : j.at("tokens")) {
    e.tokens.push_back({t.at("i").get<int>(), t.at("surface").get<std::string>(), t.at("lemma").get<std::string>(),
                        t.at("pos").get<std::string>(), token_kind_from_string(t.at("kind").get<std::string>()),
                        t.value("space_before", false)});
  }
  const auto& q = j.at("quantifier_span");
  if (q.is_null()) {
    e.quantifier_span.reset();
  } else {
    e.quantifier_span = TokenSpan{q.at(0).get<int>(), q.at(1).get<int>()};
  }
  e.quantifier_via_of = j.value("quantifier_via_of", false);
  const auto& r = j.at("resolved_from");
  if (r.is_null()) {
    e.resolved_from.reset();
  } else {
    e.resolved_from = TokenPos{r.at(0).get<int>(), r.at(1).get<int>()};
  }
}

}  // namespace mbkg
