#pragma once

#include <string>
#include <vector>

#include "mbkg/types.hpp"

namespace testing {

struct Tok {
  std::string surface;
  std::string lemma;
  std::string pos;
  int head = 0;
  std::string deprel;
  mbkg::TokenKind kind = mbkg::TokenKind::plain;
  std::string ent;
};

// Tokens are laid out with one space between them, except before "," "." "!" "?" ":" and "%".
inline bool glues_left(const std::string& s) {
  return s == "," || s == "." || s == "!" || s == "?" || s == ":" || s == "%" || s == "'s";
}

inline mbkg::ParsedSentence make_sentence(const std::vector<Tok>& toks, std::string* text = nullptr,
                                          std::string post_id = "p", int sent_index = 0) {
  mbkg::ParsedSentence s;
  s.post_id = std::move(post_id);
  s.sent_index = sent_index;
  std::string buf = text ? *text : std::string();
  int i = 0;
  for (const auto& t : toks) {
    if (!buf.empty() && !glues_left(t.surface)) buf += ' ';
    mbkg::ParsedToken p;
    p.index = ++i;
    p.surface = t.surface;
    p.lemma = t.lemma.empty() ? t.surface : t.lemma;
    p.pos = t.pos;
    p.head = t.head;
    p.deprel = t.deprel;
    p.kind = t.kind;
    p.ent_type = t.ent;
    p.start_char = buf.size();
    buf += t.surface;
    p.end_char = buf.size();
    s.tokens.push_back(p);
  }
  if (text) *text = buf;
  return s;
}

}  // namespace testing
