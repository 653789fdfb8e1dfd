#include "mbkg/entity_refine.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "mbkg/text.hpp"

namespace mbkg {

const std::set<std::string, std::less<>>& default_stopwords() {
  static const std::set<std::string, std::less<>> kStopwords = {
      "a",        "about",   "above",   "after",   "again",   "against",  "all",      "also",    "am",
      "an",       "and",     "any",     "are",     "as",      "at",       "be",       "because", "been",
      "before",   "being",   "below",   "between", "both",    "but",      "by",       "can",     "could",
      "did",      "do",      "does",    "doing",   "down",    "during",   "each",     "either",  "else",
      "ever",     "every",   "few",     "for",     "from",    "further",  "had",      "has",     "have",
      "having",   "he",      "her",     "here",    "hers",    "herself",  "him",      "himself", "his",
      "how",      "however", "i",       "if",      "in",      "into",     "is",       "it",      "its",
      "itself",   "just",    "me",      "might",   "mine",    "more",     "most",     "must",    "my",
      "myself",   "neither", "no",      "nor",     "not",     "now",      "of",       "off",     "on",
      "once",     "only",    "or",      "other",   "ought",   "our",      "ours",     "ourselves", "out",
      "over",     "own",     "same",    "shall",   "she",     "should",   "so",       "some",    "such",
      "than",     "that",    "the",     "their",   "theirs",  "them",     "themselves", "then",  "there",
      "these",    "they",    "this",    "those",   "though",  "through",  "thus",     "to",      "too",
      "under",    "until",   "up",      "upon",    "us",      "very",     "via",      "was",     "we",
      "were",     "what",    "whatever", "when",   "whenever", "where",   "whereas",  "whether", "which",
      "while",    "who",     "whoever", "whom",    "whose",   "why",      "will",     "with",    "within",
      "without",  "would",   "yet",     "you",     "your",    "yours",    "yourself", "yourselves", "'s",
      "’s",  "'",       "among",   "amongst", "across",  "along",    "around",   "behind",  "beside",
      "besides",  "beyond",  "despite", "toward",  "towards", "unless",   "whilst",   "may",     "'re",
      "'ve",      "'ll",     "'d",      "n't",     "many",     "much",     "several"};
  return kStopwords;
}

std::string british_spelling(std::string_view word) {
  static const std::unordered_map<std::string_view, std::string_view> kTable = {
#include "american_british.inc"
  };
  auto it = kTable.find(word);
  return it == kTable.end() ? std::string(word) : std::string(it->second);
}

namespace {

bool is_sigil(char c) { return c == '#' || c == '@'; }

// Edge punctuation other than tag sigils.
std::string strip_edge_punct(std::string_view s, bool keep_sigils) {
  std::size_t b = 0, e = s.size();
  while (b < e) {
    std::size_t w = 0;
    if (keep_sigils && is_sigil(s[b])) break;
    if (!is_punct_cluster(s, b, &w)) break;
    b += w;
  }
  while (e > b) {
    // Walk back to the start of the last UTF-8 sequence.
    std::size_t start = e - 1;
    while (start > b && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
    std::size_t w = 0;
    if (!is_punct_cluster(s, start, &w) || start + w != e) break;
    e = start;
  }
  return std::string(trim(s.substr(b, e - b)));
}

bool all_punct(std::string_view s) {
  if (s.empty()) return true;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t w = 0;
    if (!is_punct_cluster(s, i, &w)) return false;
    i += w;
  }
  return true;
}

std::string british_words(std::string_view phrase) {
  auto words = split_ws(phrase);
  for (auto& w : words) w = british_spelling(w);
  return join(words, " ");
}

}  // namespace

std::optional<std::string> clean_entity(std::string_view surface, const std::set<std::string, std::less<>>& stopwords) {
  auto stripped = strip_edge_punct(surface, true);
  std::vector<std::string> kept;
  for (auto& w : split_ws(stripped)) {
    if (stopwords.count(to_lower(w)) || all_punct(w)) continue;
    kept.push_back(w);
  }
  auto out = strip_edge_punct(join(kept, " "), true);
  if (out.empty()) return std::nullopt;
  return out;
}

std::string normalize_tag(std::string_view surface) {
  std::size_t b = 0;
  while (b < surface.size() && is_sigil(surface[b])) ++b;
  std::string_view s = surface.substr(b);

  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) words.push_back(to_lower(cur));
    cur.clear();
  };
  auto kind = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isdigit(u)) return 'd';
    if (std::isupper(u)) return 'U';
    if (std::islower(u)) return 'l';
    return 'o';
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '_' || c == '-' || c == ' ' || is_sigil(c)) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const char p = kind(cur.back());
      const char k = kind(c);
      const bool next_lower = i + 1 < s.size() && kind(s[i + 1]) == 'l';
      const bool boundary = (p == 'l' && k == 'U') ||                 // smartCities
                            (p == 'U' && k == 'U' && next_lower) ||  // AIStrategy -> AI Strategy
                            ((p == 'd') != (k == 'd') && p != 'o' && k != 'o');
      if (boundary) flush();
    }
    cur += c;
  }
  flush();
  return join(words, " ");
}

std::string normalize_nominal(const CandidateEntity& entity) {
  std::string out;
  for (const auto& t : entity.tokens) {
    std::string piece;
    if (t.kind == TokenKind::hashtag || t.kind == TokenKind::mention) {
      piece = normalize_tag(t.surface);
    } else if (t.pos == "VERB" || t.pos == "PROPN") {
      piece = to_lower(t.surface);
    } else {
      piece = to_lower(t.lemma.empty() ? t.surface : t.lemma);
    }
    piece = british_words(piece);
    if (piece.empty()) continue;
    if (!out.empty() && t.space_before) out += ' ';
    out += piece;
  }
  return collapse_whitespace(out);
}

std::optional<std::string> quantifier_text(const CandidateEntity& e) {
  if (!e.quantifier_span) return std::nullopt;
  std::string out;
  for (const auto& t : e.tokens) {
    if (t.index < e.quantifier_span->first || t.index > e.quantifier_span->second) continue;
    if (!out.empty() && t.space_before) out += ' ';
    out += to_lower(t.surface);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::optional<NormalizedForm> canonical_form(const CandidateEntity& e, const KeyOptions& opts) {
  const auto& stopwords = opts.stopwords ? *opts.stopwords : default_stopwords();
  const bool skip_quantifier = e.quantifier_span.has_value();

  NormalizedForm form;
  bool have_head = false;
  bool prev_kept = false;
  for (const auto& t : e.tokens) {
    const bool in_quant = e.quantifier_span && t.index >= e.quantifier_span->first && t.index <= e.quantifier_span->second;
    if (skip_quantifier && in_quant) {
      prev_kept = false;
      continue;
    }
    const bool tag = t.kind == TokenKind::hashtag || t.kind == TokenKind::mention;
    if (t.pos == "DET" || t.pos == "PUNCT" || t.pos == "PART" || (!tag && all_punct(t.surface)) ||
        stopwords.count(to_lower(t.surface))) {
      prev_kept = false;
      continue;
    }
    std::string piece;
    if (tag) {
      const bool use_lemma = t.pos != "VERB" && t.pos != "PROPN" && !t.lemma.empty();
      piece = normalize_tag(use_lemma ? t.lemma : t.surface);
    } else if (t.pos == "VERB" || t.pos == "PROPN") {
      piece = to_lower(t.surface);
    } else {
      piece = to_lower(t.lemma.empty() ? t.surface : t.lemma);
    }
    piece.erase(std::remove_if(piece.begin(), piece.end(), is_sigil), piece.end());
    piece = british_words(piece);
    if (piece.empty()) continue;
    if (!form.text.empty() && (t.space_before || !prev_kept)) form.text += ' ';
    const std::size_t begin = form.text.size();
    form.text += piece;
    prev_kept = true;
    if (t.index == e.head_index) {
      // For a split tag the last word heads the phrase.
      auto last_space = piece.rfind(' ');
      form.head_begin = last_space == std::string::npos ? begin : begin + last_space + 1;
      form.head_end = form.text.size();
      have_head = true;
    }
  }

  // Trim edge punctuation while keeping the head range aligned.
  const std::string trimmed = strip_edge_punct(form.text, false);
  if (trimmed.empty()) return std::nullopt;
  const std::size_t shift = form.text.find(trimmed);
  form.text = trimmed;
  if (have_head) {
    form.head_begin = form.head_begin >= shift ? form.head_begin - shift : 0;
    form.head_end = std::min(form.head_end >= shift ? form.head_end - shift : 0, form.text.size());
    if (form.head_begin >= form.head_end) have_head = false;
  }
  if (!have_head) {
    auto last_space = form.text.rfind(' ');
    form.head_begin = last_space == std::string::npos ? 0 : last_space + 1;
    form.head_end = form.text.size();
  }

  if (opts.quantifiers == QuantifierMode::inline_key) {
    if (auto q = quantifier_text(e)) {
      const std::string prefix = *q + (e.quantifier_via_of ? " of " : " ");
      form.text = prefix + form.text;
      form.head_begin += prefix.size();
      form.head_end += prefix.size();
    }
  }
  return form;
}

std::optional<std::string> EntityIndex::key_of(const CandidateEntity& entity, const KeyOptions& opts) const {
  auto form = canonical_form(entity, opts);
  if (!form) return std::nullopt;
  auto it = remap.find(form->text);
  return it == remap.end() ? form->text : it->second;
}

EntityIndex merge_entities(const std::vector<CandidateEntity>& entities, const KeyOptions& opts) {
  EntityIndex index;
  std::vector<std::pair<const CandidateEntity*, NormalizedForm>> forms;
  std::set<std::string> raw_keys;
  for (const auto& e : entities) {
    auto form = canonical_form(e, opts);
    if (!form) continue;
    raw_keys.insert(form->text);
    forms.emplace_back(&e, std::move(*form));
  }

  // A run-together key ("digitaltransformation") joins the spaced key it spells.
  std::map<std::string, std::string> compact;
  for (const auto& k : raw_keys) {
    if (k.find(' ') == std::string::npos) continue;
    std::string c = k;
    c.erase(std::remove(c.begin(), c.end(), ' '), c.end());
    compact.emplace(c, k);  // set order keeps the lexicographically smallest
  }
  for (const auto& k : raw_keys) {
    auto it = k.find(' ') == std::string::npos ? compact.find(k) : compact.end();
    index.remap[k] = it == compact.end() ? k : it->second;
  }

  for (const auto& [e, form] : forms) {
    const auto& key = index.remap.at(form.text);
    auto& ne = index.entities[key];
    if (ne.key.empty()) {
      ne.key = key;
      if (key == form.text) {
        ne.head_lemma = form.text.substr(form.head_begin, form.head_end - form.head_begin);
      } else {
        auto sp = key.rfind(' ');
        ne.head_lemma = sp == std::string::npos ? key : key.substr(sp + 1);
      }
    }
    if (opts.quantifiers == QuantifierMode::annotate) {
      if (auto q = quantifier_text(*e)) ne.quantifiers.insert(*q);
    }
    ne.variants.emplace(e->surface, e->post_id);
  }
  return index;
}

std::string key_to_local_name(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

RewrittenSentence rewrite_for_linking(const ParsedSentence& sentence, const std::vector<CandidateEntity>& entities,
                                      const EntityIndex& index, const KeyOptions& opts) {
  struct Range {
    int first, last;
    std::string key;
    NormalizedForm form;
  };
  std::vector<Range> ranges;
  for (const auto& e : entities) {
    if (e.post_id != sentence.post_id || e.sent_index != sentence.sent_index) continue;
    auto form = canonical_form(e, opts);
    if (!form) continue;
    auto it = index.remap.find(form->text);
    std::string key = it == index.remap.end() ? form->text : it->second;
    if (key != form->text) {
      auto sp = key.rfind(' ');
      form->text = key;
      form->head_begin = sp == std::string::npos ? 0 : sp + 1;
      form->head_end = key.size();
    }
    if (e.kind == EntityKind::anaphora) {
      ranges.push_back({e.anchor_index, e.anchor_index, key, *form});
    } else {
      ranges.push_back({e.span.first, e.span.second, key, *form});
    }
  }
  std::stable_sort(ranges.begin(), ranges.end(), [](const Range& a, const Range& b) {
    if (a.last - a.first != b.last - b.first) return a.last - a.first > b.last - b.first;
    return a.first < b.first;
  });
  std::vector<Range> chosen;
  for (auto& r : ranges) {
    bool clash = std::any_of(chosen.begin(), chosen.end(),
                             [&](const Range& c) { return r.first <= c.last && c.first <= r.last; });
    if (!clash) chosen.push_back(std::move(r));
  }
  std::sort(chosen.begin(), chosen.end(), [](const Range& a, const Range& b) { return a.first < b.first; });

  RewrittenSentence out;
  out.post_id = sentence.post_id;
  out.sent_index = sentence.sent_index;
  std::size_t next = 0;
  const ParsedToken* prev = nullptr;
  for (int i = 1; i <= sentence.size();) {
    const auto& t = sentence.token(i);
    if (prev && prev->end_char != t.start_char) out.text += ' ';
    if (next < chosen.size() && chosen[next].first == i) {
      const auto& r = chosen[next];
      const std::size_t begin = out.text.size();
      out.text += r.form.text;
      out.spans.push_back({begin, out.text.size(), begin + r.form.head_begin, begin + r.form.head_end, r.key});
      prev = &sentence.token(r.last);
      i = r.last + 1;
      ++next;
      continue;
    }
    out.text += t.surface;
    prev = &t;
    ++i;
  }
  return out;
}

}  // namespace mbkg
