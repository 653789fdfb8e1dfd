#include "mbkg/preprocess.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "mbkg/text.hpp"

namespace mbkg {

std::string_view to_string(RemovalReason r) {
  switch (r) {
    case RemovalReason::emoticon: return "emoticon";
    case RemovalReason::reserved: return "reserved";
    case RemovalReason::url: return "url";
    case RemovalReason::leading_mentions: return "leading_mentions";
    case RemovalReason::tag_sequence: return "tag_sequence";
    case RemovalReason::title_prefix: return "title_prefix";
  }
  return "emoticon";
}

RemovalReason removal_reason_from_string(std::string_view s) {
  for (auto r : {RemovalReason::emoticon, RemovalReason::reserved, RemovalReason::url, RemovalReason::leading_mentions,
                 RemovalReason::tag_sequence, RemovalReason::title_prefix}) {
    if (to_string(r) == s) return r;
  }
  throw InputError("unknown removal reason '" + std::string(s) + "'");
}

bool looks_like_emoticon(std::string_view s) {
  static constexpr std::array<std::string_view, 26> kEmoticons = {
      ":)", ":-)", ":(", ":-(", ":D", ":-D", ";)", ";-)", ":P", ":-P", ":p", ":-p", ":/",
      ":-/", ":'(", ":o", ":O", ":|", "<3", "</3", "XD", "xD", "=)", "=(", "^^", "^_^"};
  return std::find(kEmoticons.begin(), kEmoticons.end(), s) != kEmoticons.end();
}

namespace {

// Positions into sentence.tokens of the surviving stream, with a reason per dropped position.
struct Stream {
  const ParsedSentence* sentence;
  std::vector<std::size_t> alive;
  std::vector<std::pair<std::size_t, RemovalReason>> dropped;

  const ParsedToken& at(std::size_t k) const { return sentence->tokens[alive[k]]; }

  void drop_where(const std::vector<bool>& drop, RemovalReason reason) {
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < alive.size(); ++k) {
      if (drop[k]) {
        dropped.emplace_back(alive[k], reason);
      } else {
        next.push_back(alive[k]);
      }
    }
    alive = std::move(next);
  }
};

Stream make_stream(const ParsedSentence& s) {
  Stream st{&s, {}, {}};
  st.alive.resize(s.tokens.size());
  for (std::size_t i = 0; i < s.tokens.size(); ++i) st.alive[i] = i;
  return st;
}

ParsedSentence materialize(const Stream& st) {
  ParsedSentence out;
  out.post_id = st.sentence->post_id;
  out.sent_index = st.sentence->sent_index;
  for (auto i : st.alive) out.tokens.push_back(st.sentence->tokens[i]);
  return out;
}

bool is_tag_like(TokenKind k) { return k == TokenKind::hashtag || k == TokenKind::mention || k == TokenKind::url; }

bool is_sentence_closer(std::string_view s) { return s == "!" || s == ":" || s == "?" || s == "."; }

bool is_retweet_marker(const ParsedToken& t, const PreprocessOptions& opts) {
  return t.kind == TokenKind::reserved &&
         std::find(opts.retweet_markers.begin(), opts.retweet_markers.end(), t.surface) != opts.retweet_markers.end();
}

void apply_strip(Stream& st) {
  for (auto [kind, reason] : {std::pair{TokenKind::emoticon, RemovalReason::emoticon},
                              std::pair{TokenKind::reserved, RemovalReason::reserved},
                              std::pair{TokenKind::url, RemovalReason::url}}) {
    std::vector<bool> drop(st.alive.size(), false);
    for (std::size_t k = 0; k < st.alive.size(); ++k) {
      const auto& t = st.at(k);
      const bool emoticon_fallback =
          kind == TokenKind::emoticon && t.kind == TokenKind::plain && looks_like_emoticon(t.surface);
      drop[k] = t.kind == kind || emoticon_fallback;
    }
    st.drop_where(drop, reason);
  }
}

bool apply_leading_mentions(Stream& st, const PreprocessOptions& opts) {
  std::size_t run = 0;
  while (run < st.alive.size() &&
         (st.at(run).kind == TokenKind::mention || is_retweet_marker(st.at(run), opts))) {
    ++run;
  }
  if (run == 0) return false;
  const bool followed_by_verb = run < st.alive.size() && is_verbal(st.at(run).pos);
  if (run == 1 && followed_by_verb) return false;
  std::vector<bool> drop(st.alive.size(), false);
  std::fill(drop.begin(), drop.begin() + static_cast<std::ptrdiff_t>(run), true);
  st.drop_where(drop, RemovalReason::leading_mentions);
  return true;
}

bool apply_tag_sequences(Stream& st) {
  std::vector<bool> drop(st.alive.size(), false);
  bool any = false;
  for (std::size_t k = 0; k < st.alive.size();) {
    if (!is_tag_like(st.at(k).kind)) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end < st.alive.size() && is_tag_like(st.at(end).kind)) ++end;
    if (end - k > 1) {
      const bool after_closer = k > 0 && is_sentence_closer(st.at(k - 1).surface);
      for (std::size_t j = after_closer ? k : k + 1; j < end; ++j) drop[j] = true;
      any = true;
    }
    k = end;
  }
  if (any) st.drop_where(drop, RemovalReason::tag_sequence);
  return any;
}

bool apply_title_prefix(Stream& st, int max_len) {
  const std::size_t limit = std::min(st.alive.size(), static_cast<std::size_t>(std::max(max_len, 0)) + 1);
  for (std::size_t k = 0; k < limit; ++k) {
    const auto& t = st.at(k);
    if (is_verbal(t.pos)) return false;
    if (t.surface == ":") {
      std::vector<bool> drop(st.alive.size(), false);
      std::fill(drop.begin(), drop.begin() + static_cast<std::ptrdiff_t>(k + 1), true);
      st.drop_where(drop, RemovalReason::title_prefix);
      return true;
    }
  }
  return false;
}

// Rules 1-3 run in order and repeat until the stream is stable, so that a
// prefix exposed by a later rule is handled and the result is idempotent.
void apply_all(Stream& st, const PreprocessOptions& opts) {
  apply_strip(st);
  for (std::size_t guard = 0; guard <= st.sentence->tokens.size(); ++guard) {
    bool changed = apply_leading_mentions(st, opts);
    changed = apply_tag_sequences(st) || changed;
    changed = apply_title_prefix(st, opts.title_max_len) || changed;
    if (!changed) break;
  }
}

}  // namespace

ParsedSentence strip_nonsyntactic(const ParsedSentence& sentence) {
  auto st = make_stream(sentence);
  apply_strip(st);
  return materialize(st);
}

ParsedSentence drop_leading_mentions(const ParsedSentence& sentence, const PreprocessOptions& opts) {
  auto st = make_stream(sentence);
  apply_leading_mentions(st, opts);
  return materialize(st);
}

ParsedSentence truncate_tag_sequences(const ParsedSentence& sentence) {
  auto st = make_stream(sentence);
  apply_tag_sequences(st);
  return materialize(st);
}

ParsedSentence drop_title_prefix(const ParsedSentence& sentence, int max_len) {
  if (max_len < 1) throw InputError("title prefix max_len must be >= 1");
  auto st = make_stream(sentence);
  apply_title_prefix(st, max_len);
  return materialize(st);
}

NormalizedPost normalize_post(const RawPost& post, const std::vector<ParsedSentence>& first_pass,
                              const PreprocessOptions& opts) {
  NormalizedPost out;
  out.post_id = post.id;

  struct Removed {
    std::size_t token_order;
    const ParsedToken* token;
    RemovalReason reason;
  };
  std::vector<const ParsedToken*> survivors;
  std::vector<Removed> removed;
  std::size_t order_base = 0;

  for (const auto& s : first_pass) {
    for (const auto& t : s.tokens) {
      if (t.end_char > post.text.size() ||
          std::string_view(post.text).substr(t.start_char, t.end_char - t.start_char) != t.surface) {
        throw InputError("post " + post.id + ": token '" + t.surface + "' at [" + std::to_string(t.start_char) + "," +
                         std::to_string(t.end_char) + ") does not match the post text");
      }
    }
    auto st = make_stream(s);
    apply_all(st, opts);
    for (auto i : st.alive) survivors.push_back(&s.tokens[i]);
    for (auto [i, reason] : st.dropped) removed.push_back({order_base + i, &s.tokens[i], reason});
    order_base += s.tokens.size();
  }

  std::string text;
  const ParsedToken* prev = nullptr;
  for (const auto* t : survivors) {
    if (prev && prev->end_char != t->start_char) text += ' ';
    text += t->surface;
    prev = t;
  }
  out.normalized_text = collapse_whitespace(text);

  // Merge removals of the same reason that are adjacent in token order.
  std::sort(removed.begin(), removed.end(),
            [](const Removed& a, const Removed& b) { return a.token_order < b.token_order; });
  for (std::size_t k = 0; k < removed.size(); ++k) {
    const auto& r = removed[k];
    if (!out.removed_spans.empty() && k > 0 && removed[k - 1].token_order + 1 == r.token_order &&
        out.removed_spans.back().reason == r.reason) {
      out.removed_spans.back().end_char = r.token->end_char;
    } else {
      out.removed_spans.push_back({r.token->start_char, r.token->end_char, r.reason});
    }
  }
  return out;
}

std::map<std::string, std::size_t> removal_histogram(const std::vector<NormalizedPost>& posts) {
  std::map<std::string, std::size_t> hist;
  for (auto r : {RemovalReason::emoticon, RemovalReason::reserved, RemovalReason::url, RemovalReason::leading_mentions,
                 RemovalReason::tag_sequence, RemovalReason::title_prefix}) {
    hist[std::string(to_string(r))] = 0;
  }
  for (const auto& p : posts) {
    for (const auto& span : p.removed_spans) ++hist[std::string(to_string(span.reason))];
  }
  return hist;
}

void write_normalized(std::ostream& out, const std::vector<NormalizedPost>& posts) {
  for (const auto& p : posts) {
    nlohmann::json removed = nlohmann::json::array();
    for (const auto& r : p.removed_spans) removed.push_back({r.start_char, r.end_char, to_string(r.reason)});
    nlohmann::json rec = {{"id", p.post_id}, {"normalized_text", p.normalized_text}, {"removed", removed}};
    out << rec.dump() << '\n';
  }
}

std::vector<NormalizedPost> read_normalized(std::istream& in) {
  std::vector<NormalizedPost> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto rec = nlohmann::json::parse(line);
      NormalizedPost p;
      p.post_id = rec.at("id").get<std::string>();
      p.normalized_text = rec.at("normalized_text").get<std::string>();
      for (const auto& r : rec.at("removed")) {
        p.removed_spans.push_back({r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>(),
                                   removal_reason_from_string(r.at(2).get<std::string>())});
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw InputError("line " + std::to_string(line_no) + ": malformed normalized record: " + e.what());
    }
  }
  return out;
}

}  // namespace mbkg
