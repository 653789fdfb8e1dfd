#include "mbkg/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mbkg/text.hpp"

namespace mbkg {

using nlohmann::json;

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::plain: return "plain";
    case TokenKind::hashtag: return "hashtag";
    case TokenKind::mention: return "mention";
    case TokenKind::url: return "url";
    case TokenKind::emoticon: return "emoticon";
    case TokenKind::reserved: return "reserved";
  }
  return "plain";
}

TokenKind token_kind_from_string(std::string_view s) {
  if (s == "plain") return TokenKind::plain;
  if (s == "hashtag") return TokenKind::hashtag;
  if (s == "mention") return TokenKind::mention;
  if (s == "url") return TokenKind::url;
  if (s == "emoticon") return TokenKind::emoticon;
  if (s == "reserved") return TokenKind::reserved;
  throw InputError("unknown token kind '" + std::string(s) + "'");
}

bool is_verbal(std::string_view pos) { return pos == "VERB" || pos == "AUX"; }
bool is_nominal(std::string_view pos) { return pos == "NOUN" || pos == "PROPN"; }

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

int parse_int(std::string_view s, std::size_t line_no, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError(at_line(line_no) + "bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

// ---------------------------------------------------------------- posts

std::vector<RawPost> read_posts(std::istream& in) {
  std::vector<RawPost> posts;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(at_line(line_no) + "malformed JSON: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string() || !rec.contains("text") ||
        !rec["text"].is_string()) {
      throw InputError(at_line(line_no) + "record needs string fields 'id' and 'text'");
    }
    RawPost post;
    post.id = rec["id"].get<std::string>();
    post.text = rec["text"].get<std::string>();
    if (post.id.empty()) throw InputError(at_line(line_no) + "empty post id");
    if (post.text.empty()) throw InputError(at_line(line_no) + "empty text for post " + post.id);
    if (rec.contains("created_at") && rec["created_at"].is_string()) post.created_at = rec["created_at"].get<std::string>();
    if (rec.contains("lang") && rec["lang"].is_string()) post.lang = rec["lang"].get<std::string>();
    if (!seen.insert(post.id).second) throw InputError(at_line(line_no) + "duplicate post id '" + post.id + "'");
    posts.push_back(std::move(post));
  }
  return posts;
}

std::vector<RawPost> load_posts(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_posts(in);
}

void write_posts(std::ostream& out, const std::vector<RawPost>& posts) {
  for (const auto& p : posts) {
    json rec = {{"id", p.id}, {"text", p.text}};
    if (p.created_at) rec["created_at"] = *p.created_at;
    if (p.lang) rec["lang"] = *p.lang;
    out << rec.dump() << '\n';
  }
}

// ---------------------------------------------------------------- CoNLL-U

void validate_tree(const ParsedSentence& s) {
  const int n = s.size();
  auto where = [&] { return "post " + s.post_id + " sentence " + std::to_string(s.sent_index) + ": "; };
  if (n == 0) throw InvariantError(where() + "empty sentence");
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    const auto& t = s.token(i);
    if (t.index != i) throw InvariantError(where() + "token ids are not consecutive from 1");
    if (t.head < 0 || t.head > n) throw InvariantError(where() + "head out of range at token " + std::to_string(i));
    if (t.head == 0) ++roots;
  }
  if (roots != 1) throw InvariantError(where() + "expected exactly one root, found " + std::to_string(roots));
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    for (int steps = 0; cur != 0; ++steps) {
      if (steps > n) throw InvariantError(where() + "cycle through token " + std::to_string(i));
      cur = s.token(cur).head;
    }
  }
}

namespace {

struct Block {
  std::size_t first_line = 0;
  std::string post_id;
  std::optional<int> sent_index;
  std::vector<ParsedToken> tokens;
};

ParsedToken parse_token_line(const std::string& line, std::size_t line_no) {
  auto cols = split(line, '\t');
  if (cols.size() != 10) {
    throw InputError(at_line(line_no) + "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
  }
  ParsedToken t;
  t.index = parse_int(cols[0], line_no, "token id");
  t.surface = cols[1];
  t.lemma = cols[2] == "_" && cols[1] != "_" ? cols[1] : cols[2];
  t.pos = cols[3];
  t.head = parse_int(cols[6], line_no, "head");
  t.deprel = cols[7];
  bool have_start = false, have_end = false;
  if (cols[9] != "_") {
    for (const auto& feat : split(cols[9], '|')) {
      auto eq = feat.find('=');
      if (eq == std::string::npos) continue;
      std::string_view key(feat.data(), eq);
      std::string value = feat.substr(eq + 1);
      if (key == "StartChar") {
        t.start_char = static_cast<std::size_t>(parse_int(value, line_no, "StartChar"));
        have_start = true;
      } else if (key == "EndChar") {
        t.end_char = static_cast<std::size_t>(parse_int(value, line_no, "EndChar"));
        have_end = true;
      } else if (key == "TokenType") {
        try {
          t.kind = token_kind_from_string(value);
        } catch (const InputError& e) {
          throw InputError(at_line(line_no) + e.what());
        }
      } else if (key == "EntType") {
        t.ent_type = value;
      }
    }
  }
  if (!have_start || !have_end) throw InputError(at_line(line_no) + "MISC must carry StartChar and EndChar");
  if (t.start_char >= t.end_char) throw InvariantError(at_line(line_no) + "StartChar must be < EndChar");
  return t;
}

}  // namespace

SentencesByPost read_conllu(std::istream& in) {
  SentencesByPost out;
  std::map<std::string, int> next_index;
  Block block;
  bool in_block = false;

  auto flush = [&] {
    if (!in_block) return;
    in_block = false;
    if (block.tokens.empty()) {
      block = Block{};
      return;
    }
    if (block.post_id.empty()) {
      throw InputError(at_line(block.first_line) + "sentence block without '# post_id' comment");
    }
    ParsedSentence s;
    s.post_id = block.post_id;
    s.sent_index = block.sent_index ? *block.sent_index : next_index[block.post_id];
    next_index[block.post_id] = s.sent_index + 1;
    s.tokens = std::move(block.tokens);
    try {
      validate_tree(s);
    } catch (const InvariantError& e) {
      throw InvariantError(at_line(block.first_line) + e.what());
    }
    out[s.post_id].push_back(std::move(s));
    block = Block{};
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (!in_block) {
      in_block = true;
      block.first_line = line_no;
    }
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto key = trim(std::string_view(line).substr(1, eq - 1));
      auto value = trim(std::string_view(line).substr(eq + 1));
      if (key == "post_id") block.post_id = std::string(value);
      if (key == "sent_index") block.sent_index = parse_int(value, line_no, "sent_index");
      continue;
    }
    auto tab = line.find('\t');
    std::string_view id = std::string_view(line).substr(0, tab);
    // Multiword-token ranges and empty nodes carry no tree edges.
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) continue;
    block.tokens.push_back(parse_token_line(line, line_no));
  }
  flush();

  for (auto& [id, sentences] : out) {
    std::stable_sort(sentences.begin(), sentences.end(),
                     [](const ParsedSentence& a, const ParsedSentence& b) { return a.sent_index < b.sent_index; });
    for (std::size_t i = 1; i < sentences.size(); ++i) {
      if (sentences[i].sent_index == sentences[i - 1].sent_index) {
        throw InputError("post " + id + ": duplicate sent_index " + std::to_string(sentences[i].sent_index));
      }
    }
  }
  return out;
}

SentencesByPost load_conllu(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_conllu(in);
}

void write_conllu(std::ostream& out, const SentencesByPost& parses) {
  for (const auto& [id, sentences] : parses) {
    for (const auto& s : sentences) {
      out << "# post_id = " << s.post_id << '\n' << "# sent_index = " << s.sent_index << '\n';
      for (const auto& t : s.tokens) {
        out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t' << t.pos << "\t_\t_\t" << t.head << '\t'
            << t.deprel << "\t_\t" << "StartChar=" << t.start_char << "|EndChar=" << t.end_char
            << "|TokenType=" << to_string(t.kind);
        if (!t.ent_type.empty()) out << "|EntType=" << t.ent_type;
        out << '\n';
      }
      out << '\n';
    }
  }
}

// ---------------------------------------------------------------- coref

ChainsByPost read_coref(std::istream& in) {
  ChainsByPost out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    try {
      auto rec = json::parse(line);
      auto post_id = rec.at("post_id").get<std::string>();
      auto& chains = out[post_id];
      for (const auto& jc : rec.at("chains")) {
        CorefChain chain;
        chain.post_id = post_id;
        for (const auto& m : jc) chain.mentions.emplace_back(m.at(0).get<int>(), m.at(1).get<int>());
        if (chain.mentions.empty()) throw InputError(at_line(line_no) + "empty coreference chain");
        chain.antecedent = chain.mentions.front();
        chains.push_back(std::move(chain));
      }
    } catch (const json::exception& e) {
      throw InputError(at_line(line_no) + "malformed coref record: " + e.what());
    }
  }
  return out;
}

ChainsByPost load_coref(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_coref(in);
}

// ---------------------------------------------------------------- similarity

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  const auto x = utf8_codepoints(a);
  const auto y = utf8_codepoints(b);
  if (x.empty()) return y.size();
  if (y.empty()) return x.size();
  std::vector<std::size_t> row(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (x[i - 1] == y[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[y.size()];
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(utf8_length(a), utf8_length(b));
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

std::vector<RawPost> dedup_corpus(const std::vector<RawPost>& posts,
                                  const std::unordered_map<std::string, std::string>& normalized_texts,
                                  double threshold) {
  struct Kept {
    std::string text;
    std::size_t length;
  };
  std::vector<RawPost> out;
  std::vector<Kept> kept;
  for (const auto& post : posts) {
    auto it = normalized_texts.find(post.id);
    const std::string& text = it != normalized_texts.end() ? it->second : post.text;
    const std::size_t len = utf8_length(text);
    bool duplicate = false;
    for (const auto& k : kept) {
      const std::size_t longest = std::max(len, k.length);
      if (longest > 0) {
        const std::size_t gap = len > k.length ? len - k.length : k.length - len;
        // dist >= gap, so this bounds the similarity from above.
        if (1.0 - static_cast<double>(gap) / static_cast<double>(longest) < threshold) continue;
      }
      if (levenshtein_similarity(text, k.text) >= threshold) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      out.push_back(post);
      kept.push_back({text, len});
    }
  }
  return out;
}

// ---------------------------------------------------------------- vectors

bool WordVectorTable::contains(std::string_view token) const { return find(token) != nullptr; }

const std::vector<double>* WordVectorTable::find(std::string_view token) const {
  auto it = entries_.find(std::string(token));
  return it == entries_.end() ? nullptr : &it->second;
}

void WordVectorTable::insert(std::string token, std::vector<double> vec) {
  if (dimension_ == 0) dimension_ = vec.size();
  if (vec.size() != dimension_) {
    throw InputError("vector for '" + token + "' has " + std::to_string(vec.size()) + " components, expected " +
                     std::to_string(dimension_));
  }
  entries_.insert_or_assign(std::move(token), std::move(vec));
}

WordVectorTable read_word_vectors(std::istream& in) {
  WordVectorTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split(line, ' ');
    while (!fields.empty() && fields.back().empty()) fields.pop_back();
    if (fields.size() < 2) throw InputError(at_line(line_no) + "expected a token followed by components");
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      const auto& f = fields[i];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw InputError(at_line(line_no) + "bad vector component '" + f + "'");
      }
      vec.push_back(v);
    }
    if (table.dimension() != 0 && vec.size() != table.dimension()) {
      throw InputError(at_line(line_no) + "dimension " + std::to_string(vec.size()) + " differs from " +
                       std::to_string(table.dimension()));
    }
    table.insert(fields[0], std::move(vec));
  }
  if (table.size() == 0) throw InputError("vector file is empty; dimension cannot be determined");
  return table;
}

WordVectorTable load_word_vectors(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_word_vectors(in);
}

}  // namespace mbkg
