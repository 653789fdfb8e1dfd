#include "mbkg/turtle.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mbkg {

namespace {

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool has_scheme(std::string_view iri) {
  const auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const char c = iri[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  return true;
}

// Reference resolution without dot-segment removal beyond the simple cases.
std::string resolve(const std::string& base, const std::string& ref) {
  if (base.empty() || has_scheme(ref)) return ref;
  if (ref.empty()) return base.substr(0, base.find('#'));
  if (ref[0] == '#') return base.substr(0, base.find('#')) + ref;
  const auto scheme_end = base.find("://");
  if (ref.size() > 1 && ref[0] == '/' && ref[1] == '/') return base.substr(0, base.find(':') + 1) + ref;
  if (ref[0] == '/') {
    const auto path_start = scheme_end == std::string::npos ? base.find(':') + 1 : base.find('/', scheme_end + 3);
    return (path_start == std::string::npos ? base : base.substr(0, path_start)) + ref;
  }
  auto stem = base.substr(0, base.find_first_of("?#"));
  const auto slash = stem.rfind('/');
  if (slash != std::string::npos && (scheme_end == std::string::npos || slash > scheme_end + 2)) {
    stem = stem.substr(0, slash + 1);
  } else {
    stem += '/';
  }
  return stem + ref;
}

bool is_pn_chars_base(unsigned char c) { return std::isalpha(c) || c >= 0x80; }
bool is_pn_chars_u(unsigned char c) { return is_pn_chars_base(c) || c == '_'; }
bool is_pn_chars(unsigned char c) { return is_pn_chars_u(c) || c == '-' || std::isdigit(c); }

class Parser {
 public:
  Parser(std::string_view text, std::string base) : s_(text), base_(std::move(base)) {}

  TurtleDocument run() {
    skip_ws();
    while (pos_ < s_.size()) {
      statement();
      skip_ws();
    }
    return std::move(doc_);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::string base_;
  TurtleDocument doc_;
  std::size_t blank_counter_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw TurtleError(line, col, msg);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

  void skip_ws() {
    while (!eof()) {
      const char c = s_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (!eof() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool keyword_ci(std::string_view kw) const {
    if (pos_ + kw.size() > s_.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(s_[pos_ + i])) != kw[i]) return false;
    }
    const char after = pos_ + kw.size() < s_.size() ? s_[pos_ + kw.size()] : ' ';
    return after == ' ' || after == '\t' || after == '\n' || after == '\r' || after == '<' || after == '#';
  }

  void statement() {
    if (peek() == '@') {
      if (s_.substr(pos_, 7) == "@prefix") {
        pos_ += 7;
        prefix_decl(true);
      } else if (s_.substr(pos_, 5) == "@base") {
        pos_ += 5;
        skip_ws();
        base_ = iriref();
        expect('.');
      } else {
        fail("unknown directive");
      }
      return;
    }
    if (keyword_ci("PREFIX")) {
      pos_ += 6;
      prefix_decl(false);
      return;
    }
    if (keyword_ci("BASE")) {
      pos_ += 4;
      skip_ws();
      base_ = iriref();
      return;
    }
    triples();
    expect('.');
  }

  void prefix_decl(bool dotted) {
    skip_ws();
    const std::size_t start = pos_;
    while (!eof() && s_[pos_] != ':') {
      const auto c = static_cast<unsigned char>(s_[pos_]);
      if (!(is_pn_chars(c) || c == '.')) fail("bad prefix name");
      ++pos_;
    }
    if (eof()) fail("expected ':' in prefix declaration");
    std::string name(s_.substr(start, pos_ - start));
    ++pos_;
    skip_ws();
    doc_.prefixes[name] = iriref();
    if (dotted) expect('.');
  }

  void triples() {
    skip_ws();
    if (peek() == '[') {
      const Term subj = blank_node_property_list();
      skip_ws();
      if (peek() != '.') predicate_object_list(subj);
      return;
    }
    const Term subj = subject();
    predicate_object_list(subj);
  }

  Term subject() {
    skip_ws();
    const char c = peek();
    if (c == '<') return Term::iri(iriref());
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '(') return collection();
    if (c == '[') return blank_node_property_list();
    return Term::iri(prefixed_name());
  }

  void predicate_object_list(const Term& subj) {
    for (;;) {
      skip_ws();
      const Term pred = verb();
      object_list(subj, pred);
      skip_ws();
      if (peek() != ';') return;
      while (peek() == ';') {
        ++pos_;
        skip_ws();
      }
      const char c = peek();
      if (c == '.' || c == ']' || eof()) return;
    }
  }

  Term verb() {
    skip_ws();
    if (peek() == 'a') {
      const char n = peek(1);
      if (n == ' ' || n == '\t' || n == '\n' || n == '\r' || n == '<' || n == '[' || n == '"' || n == '(' ||
          n == '_') {
        ++pos_;
        return Term::iri(std::string(vocab::rdf) + "type");
      }
    }
    if (peek() == '<') return Term::iri(iriref());
    return Term::iri(prefixed_name());
  }

  void object_list(const Term& subj, const Term& pred) {
    for (;;) {
      const Term obj = object();
      doc_.triples.push_back({subj, pred, obj});
      skip_ws();
      if (peek() != ',') return;
      ++pos_;
    }
  }

  Term object() {
    skip_ws();
    const char c = peek();
    if (c == '<') return Term::iri(iriref());
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '(') return collection();
    if (c == '[') return blank_node_property_list();
    if (c == '"' || c == '\'') return rdf_literal();
    if (c == '+' || c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) return numeric();
    if (s_.substr(pos_, 4) == "true" && !continues_name(pos_ + 4)) {
      pos_ += 4;
      return Term::literal("true", std::string(vocab::xsd) + "boolean");
    }
    if (s_.substr(pos_, 5) == "false" && !continues_name(pos_ + 5)) {
      pos_ += 5;
      return Term::literal("false", std::string(vocab::xsd) + "boolean");
    }
    return Term::iri(prefixed_name());
  }

  bool continues_name(std::size_t at) const {
    if (at >= s_.size()) return false;
    const auto c = static_cast<unsigned char>(s_[at]);
    return is_pn_chars(c) || c == ':';
  }

  Term fresh_blank() { return Term::blank("genid" + std::to_string(blank_counter_++)); }

  Term blank_node_property_list() {
    expect('[');
    const Term node = fresh_blank();
    skip_ws();
    if (peek() != ']') predicate_object_list(node);
    expect(']');
    return node;
  }

  Term collection() {
    expect('(');
    std::vector<Term> items;
    for (;;) {
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        break;
      }
      if (eof()) fail("unterminated collection");
      items.push_back(object());
    }
    const Term nil = Term::iri(std::string(vocab::rdf) + "nil");
    if (items.empty()) return nil;
    const Term first_p = Term::iri(std::string(vocab::rdf) + "first");
    const Term rest_p = Term::iri(std::string(vocab::rdf) + "rest");
    const Term head = fresh_blank();
    Term cur = head;
    for (std::size_t i = 0; i < items.size(); ++i) {
      doc_.triples.push_back({cur, first_p, items[i]});
      const Term next = i + 1 < items.size() ? fresh_blank() : nil;
      doc_.triples.push_back({cur, rest_p, next});
      cur = next;
    }
    return head;
  }

  Term blank_label() {
    pos_ += 2;
    const std::size_t start = pos_;
    while (!eof()) {
      const auto c = static_cast<unsigned char>(s_[pos_]);
      if (is_pn_chars(c) || (c == '.' && pos_ + 1 < s_.size() && is_pn_chars(static_cast<unsigned char>(s_[pos_ + 1])))) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("empty blank node label");
    return Term::blank("u" + std::string(s_.substr(start, pos_ - start)));
  }

  char32_t hex_escape(int digits) {
    if (pos_ + static_cast<std::size_t>(digits) > s_.size()) fail("truncated \\u escape");
    char32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      const char c = s_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') {
        cp |= static_cast<char32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        cp |= static_cast<char32_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        cp |= static_cast<char32_t>(c - 'A' + 10);
      } else {
        fail("bad hex digit in escape");
      }
    }
    return cp;
  }

  std::string iriref() {
    if (peek() != '<') fail("expected IRI");
    ++pos_;
    std::string out;
    for (;;) {
      if (eof()) fail("unterminated IRI");
      const char c = s_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        const char e = peek();
        ++pos_;
        if (e == 'u') {
          append_utf8(out, hex_escape(4));
        } else if (e == 'U') {
          append_utf8(out, hex_escape(8));
        } else {
          fail("bad escape in IRI");
        }
        continue;
      }
      if (c == ' ' || c == '\n' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
        --pos_;
        fail("illegal character in IRI");
      }
      out += c;
    }
    return resolve(base_, out);
  }

  std::string prefixed_name() {
    const std::size_t start = pos_;
    while (!eof() && s_[pos_] != ':') {
      const auto c = static_cast<unsigned char>(s_[pos_]);
      if (!(is_pn_chars(c) || c == '.')) break;
      ++pos_;
    }
    if (peek() != ':') {
      pos_ = start;
      fail("expected a term");
    }
    const std::string prefix(s_.substr(start, pos_ - start));
    auto it = doc_.prefixes.find(prefix);
    if (it == doc_.prefixes.end()) {
      pos_ = start;
      fail("undeclared prefix '" + prefix + "'");
    }
    ++pos_;
    std::string local;
    bool first = true;
    while (!eof()) {
      const auto c = static_cast<unsigned char>(s_[pos_]);
      if (c == '%') {
        if (pos_ + 2 >= s_.size() || !std::isxdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
            !std::isxdigit(static_cast<unsigned char>(s_[pos_ + 2]))) {
          fail("bad percent escape in local name");
        }
        local.append(s_.substr(pos_, 3));
        pos_ += 3;
      } else if (c == '\\') {
        const char e = peek(1);
        if (std::string_view("_~.-!$&'()*+,;=/?#@%").find(e) == std::string_view::npos) fail("bad local escape");
        local += e;
        pos_ += 2;
      } else if (is_pn_chars(c) || c == ':' || (first && std::isdigit(c))) {
        local += static_cast<char>(c);
        ++pos_;
      } else if (c == '.' && !first) {
        // A dot belongs to the name only when more name characters follow.
        std::size_t k = pos_;
        while (k < s_.size() && s_[k] == '.') ++k;
        const auto n = k < s_.size() ? static_cast<unsigned char>(s_[k]) : 0;
        if (k < s_.size() && (is_pn_chars(n) || n == ':' || n == '%' || n == '\\')) {
          local.append(s_.substr(pos_, k - pos_));
          pos_ = k;
        } else {
          break;
        }
      } else {
        break;
      }
      first = false;
    }
    return it->second + local;
  }

  std::string string_body() {
    const char q = peek();
    const bool triple_quoted = peek(1) == q && peek(2) == q;
    pos_ += triple_quoted ? 3 : 1;
    std::string out;
    for (;;) {
      if (eof()) fail("unterminated string");
      const char c = s_[pos_];
      if (c == q) {
        if (!triple_quoted) {
          ++pos_;
          break;
        }
        if (peek(1) == q && peek(2) == q) {
          // Up to two extra quotes may end the content of a long string.
          std::size_t k = pos_;
          while (k < s_.size() && s_[k] == q) ++k;
          const std::size_t run = k - pos_;
          out.append(run - 3, q);
          pos_ = k;
          break;
        }
      }
      if (!triple_quoted && (c == '\n' || c == '\r')) fail("newline in short string");
      if (c == '\\') {
        ++pos_;
        const char e = peek();
        ++pos_;
        switch (e) {
          case 't': out += '\t'; break;
          case 'b': out += '\b'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u': append_utf8(out, hex_escape(4)); break;
          case 'U': append_utf8(out, hex_escape(8)); break;
          default: --pos_; fail("bad string escape");
        }
        continue;
      }
      out += c;
      ++pos_;
    }
    return out;
  }

  Term rdf_literal() {
    std::string lex = string_body();
    if (peek() == '@') {
      ++pos_;
      const std::size_t start = pos_;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) ++pos_;
      if (pos_ == start) fail("empty language tag");
      std::string lang(s_.substr(start, pos_ - start));
      for (auto& ch : lang) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      return Term::literal(std::move(lex), {}, std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      pos_ += 2;
      const std::string dt = peek() == '<' ? iriref() : prefixed_name();
      return Term::literal(std::move(lex), dt);
    }
    return Term::literal(std::move(lex));
  }

  Term numeric() {
    const std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    auto digits = [&] {
      const std::size_t b = pos_;
      while (!eof() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - b;
    };
    const std::size_t int_digits = digits();
    bool decimal = false, exponent = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      digits();
      decimal = true;
    } else if (peek() == '.' && int_digits > 0 && (peek(1) == 'e' || peek(1) == 'E')) {
      ++pos_;
      decimal = true;
    }
    if (peek() == 'e' || peek() == 'E') {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (digits() == 0) fail("bad exponent");
      exponent = true;
    }
    if (int_digits == 0 && !decimal) fail("bad number");
    std::string lex(s_.substr(start, pos_ - start));
    const char* dt = exponent ? "double" : decimal ? "decimal" : "integer";
    return Term::literal(std::move(lex), std::string(vocab::xsd) + dt);
  }
};

std::string escape_iri(std::string_view iri) {
  std::string out;
  for (char c : iri) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`' ||
        c == '\\') {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04X", u);
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

TurtleDocument parse_turtle(std::string_view text, std::string base) {
  return Parser(text, std::move(base)).run();
}

TurtleDocument load_turtle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return parse_turtle(text, "file://" + std::filesystem::absolute(path).string());
}

std::string escape_turtle_string(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

bool is_simple_local_name(std::string_view local) {
  if (local.empty()) return false;
  for (std::size_t i = 0; i < local.size(); ++i) {
    const auto c = static_cast<unsigned char>(local[i]);
    const bool ok = std::isalnum(c) || c == '_' || (c == '-' && i > 0);
    if (!ok || c >= 0x80) return false;
  }
  return true;
}

std::string to_ntriples(const Term& t) {
  switch (t.kind) {
    case Term::Kind::iri:
      return "<" + escape_iri(t.value) + ">";
    case Term::Kind::blank:
      return "_:" + t.value;
    case Term::Kind::literal: {
      std::string out = "\"" + escape_turtle_string(t.value) + "\"";
      if (!t.lang.empty()) {
        out += "@" + t.lang;
      } else if (!t.datatype.empty() && t.datatype != std::string(vocab::xsd) + "string") {
        out += "^^<" + escape_iri(t.datatype) + ">";
      }
      return out;
    }
  }
  return {};
}

std::string to_ntriples(const RdfTriple& t) {
  return to_ntriples(t.s) + " " + to_ntriples(t.p) + " " + to_ntriples(t.o) + " .";
}

}  // namespace mbkg
