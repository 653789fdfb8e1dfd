#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mbkg {

// Error families. The CLI maps them onto exit codes 1, 2 and 3.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ServiceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TokenKind { plain, hashtag, mention, url, emoticon, reserved };

std::string_view to_string(TokenKind kind);
TokenKind token_kind_from_string(std::string_view s);  // throws InputError

struct RawPost {
  std::string id;
  std::string text;
  std::optional<std::string> created_at;
  std::optional<std::string> lang;
};

struct ParsedToken {
  int index = 0;  // 1-based
  std::string surface;
  std::string lemma;
  std::string pos;  // UD upos
  int head = 0;     // 0 = root
  std::string deprel;
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  TokenKind kind = TokenKind::plain;
  std::string ent_type;  // upstream NER label, e.g. PERCENT; empty when absent
};

struct ParsedSentence {
  std::string post_id;
  int sent_index = 0;
  std::vector<ParsedToken> tokens;

  // Tokens are addressed by their 1-based index.
  const ParsedToken& token(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }
  int size() const { return static_cast<int>(tokens.size()); }
};

// (sent_index, token_index) with token_index 1-based.
using TokenPos = std::pair<int, int>;

struct CorefChain {
  std::string post_id;
  std::vector<TokenPos> mentions;
  TokenPos antecedent;
};

bool is_verbal(std::string_view pos);   // VERB or AUX
bool is_nominal(std::string_view pos);  // NOUN or PROPN

}  // namespace mbkg
