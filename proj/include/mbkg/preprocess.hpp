#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mbkg/types.hpp"

namespace mbkg {

enum class RemovalReason { emoticon, reserved, url, leading_mentions, tag_sequence, title_prefix };

std::string_view to_string(RemovalReason r);
RemovalReason removal_reason_from_string(std::string_view s);

struct RemovedSpan {
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  RemovalReason reason = RemovalReason::emoticon;

  friend bool operator==(const RemovedSpan&, const RemovedSpan&) = default;
};

struct NormalizedPost {
  std::string post_id;
  std::string normalized_text;
  std::vector<RemovedSpan> removed_spans;
};

struct PreprocessOptions {
  std::vector<std::string> retweet_markers{"RT", "rt"};
  int title_max_len = 6;
};

// Each rule returns the surviving tokens, original indices and offsets kept.
// The result is a token stream, not a tree: heads may point at dropped tokens.
ParsedSentence strip_nonsyntactic(const ParsedSentence& sentence);
ParsedSentence drop_leading_mentions(const ParsedSentence& sentence, const PreprocessOptions& opts = {});
ParsedSentence truncate_tag_sequences(const ParsedSentence& sentence);
ParsedSentence drop_title_prefix(const ParsedSentence& sentence, int max_len = 6);

// Fallback for tokenizers that do not flag emoticons.
bool looks_like_emoticon(std::string_view surface);

// Throws InputError when a token's offsets do not address its surface in post.text.
NormalizedPost normalize_post(const RawPost& post, const std::vector<ParsedSentence>& first_pass,
                              const PreprocessOptions& opts = {});

// Removed-span counts per reason; every reason is present, zero or not.
std::map<std::string, std::size_t> removal_histogram(const std::vector<NormalizedPost>& posts);

void write_normalized(std::ostream& out, const std::vector<NormalizedPost>& posts);
std::vector<NormalizedPost> read_normalized(std::istream& in);

}  // namespace mbkg
