#pragma once

#include <vector>

#include "mbkg/types.hpp"

namespace mbkg {

// children[i] lists the dependents of token i in index order; children[0] holds the root.
inline std::vector<std::vector<int>> child_lists(const ParsedSentence& s) {
  std::vector<std::vector<int>> children(static_cast<std::size_t>(s.size()) + 1);
  for (const auto& t : s.tokens) children[static_cast<std::size_t>(t.head)].push_back(t.index);
  return children;
}

inline int depth_of(const ParsedSentence& s, int index) {
  int d = 0;
  for (int cur = index; s.token(cur).head != 0; cur = s.token(cur).head) ++d;
  return d;
}

}  // namespace mbkg
