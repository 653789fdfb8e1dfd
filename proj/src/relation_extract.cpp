#include "mbkg/relation_extract.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "mbkg/text.hpp"
#include "mbkg/tree.hpp"

namespace mbkg {

PatternSet PatternSet::defaults() {
  PatternSet p;
  p.patterns = {{"nsubj", "dobj"},       {"acl", "relcl", "dobj"},   {"acl", "dobj"},
                {"nsubjpass", "agent", "pobj"}, {"nsubj", "dobj", "conj"}, {"nsubj", "conj"}};
  p.aliases = {{"acl:relcl", {"acl", "relcl"}}};
  return p;
}

PatternSet PatternSet::parse(std::istream& in) {
  PatternSet p;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    std::string normalized(body);
    for (auto& c : normalized) {
      if (c == ',' || c == '[' || c == ']' || c == ';') c = ' ';
    }
    auto words = split_ws(normalized);
    if (words.size() >= 3 && words[0] == "alias") {
      auto eq = std::find(words.begin(), words.end(), "=");
      if (eq == words.end() || eq != words.begin() + 2 || eq + 1 == words.end()) {
        throw InputError("pattern file line " + std::to_string(line_no) + ": expected 'alias LABEL = a b ...'");
      }
      p.aliases[words[1]] = LabelSequence(eq + 1, words.end());
      continue;
    }
    p.patterns.push_back(words);
  }
  if (p.patterns.empty()) throw InputError("pattern file lists no patterns");
  return p;
}

PatternSet PatternSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pattern file " + path.string());
  return parse(in);
}

std::string pattern_to_string(const LabelSequence& labels) { return join(labels, ","); }

DependencyPath tree_path(const ParsedSentence& s, int a, int b) {
  auto chain = [&](int x) {
    std::vector<int> up;
    for (int cur = x; cur != 0; cur = s.token(cur).head) up.push_back(cur);
    return up;
  };
  const auto up_a = chain(a);
  const auto up_b = chain(b);
  const std::set<int> on_b(up_b.begin(), up_b.end());

  DependencyPath path;
  std::size_t ia = 0;
  while (!on_b.count(up_a[ia])) ++ia;
  path.lca = up_a[ia];
  std::size_t ib = static_cast<std::size_t>(std::find(up_b.begin(), up_b.end(), path.lca) - up_b.begin());

  for (std::size_t k = 0; k < ia; ++k) {
    path.nodes.push_back(up_a[k]);
    path.labels.push_back(s.token(up_a[k]).deprel);
  }
  path.nodes.push_back(path.lca);
  for (std::size_t k = ib; k-- > 0;) {
    path.nodes.push_back(up_b[k]);
    path.labels.push_back(s.token(up_b[k]).deprel);
  }

  int best_depth = -1;
  for (int node : path.nodes) {
    if (!is_verbal(s.token(node).pos)) continue;
    const int d = depth_of(s, node);
    if (best_depth < 0 || d < best_depth) {
      best_depth = d;
      path.pivot = node;
    }
  }
  return path;
}

std::optional<std::size_t> match_target_pattern(const LabelSequence& labels, const PatternSet& patterns) {
  LabelSequence expanded;
  for (const auto& l : labels) {
    auto it = patterns.aliases.find(l);
    if (it == patterns.aliases.end()) {
      expanded.push_back(l);
    } else {
      expanded.insert(expanded.end(), it->second.begin(), it->second.end());
    }
  }
  for (std::size_t i = 0; i < patterns.patterns.size(); ++i) {
    if (patterns.patterns[i] == labels || patterns.patterns[i] == expanded) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> match_target_pattern(const DependencyPath& path, const PatternSet& patterns) {
  return match_target_pattern(path.labels, patterns);
}

bool aux_infinitive_filter(const ParsedSentence& s, const SurfaceTriple& triple) {
  if (triple.pattern != LabelSequence{"acl", "dobj"}) return true;
  for (const auto& t : s.tokens) {
    if (t.head == triple.pivot && t.deprel == "aux" && to_lower(t.surface) == "to") return false;
  }
  return true;
}

PredicateFlags detect_flags(const ParsedSentence& s, int pivot) {
  PredicateFlags f;
  for (const auto& t : s.tokens) {
    if (t.head != pivot) continue;
    if (t.deprel == "neg") f.negated = true;
    const auto lemma = to_lower(t.lemma);
    if (t.deprel == "advmod" && (lemma == "not" || lemma == "never" || lemma == "no" || lemma == "n't")) {
      f.negated = true;
    }
  }
  for (auto it = s.tokens.rbegin(); it != s.tokens.rend(); ++it) {
    if (it->kind == TokenKind::hashtag || it->kind == TokenKind::mention || it->kind == TokenKind::url) continue;
    f.interrogative = it->surface == "?";
    break;
  }
  return f;
}

namespace {

// A coordinated nominal conjunct takes the tree position of the first conjunct.
int attachment_point(const ParsedSentence& s, int anchor) {
  int cur = anchor;
  while (s.token(cur).deprel == "conj" && s.token(cur).head != 0 &&
         is_entity_head_candidate(s.token(s.token(cur).head)) && is_entity_head_candidate(s.token(cur))) {
    cur = s.token(cur).head;
  }
  return cur;
}

}  // namespace

std::vector<SurfaceTriple> extract_triples(const ParsedSentence& s, const std::vector<CandidateEntity>& entities,
                                           const PatternSet& patterns) {
  const auto children = child_lists(s);
  const LabelSequence passive{"nsubjpass", "agent", "pobj"};
  std::vector<const CandidateEntity*> local;
  for (const auto& e : entities) {
    if (e.sent_index == s.sent_index && e.post_id == s.post_id) local.push_back(&e);
  }

  std::vector<SurfaceTriple> out;
  std::set<std::tuple<int, int, int>> seen;
  for (const auto* m : local) {
    for (const auto* n : local) {
      if (m == n || m->anchor_index == n->anchor_index) continue;
      const int start = attachment_point(s, m->anchor_index);
      if (start == n->anchor_index) continue;
      auto path = tree_path(s, start, n->anchor_index);
      if (!path.has_pivot()) continue;
      auto which = match_target_pattern(path, patterns);
      if (!which) continue;

      SurfaceTriple t;
      t.post_id = s.post_id;
      t.sent_index = s.sent_index;
      t.pattern = patterns.patterns[*which];
      t.path = path;
      t.pivot = path.pivot;
      const bool is_passive = t.pattern == passive;
      t.subject = is_passive ? *n : *m;
      t.object = is_passive ? *m : *n;

      std::vector<int> verb_tokens{t.pivot};
      for (int c : children[static_cast<std::size_t>(t.pivot)]) {
        const auto& ct = s.token(c);
        if (ct.deprel == "prt" || (is_passive && ct.deprel == "agent")) verb_tokens.push_back(c);
      }
      std::sort(verb_tokens.begin(), verb_tokens.end());
      t.verb_span = {verb_tokens.front(), verb_tokens.back()};
      std::vector<std::string> surf, lem;
      for (int v : verb_tokens) {
        const auto& vt = s.token(v);
        surf.push_back(vt.surface);
        lem.push_back(v == t.pivot ? to_lower(vt.lemma) : to_lower(vt.surface));
      }
      t.verb_surface = join(surf, " ");
      t.verb_lemma = join(lem, " ");
      if (t.verb_lemma.empty()) t.verb_lemma = to_lower(t.verb_surface);

      if (!aux_infinitive_filter(s, t)) continue;
      auto flags = detect_flags(s, t.pivot);
      t.negated = flags.negated;
      t.interrogative = flags.interrogative;
      if (!seen.insert({t.subject.anchor_index, t.pivot, t.object.anchor_index}).second) continue;
      out.push_back(std::move(t));
    }
  }
  std::sort(out.begin(), out.end(), [](const SurfaceTriple& a, const SurfaceTriple& b) {
    return std::tie(a.subject.span, a.subject.anchor_index, a.object.span, a.object.anchor_index, a.pivot) <
           std::tie(b.subject.span, b.subject.anchor_index, b.object.span, b.object.anchor_index, b.pivot);
  });
  return out;
}

void to_json(nlohmann::json& j, const SurfaceTriple& t) {
  j = {{"post_id", t.post_id},
       {"sent_index", t.sent_index},
       {"subject", t.subject},
       {"object", t.object},
       {"verb_span", {t.verb_span.first, t.verb_span.second}},
       {"pivot", t.pivot},
       {"verb_surface", t.verb_surface},
       {"verb_lemma", t.verb_lemma},
       {"path", t.path.labels},
       {"path_nodes", t.path.nodes},
       {"lca", t.path.lca},
       {"pattern", t.pattern},
       {"negated", t.negated},
       {"interrogative", t.interrogative}};
}

void from_json(const nlohmann::json& j, SurfaceTriple& t) {
  t.post_id = j.at("post_id").get<std::string>();
  t.sent_index = j.at("sent_index").get<int>();
  t.subject = j.at("subject").get<CandidateEntity>();
  t.object = j.at("object").get<CandidateEntity>();
  t.verb_span = {j.at("verb_span").at(0).get<int>(), j.at("verb_span").at(1).get<int>()};
  t.pivot = j.at("pivot").get<int>();
  t.verb_surface = j.at("verb_surface").get<std::string>();
  t.verb_lemma = j.at("verb_lemma").get<std::string>();
  t.path.labels = j.at("path").get<LabelSequence>();
  t.path.nodes = j.value("path_nodes", std::vector<int>{});
  t.path.lca = j.value("lca", 0);
  t.path.pivot = t.pivot;
  t.pattern = j.at("pattern").get<LabelSequence>();
  t.negated = j.at("negated").get<bool>();
  t.interrogative = j.at("interrogative").get<bool>();
}

}  // namespace mbkg
