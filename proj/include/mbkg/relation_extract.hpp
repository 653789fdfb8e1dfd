#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mbkg/entity_extract.hpp"
#include "mbkg/types.hpp"

namespace mbkg {

using LabelSequence = std::vector<std::string>;

struct DependencyPath {
  LabelSequence labels;     // subject side up to the LCA, then down to the object
  std::vector<int> nodes;   // token indices from a to b, LCA included
  int lca = 0;
  int pivot = 0;            // highest VERB/AUX on the path; 0 when none

  bool has_pivot() const { return pivot != 0; }
};

struct PatternSet {
  std::vector<LabelSequence> patterns;
  // Composite labels read as several edges, e.g. "acl:relcl" -> [acl, relcl].
  std::map<std::string, LabelSequence> aliases;

  static PatternSet defaults();
  // One comma- or space-separated label sequence per line; `alias X = a b` lines add aliases.
  static PatternSet load(const std::filesystem::path& path);
  static PatternSet parse(std::istream& in);
};

std::string pattern_to_string(const LabelSequence& labels);

struct SurfaceTriple {
  CandidateEntity subject;
  CandidateEntity object;
  std::pair<int, int> verb_span{0, 0};
  int pivot = 0;
  std::string verb_surface;
  std::string verb_lemma;
  DependencyPath path;
  LabelSequence pattern;  // matched target pattern
  bool negated = false;
  bool interrogative = false;
  std::string post_id;
  int sent_index = 0;
};

DependencyPath tree_path(const ParsedSentence& sentence, int a, int b);

// Index into patterns.patterns of the first exact (alias-aware) match.
std::optional<std::size_t> match_target_pattern(const DependencyPath& path, const PatternSet& patterns);
std::optional<std::size_t> match_target_pattern(const LabelSequence& labels, const PatternSet& patterns);

// false drops an [acl, dobj] triple whose verb takes an infinitive "to" auxiliary.
bool aux_infinitive_filter(const ParsedSentence& sentence, const SurfaceTriple& triple);

struct PredicateFlags {
  bool negated = false;
  bool interrogative = false;
};
PredicateFlags detect_flags(const ParsedSentence& sentence, int pivot);

std::vector<SurfaceTriple> extract_triples(const ParsedSentence& sentence, const std::vector<CandidateEntity>& entities,
                                           const PatternSet& patterns = PatternSet::defaults());

void to_json(nlohmann::json& j, const SurfaceTriple& t);
void from_json(const nlohmann::json& j, SurfaceTriple& t);

}  // namespace mbkg
