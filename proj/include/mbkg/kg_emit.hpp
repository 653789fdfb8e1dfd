#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mbkg/entity_refine.hpp"
#include "mbkg/linking.hpp"
#include "mbkg/relation_cluster.hpp"
#include "mbkg/relation_extract.hpp"
#include "mbkg/turtle.hpp"

namespace mbkg {

struct Statement {
  std::string subject_key;
  std::string predicate;  // lowercase lemma
  std::string object_key;
  std::size_t support = 0;
  std::set<std::string> tweet_ids;
  bool negated = false;
  std::set<std::string> subject_quantifiers;
  std::set<std::string> object_quantifiers;
};

struct AggregateOptions {
  KeyOptions keys;
  bool keep_interrogative = false;
};

// Rewrites surface triples to (key, predicate, key, negation) and merges duplicates.
// Output is sorted by (subject, predicate, object, negated).
std::vector<Statement> aggregate_statements(const std::vector<SurfaceTriple>& triples, const RelationMap& relmap,
                                            const EntityIndex& entities, const AggregateOptions& opts = {});

struct Namespaces {
  std::string resource = "http://example.org/dtsmm/resource/";
  std::string ontology = "http://example.org/dtsmm/ontology/";
};

// Spaces become '_'; ASCII outside the unreserved set is percent-encoded.
std::string encode_local_name(std::string_view key);
std::string mint_entity_uri(std::string_view key, std::string_view base);

struct KnowledgeGraph {
  std::vector<Statement> statements;
  std::map<std::string, NormalizedEntity> entities;
  std::vector<EntityLink> links;
  Namespaces namespaces;
};

// Keeps the entities the statements use and the links that land on them.
KnowledgeGraph build_graph(std::vector<Statement> statements, const EntityIndex& entities,
                           const std::vector<EntityLink>& links, Namespaces ns = {});

// Throws InvariantError when a statement or link names an unknown entity.
void check_graph(const KnowledgeGraph& graph);

// Every triple the writer emits, in output order.
std::vector<RdfTriple> graph_triples(const KnowledgeGraph& graph);

void emit_turtle(const KnowledgeGraph& graph, std::ostream& out);
void emit_turtle(const KnowledgeGraph& graph, const std::filesystem::path& path);

struct Violation {
  std::string node;
  std::string message;
};

struct ValidationReport {
  std::size_t triples = 0;
  std::size_t statements = 0;
  std::size_t entities = 0;
  std::size_t tweets = 0;
  std::size_t same_as_links = 0;
  std::size_t related_links = 0;
  std::vector<Violation> violations;
};

// Vocabulary is matched by local name, so any namespace binding validates.
ValidationReport validate_graph(const TurtleDocument& doc);
ValidationReport validate_graph(const std::filesystem::path& path);  // TurtleError on parse failure

void to_json(nlohmann::json& j, const Statement& s);
void to_json(nlohmann::json& j, const ValidationReport& r);

}  // namespace mbkg
