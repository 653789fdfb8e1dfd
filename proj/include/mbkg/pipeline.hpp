#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mbkg/config.hpp"
#include "mbkg/entity_refine.hpp"
#include "mbkg/kg_emit.hpp"
#include "mbkg/linking.hpp"
#include "mbkg/preprocess.hpp"
#include "mbkg/relation_cluster.hpp"

namespace mbkg {

struct PipelineConfig {
  // [inputs]
  std::filesystem::path posts;
  std::filesystem::path parses;             // first pass, raw text
  std::filesystem::path parses_normalized;  // second pass, normalized text
  std::filesystem::path coref;              // optional
  std::filesystem::path vectors;
  std::filesystem::path patterns;           // optional; built-in target set otherwise

  // [preprocess]
  double dedup_threshold = 0.85;
  PreprocessOptions preprocess;

  // [refine]
  QuantifierMode quantifiers = QuantifierMode::annotate;
  bool keep_interrogative = false;
  bool linking = true;
  std::string linking_endpoint;
  double linking_confidence = 0.5;
  int linking_max_in_flight = 4;
  int linking_retries = 3;
  bool strict_linking = false;

  // [cluster]
  GridSpec grid;
  double band = 0.95;

  // [output] and [run]
  std::filesystem::path out_dir = "out";
  Namespaces namespaces;
  std::uint64_t seed = 7;
  int jobs = 1;
};

// Unknown sections or keys are rejected so typos surface early.
void apply_config(const ConfigFile& file, PipelineConfig& cfg);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

struct StageFiles {
  std::filesystem::path normalized, normalize_report;
  std::filesystem::path entities, triples, extract_report;
  std::filesystem::path graph, grid_csv, relation_map, statements, links, validation, refine_report;
};
StageFiles stage_files(const std::filesystem::path& out_dir);

struct NormalizeReport {
  std::size_t posts = 0;
  std::size_t retained = 0;
  std::vector<std::string> dropped_duplicates;
  std::map<std::string, std::size_t> removal_histogram;
};

struct ExtractReport {
  std::size_t posts = 0;
  std::size_t sentences = 0;
  std::size_t entities = 0;
  std::size_t triples = 0;
  // Share of entities holding a hashtag / mention token, a prepositional attachment, a quantifier.
  double hashtag_rate = 0, mention_rate = 0, prep_rate = 0, quantifier_rate = 0;
  // Share of triples with a resolved pronoun argument / negation / question flag.
  double anaphora_rate = 0, negation_rate = 0, interrogative_rate = 0;
};

struct RefineReport {
  std::size_t entities = 0;
  std::size_t statements = 0;
  std::size_t relation_forms = 0;
  std::size_t predicates = 0;
  std::size_t same_as_links = 0;
  std::size_t related_links = 0;
  std::string linking_status;  // "disabled", "ok", "unavailable"
  std::vector<std::string> warnings;
  std::optional<ClusteringConfig> chosen_config;
  std::optional<ClusteringResult> chosen_result;
  ValidationReport validation;
};

// In-memory building blocks, shared by the stages and the bindings.
std::vector<NormalizedPost> normalize_corpus(const std::vector<RawPost>& posts, const SentencesByPost& first_pass,
                                             const PreprocessOptions& opts = {});

struct Extraction {
  std::vector<CandidateEntity> entities;
  std::vector<SurfaceTriple> triples;
};
// Sentences of one post, in order; chains may be empty.
Extraction extract_post(const std::vector<ParsedSentence>& sentences, const std::vector<CorefChain>& chains,
                        const PatternSet& patterns = PatternSet::defaults());
ExtractReport summarize_extraction(const Extraction& x, std::size_t posts, std::size_t sentences);

// Stages communicate only through the files in cfg.out_dir.
NormalizeReport stage_normalize(const PipelineConfig& cfg);
ExtractReport stage_extract(const PipelineConfig& cfg);
// `client` replaces the configured HTTP client when given (tests).
RefineReport stage_refine_emit(const PipelineConfig& cfg, AnnotationClient* client = nullptr);

void to_json(nlohmann::json& j, const NormalizeReport& r);
void to_json(nlohmann::json& j, const ExtractReport& r);
void to_json(nlohmann::json& j, const RefineReport& r);
void to_json(nlohmann::json& j, const ClusteringConfig& c);

}  // namespace mbkg
