// mbkg: staged command-line driver for the knowledge-graph pipeline.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mbkg/kg_emit.hpp"
#include "mbkg/metrics.hpp"
#include "mbkg/pipeline.hpp"
#include "mbkg/turtle.hpp"

namespace {

using mbkg::PipelineConfig;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out_dir;
  std::string posts, parses, parses_normalized, coref, vectors, patterns;
  std::optional<double> dedup_threshold;
  std::string linking_endpoint;
  std::optional<double> linking_confidence;
  bool no_linking = false;
  bool strict_linking = false;
  std::string quantifiers;
  bool keep_interrogative = false;
  bool dump_entities = false;
  bool dump_triples = false;
};

PipelineConfig resolve(const Overrides& o) {
  PipelineConfig cfg;
  if (!o.config.empty()) cfg = mbkg::load_pipeline_config(o.config);
  auto set_path = [](const std::string& v, std::filesystem::path& out) {
    if (!v.empty()) out = v;
  };
  set_path(o.posts, cfg.posts);
  set_path(o.parses, cfg.parses);
  set_path(o.parses_normalized, cfg.parses_normalized);
  set_path(o.coref, cfg.coref);
  set_path(o.vectors, cfg.vectors);
  set_path(o.patterns, cfg.patterns);
  set_path(o.out_dir, cfg.out_dir);
  if (o.seed) cfg.seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.dedup_threshold) cfg.dedup_threshold = *o.dedup_threshold;
  if (!o.linking_endpoint.empty()) {
    // An explicit endpoint turns linking on, whatever the config says.
    cfg.linking_endpoint = o.linking_endpoint;
    cfg.linking = true;
  }
  if (o.linking_confidence) cfg.linking_confidence = *o.linking_confidence;
  if (o.no_linking) cfg.linking = false;
  if (o.strict_linking) cfg.strict_linking = true;
  if (o.quantifiers == "inline") cfg.quantifiers = mbkg::QuantifierMode::inline_key;
  if (o.quantifiers == "annotate") cfg.quantifiers = mbkg::QuantifierMode::annotate;
  if (o.keep_interrogative) cfg.keep_interrogative = true;
  return cfg;
}

std::string pct(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", r * 100.0);
  return buf;
}

void print_normalize(const mbkg::NormalizeReport& r) {
  std::cout << "posts: " << r.posts << ", retained after dedup: " << r.retained << '\n';
  std::cout << "removed spans by reason:\n";
  for (const auto& [reason, n] : r.removal_histogram) std::cout << "  " << reason << ": " << n << '\n';
}

void print_extract(const mbkg::ExtractReport& r) {
  std::cout << "posts: " << r.posts << ", sentences: " << r.sentences << '\n'
            << "entities: " << r.entities << " (hashtag " << pct(r.hashtag_rate) << ", mention "
            << pct(r.mention_rate) << ", prepositional " << pct(r.prep_rate) << ", quantitative "
            << pct(r.quantifier_rate) << ")\n"
            << "triples: " << r.triples << " (anaphora " << pct(r.anaphora_rate) << ", NEGATION "
            << pct(r.negation_rate) << ", INTERROGATIVE " << pct(r.interrogative_rate) << ")\n";
}

void print_refine(const mbkg::RefineReport& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "relation forms: " << r.relation_forms << ", predicates: " << r.predicates << '\n'
            << "statements: " << r.statements << ", entities: " << r.entities << '\n'
            << "linking: " << r.linking_status << " (sameAs " << r.same_as_links << ", related " << r.related_links
            << ")\n";
  if (r.chosen_result) {
    std::cout << "clustering: " << r.chosen_result->num_clusters << " clusters, score " << r.chosen_result->score
              << '\n';
  }
}

void dump_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::cout << in.rdbuf();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build a reified knowledge graph from parsed micro-blogging posts."};
  app.require_subcommand(1);
  Overrides o;

  app.add_option("--config", o.config, "TOML config file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "seed for every stochastic step");
  app.add_option("--jobs", o.jobs, "worker threads for the grid search")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", o.out_dir, "directory for stage outputs");
  app.add_option("--posts", o.posts, "posts JSON-lines");
  app.add_option("--parses", o.parses, "first-pass CoNLL-U (raw text)");
  app.add_option("--parses-normalized", o.parses_normalized, "second-pass CoNLL-U (normalized text)");
  app.add_option("--coref", o.coref, "coreference JSON-lines");
  app.add_option("--vectors", o.vectors, "word vectors, one `token v1 ... vD` per line");
  app.add_option("--patterns", o.patterns, "target dependency-path patterns, one per line");
  app.add_option("--dedup-threshold", o.dedup_threshold, "Levenshtein similarity for near-duplicates")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--linking-endpoint", o.linking_endpoint, "Spotlight-compatible annotation service URL");
  app.add_option("--linking-confidence", o.linking_confidence, "annotation confidence")->check(CLI::Range(0.0, 1.0));
  app.add_flag("--no-linking", o.no_linking, "skip entity linking");
  app.add_flag("--strict-linking", o.strict_linking, "fail (exit 3) when the linking service fails");
  app.add_option("--quantifiers", o.quantifiers, "keep quantifiers as annotations or inline in entity keys")
      ->check(CLI::IsMember({"inline", "annotate"}));
  app.add_flag("--keep-interrogative", o.keep_interrogative, "aggregate question triples too");
  app.add_flag("--dump-entities", o.dump_entities, "print extracted entities as JSON-lines");
  app.add_flag("--dump-triples", o.dump_triples, "print extracted triples as JSON-lines");

  auto* normalize = app.add_subcommand("normalize", "preprocess posts and drop near-duplicates");
  auto* extract = app.add_subcommand("extract", "extract entities and surface triples");
  auto* refine = app.add_subcommand("refine-emit", "refine entities, cluster relations, write the graph");
  auto* run_all = app.add_subcommand("run-all", "normalize, extract and refine-emit in sequence");
  std::string ttl;
  auto* validate = app.add_subcommand("validate", "audit a Turtle graph's statement structure");
  validate->add_option("ttl", ttl, "Turtle file")->required();
  std::string csv;
  auto* agreement = app.add_subcommand("agreement", "inter-annotator agreement from a rating CSV");
  agreement->add_option("csv", csv, "CSV, one row per item and one column per rater")->required();
  for (auto* sub : {normalize, extract, refine, run_all, validate, agreement}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) {
      const auto report = mbkg::validate_graph(std::filesystem::path(ttl));
      std::cout << nlohmann::json(report).dump(2) << '\n';
      return report.violations.empty() ? 0 : 2;
    }
    if (agreement->parsed()) {
      std::ifstream in(csv);
      if (!in) throw mbkg::InputError("cannot open " + csv);
      std::cout << nlohmann::json(mbkg::summarize_agreement(mbkg::read_rating_csv(in))).dump(2) << '\n';
      return 0;
    }

    const auto cfg = resolve(o);
    const auto files = mbkg::stage_files(cfg.out_dir);
    if (normalize->parsed() || run_all->parsed()) print_normalize(mbkg::stage_normalize(cfg));
    if (extract->parsed() || run_all->parsed()) {
      print_extract(mbkg::stage_extract(cfg));
      if (o.dump_entities) dump_file(files.entities);
      if (o.dump_triples) dump_file(files.triples);
    }
    if (refine->parsed() || run_all->parsed()) print_refine(mbkg::stage_refine_emit(cfg));
    return 0;
  } catch (const mbkg::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const mbkg::TurtleError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const mbkg::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 2;
  } catch (const mbkg::ServiceError& e) {
    std::cerr << "linking service failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
