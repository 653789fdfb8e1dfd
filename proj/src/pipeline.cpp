#include "mbkg/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "mbkg/corpus_io.hpp"
#include "mbkg/entity_extract.hpp"
#include "mbkg/relation_extract.hpp"
#include "mbkg/text.hpp"

namespace mbkg {

namespace fs = std::filesystem;

void apply_config(const ConfigFile& f, PipelineConfig& c) {
  static const std::map<std::string, std::set<std::string>> kKnown = {
      {"inputs", {"posts", "parses", "parses_normalized", "coref", "vectors", "patterns"}},
      {"preprocess", {"dedup_threshold", "title_max_len", "retweet_markers"}},
      {"refine",
       {"quantifiers", "keep_interrogative", "linking", "linking_endpoint", "linking_confidence",
        "linking_max_in_flight", "linking_retries", "strict_linking"}},
      {"cluster", {"n_neighbors", "min_dist", "target_dim", "min_cluster_size", "min_samples", "band"}},
      {"output", {"out_dir", "resource_namespace", "ontology_namespace"}},
      {"run", {"seed", "jobs"}},
  };
  for (const auto& s : f.sections()) {
    if (s.empty()) throw InputError("config: keys must sit inside a [section]");
    auto it = kKnown.find(s);
    if (it == kKnown.end()) throw InputError("config: unknown section [" + s + "]");
    for (const auto& k : f.keys(s)) {
      if (!it->second.count(k)) throw InputError("config: unknown key " + s + "." + k);
    }
  }

  auto path = [&](const char* key, fs::path& out) {
    if (auto p = f.get_path("inputs", key)) out = *p;
  };
  path("posts", c.posts);
  path("parses", c.parses);
  path("parses_normalized", c.parses_normalized);
  path("coref", c.coref);
  path("vectors", c.vectors);
  path("patterns", c.patterns);

  if (auto v = f.get_double("preprocess", "dedup_threshold")) c.dedup_threshold = *v;
  if (auto v = f.get_int("preprocess", "title_max_len")) c.preprocess.title_max_len = static_cast<int>(*v);
  if (auto v = f.get_string_list("preprocess", "retweet_markers")) c.preprocess.retweet_markers = *v;

  if (auto v = f.get_string("refine", "quantifiers")) {
    if (*v == "annotate") {
      c.quantifiers = QuantifierMode::annotate;
    } else if (*v == "inline") {
      c.quantifiers = QuantifierMode::inline_key;
    } else {
      throw InputError("config refine.quantifiers must be \"annotate\" or \"inline\"");
    }
  }
  if (auto v = f.get_bool("refine", "keep_interrogative")) c.keep_interrogative = *v;
  if (auto v = f.get_bool("refine", "linking")) c.linking = *v;
  if (auto v = f.get_string("refine", "linking_endpoint")) c.linking_endpoint = *v;
  if (auto v = f.get_double("refine", "linking_confidence")) c.linking_confidence = *v;
  if (auto v = f.get_int("refine", "linking_max_in_flight")) c.linking_max_in_flight = static_cast<int>(*v);
  if (auto v = f.get_int("refine", "linking_retries")) c.linking_retries = static_cast<int>(*v);
  if (auto v = f.get_bool("refine", "strict_linking")) c.strict_linking = *v;

  auto ints = [&](const char* key, std::vector<int>& out) {
    if (auto v = f.get_int_list("cluster", key)) {
      out.clear();
      for (auto x : *v) out.push_back(static_cast<int>(x));
    }
  };
  ints("n_neighbors", c.grid.n_neighbors);
  ints("target_dim", c.grid.target_dim);
  ints("min_cluster_size", c.grid.min_cluster_size);
  ints("min_samples", c.grid.min_samples);
  if (auto v = f.get_double_list("cluster", "min_dist")) c.grid.min_dist = *v;
  if (auto v = f.get_double("cluster", "band")) c.band = *v;

  if (auto v = f.get_path("output", "out_dir")) c.out_dir = *v;
  if (auto v = f.get_string("output", "resource_namespace")) c.namespaces.resource = *v;
  if (auto v = f.get_string("output", "ontology_namespace")) c.namespaces.ontology = *v;

  if (auto v = f.get_int("run", "seed")) c.seed = static_cast<std::uint64_t>(*v);
  if (auto v = f.get_int("run", "jobs")) c.jobs = static_cast<int>(*v);
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  PipelineConfig cfg;
  apply_config(ConfigFile::load(path), cfg);
  return cfg;
}

StageFiles stage_files(const fs::path& d) {
  return {d / "normalized.jsonl", d / "normalize_report.json", d / "entities.jsonl",   d / "triples.jsonl",
          d / "extract_report.json", d / "graph.ttl",           d / "grid.csv",         d / "relation_map.tsv",
          d / "statements.jsonl",    d / "links.jsonl",         d / "validation.json",  d / "refine_report.json"};
}

namespace {

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw InputError(std::string("no ") + what + " file configured");
  if (!fs::exists(p)) throw InputError(std::string(what) + " file not found: " + p.string());
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

void write_json(const fs::path& p, const nlohmann::json& j) {
  auto out = open_out(p);
  out << j.dump(2) << '\n';
}

template <typename T>
void write_jsonl(const fs::path& p, const std::vector<T>& items) {
  auto out = open_out(p);
  for (const auto& item : items) out << nlohmann::json(item).dump() << '\n';
}

template <typename T>
std::vector<T> read_jsonl(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string());
  std::vector<T> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<T>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError(p.filename().string() + " line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<NormalizedPost> read_normalized_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string() + " (run the normalize stage first)");
  return read_normalized(in);
}

double rate(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

}  // namespace

std::vector<NormalizedPost> normalize_corpus(const std::vector<RawPost>& posts, const SentencesByPost& first_pass,
                                             const PreprocessOptions& opts) {
  std::vector<NormalizedPost> out;
  out.reserve(posts.size());
  for (const auto& p : posts) {
    auto it = first_pass.find(p.id);
    if (it == first_pass.end()) throw InputError("no first-pass parse for post " + p.id);
    out.push_back(normalize_post(p, it->second, opts));
  }
  return out;
}

NormalizeReport stage_normalize(const PipelineConfig& cfg) {
  require_file(cfg.posts, "posts");
  require_file(cfg.parses, "first-pass parse");
  const auto posts = load_posts(cfg.posts);
  const auto parses = load_conllu(cfg.parses);
  const auto normalized = normalize_corpus(posts, parses, cfg.preprocess);

  std::unordered_map<std::string, std::string> texts;
  for (const auto& n : normalized) texts.emplace(n.post_id, n.normalized_text);
  const auto kept = dedup_corpus(posts, texts, cfg.dedup_threshold);
  std::set<std::string> kept_ids;
  for (const auto& p : kept) kept_ids.insert(p.id);

  NormalizeReport r;
  r.posts = posts.size();
  r.retained = kept.size();
  std::vector<NormalizedPost> retained;
  for (const auto& n : normalized) {
    if (kept_ids.count(n.post_id)) {
      retained.push_back(n);
    } else {
      r.dropped_duplicates.push_back(n.post_id);
    }
  }
  r.removal_histogram = removal_histogram(retained);

  const auto files = stage_files(cfg.out_dir);
  {
    auto out = open_out(files.normalized);
    write_normalized(out, retained);
  }
  write_json(files.normalize_report, r);
  return r;
}

Extraction extract_post(const std::vector<ParsedSentence>& sentences, const std::vector<CorefChain>& chains,
                        const PatternSet& patterns) {
  Extraction x;
  for (const auto& s : sentences) {
    auto e = extract_entities(s);
    x.entities.insert(x.entities.end(), e.begin(), e.end());
  }
  if (!chains.empty()) x.entities = resolve_anaphora(x.entities, chains, sentences);
  for (const auto& s : sentences) {
    auto t = extract_triples(s, x.entities, patterns);
    x.triples.insert(x.triples.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
  }
  return x;
}

ExtractReport summarize_extraction(const Extraction& x, std::size_t posts, std::size_t sentences) {
  ExtractReport r;
  r.posts = posts;
  r.sentences = sentences;
  r.entities = x.entities.size();
  r.triples = x.triples.size();
  std::size_t tag = 0, mention = 0, prep = 0, quant = 0;
  for (const auto& e : x.entities) {
    auto has = [&](TokenKind k) {
      return std::any_of(e.tokens.begin(), e.tokens.end(), [k](const EntityToken& t) { return t.kind == k; });
    };
    tag += has(TokenKind::hashtag);
    mention += has(TokenKind::mention);
    prep += e.has_prep;
    quant += e.quantifier_span.has_value();
  }
  std::size_t ana = 0, neg = 0, q = 0;
  for (const auto& t : x.triples) {
    ana += t.subject.kind == EntityKind::anaphora || t.object.kind == EntityKind::anaphora;
    neg += t.negated;
    q += t.interrogative;
  }
  r.hashtag_rate = rate(tag, r.entities);
  r.mention_rate = rate(mention, r.entities);
  r.prep_rate = rate(prep, r.entities);
  r.quantifier_rate = rate(quant, r.entities);
  r.anaphora_rate = rate(ana, r.triples);
  r.negation_rate = rate(neg, r.triples);
  r.interrogative_rate = rate(q, r.triples);
  return r;
}

ExtractReport stage_extract(const PipelineConfig& cfg) {
  const auto files = stage_files(cfg.out_dir);
  require_file(cfg.parses_normalized, "second-pass parse");
  const auto normalized = read_normalized_file(files.normalized);
  const auto parses = load_conllu(cfg.parses_normalized);
  ChainsByPost chains;
  if (!cfg.coref.empty()) {
    require_file(cfg.coref, "coreference");
    chains = load_coref(cfg.coref);
  }
  const PatternSet patterns = cfg.patterns.empty() ? PatternSet::defaults() : PatternSet::load(cfg.patterns);

  Extraction all;
  std::size_t posts = 0, sentences = 0;
  for (const auto& n : normalized) {
    auto it = parses.find(n.post_id);
    if (it == parses.end()) {
      if (trim(n.normalized_text).empty()) continue;
      throw InputError("no second-pass parse for post " + n.post_id);
    }
    for (const auto& s : it->second) {
      for (const auto& t : s.tokens) {
        if (t.end_char > n.normalized_text.size() ||
            n.normalized_text.compare(t.start_char, t.end_char - t.start_char, t.surface) != 0) {
          throw InputError("post " + n.post_id + " sentence " + std::to_string(s.sent_index) + " token " +
                           std::to_string(t.index) + ": offsets do not address '" + t.surface +
                           "' in the normalized text");
        }
      }
    }
    ++posts;
    sentences += it->second.size();
    auto c = chains.find(n.post_id);
    auto x = extract_post(it->second, c == chains.end() ? std::vector<CorefChain>{} : c->second, patterns);
    all.entities.insert(all.entities.end(), x.entities.begin(), x.entities.end());
    all.triples.insert(all.triples.end(), x.triples.begin(), x.triples.end());
  }

  write_jsonl(files.entities, all.entities);
  write_jsonl(files.triples, all.triples);
  auto r = summarize_extraction(all, posts, sentences);
  write_json(files.extract_report, r);
  return r;
}

RefineReport stage_refine_emit(const PipelineConfig& cfg, AnnotationClient* client) {
  const auto files = stage_files(cfg.out_dir);
  if (!fs::exists(files.entities) || !fs::exists(files.triples)) {
    throw InputError("extract outputs missing in " + cfg.out_dir.string() + " (run the extract stage first)");
  }
  require_file(cfg.vectors, "word vector");
  const auto entities = read_jsonl<CandidateEntity>(files.entities);
  const auto triples = read_jsonl<SurfaceTriple>(files.triples);
  const auto table = load_word_vectors(cfg.vectors);

  RefineReport r;
  KeyOptions keys;
  keys.quantifiers = cfg.quantifiers;
  const auto index = merge_entities(entities, keys);

  const auto clustering = cluster_relations(triples, table, expand_grid(cfg.grid, cfg.seed), cfg.jobs, cfg.band);
  r.relation_forms = clustering.vectors.size();
  if (clustering.chosen) {
    r.chosen_config = clustering.grid.rows[*clustering.chosen].config;
    r.chosen_result = clustering.grid.rows[*clustering.chosen].result;
    r.chosen_result->labels.clear();
  } else if (!clustering.vectors.empty()) {
    r.warnings.push_back("no clustering configuration succeeded; every relation maps to its own lemma");
  }

  AggregateOptions agg;
  agg.keys = keys;
  agg.keep_interrogative = cfg.keep_interrogative;
  auto statements = aggregate_statements(triples, clustering.map, index, agg);
  {
    std::set<std::string> preds;
    for (const auto& s : statements) preds.insert(s.predicate);
    r.predicates = preds.size();
  }

  // Linking runs over the sentences that contribute statements.
  std::vector<EntityLink> links;
  std::unique_ptr<AnnotationClient> owned;
  if (!cfg.linking) {
    r.linking_status = "disabled";
  } else if (client == nullptr && cfg.linking_endpoint.empty()) {
    r.linking_status = "disabled";
    r.warnings.push_back("no linking endpoint configured; graph left unlinked");
  } else {
    if (client == nullptr) {
      SpotlightOptions so;
      so.endpoint = cfg.linking_endpoint;
      so.max_retries = cfg.linking_retries;
      owned = std::make_unique<SpotlightClient>(so);
      client = owned.get();
    }
    require_file(cfg.parses_normalized, "second-pass parse");
    const auto parses = load_conllu(cfg.parses_normalized);
    std::map<std::pair<std::string, int>, std::vector<CandidateEntity>> by_sentence;
    for (const auto& t : triples) {
      if (t.interrogative && !cfg.keep_interrogative) continue;
      auto& v = by_sentence[{t.post_id, t.sent_index}];
      v.push_back(t.subject);
      v.push_back(t.object);
    }
    std::vector<RewrittenSentence> rewritten;
    for (const auto& [where, ents] : by_sentence) {
      auto p = parses.find(where.first);
      if (p == parses.end()) continue;
      for (const auto& s : p->second) {
        if (s.sent_index == where.second) rewritten.push_back(rewrite_for_linking(s, ents, index, keys));
      }
    }
    auto outcome = link_all(rewritten, *client, cfg.linking_confidence, cfg.linking_max_in_flight);
    r.warnings.insert(r.warnings.end(), outcome.warnings.begin(), outcome.warnings.end());
    if (!outcome.service_available) {
      if (cfg.strict_linking) throw ServiceError(outcome.warnings.empty() ? "linking failed" : outcome.warnings.front());
      r.linking_status = "unavailable";
    } else {
      if (cfg.strict_linking && outcome.sentences_failed > 0) {
        throw ServiceError(std::to_string(outcome.sentences_failed) + " sentences failed linking");
      }
      r.linking_status = "ok";
      links = std::move(outcome.links);
    }
  }

  const auto graph = build_graph(std::move(statements), index, links, cfg.namespaces);
  r.entities = graph.entities.size();
  r.statements = graph.statements.size();
  for (const auto& l : graph.links) (l.kind == LinkKind::same_as ? r.same_as_links : r.related_links)++;

  emit_turtle(graph, files.graph);
  {
    auto out = open_out(files.grid_csv);
    write_grid_csv(out, clustering.grid.rows);
  }
  {
    auto out = open_out(files.relation_map);
    write_relation_map_tsv(out, clustering.map);
  }
  write_jsonl(files.statements, graph.statements);
  write_jsonl(files.links, graph.links);
  r.validation = validate_graph(files.graph);
  write_json(files.validation, r.validation);
  write_json(files.refine_report, r);
  if (!r.validation.violations.empty()) {
    throw InvariantError("emitted graph has " + std::to_string(r.validation.violations.size()) + " violations");
  }
  return r;
}

void to_json(nlohmann::json& j, const NormalizeReport& r) {
  j = {{"posts", r.posts},
       {"retained", r.retained},
       {"dropped_duplicates", r.dropped_duplicates},
       {"removal_histogram", r.removal_histogram}};
}

void to_json(nlohmann::json& j, const ExtractReport& r) {
  j = {{"posts", r.posts},
       {"sentences", r.sentences},
       {"entities",
        {{"total", r.entities},
         {"hashtag_rate", r.hashtag_rate},
         {"mention_rate", r.mention_rate},
         {"prep_rate", r.prep_rate},
         {"quantifier_rate", r.quantifier_rate}}},
       {"triples",
        {{"total", r.triples},
         {"anaphora_rate", r.anaphora_rate},
         {"negation_rate", r.negation_rate},
         {"interrogative_rate", r.interrogative_rate}}}};
}

void to_json(nlohmann::json& j, const ClusteringConfig& c) {
  j = {{"n_neighbors", c.n_neighbors},           {"min_dist", c.min_dist},       {"target_dim", c.target_dim},
       {"min_cluster_size", c.min_cluster_size}, {"min_samples", c.min_samples}, {"seed", c.seed}};
}

void to_json(nlohmann::json& j, const RefineReport& r) {
  j = {{"entities", r.entities},
       {"statements", r.statements},
       {"relation_forms", r.relation_forms},
       {"predicates", r.predicates},
       {"same_as_links", r.same_as_links},
       {"related_links", r.related_links},
       {"linking", r.linking_status},
       {"warnings", r.warnings},
       {"validation", r.validation}};
  if (r.chosen_config) {
    j["clustering"] = {{"config", *r.chosen_config},
                       {"num_clusters", r.chosen_result->num_clusters},
                       {"silhouette_mean", r.chosen_result->silhouette_mean},
                       {"clustered_fraction", r.chosen_result->clustered_fraction},
                       {"score", r.chosen_result->score}};
  } else {
    j["clustering"] = nullptr;
  }
}

}  // namespace mbkg
