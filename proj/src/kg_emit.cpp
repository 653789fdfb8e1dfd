#include "mbkg/kg_emit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "mbkg/text.hpp"

namespace mbkg {

std::vector<Statement> aggregate_statements(const std::vector<SurfaceTriple>& triples, const RelationMap& relmap,
                                            const EntityIndex& entities, const AggregateOptions& opts) {
  std::map<std::tuple<std::string, std::string, std::string, bool>, Statement> merged;
  for (const auto& t : triples) {
    if (t.interrogative && !opts.keep_interrogative) continue;
    const auto s = entities.key_of(t.subject, opts.keys);
    const auto o = entities.key_of(t.object, opts.keys);
    if (!s || !o) continue;
    const auto& predicate = relmap.at(to_lower(t.verb_surface));
    auto& st = merged[{*s, predicate, *o, t.negated}];
    st.subject_key = *s;
    st.predicate = predicate;
    st.object_key = *o;
    st.negated = t.negated;
    st.tweet_ids.insert(t.post_id);
    if (opts.keys.quantifiers == QuantifierMode::annotate) {
      if (auto q = quantifier_text(t.subject)) st.subject_quantifiers.insert(*q);
      if (auto q = quantifier_text(t.object)) st.object_quantifiers.insert(*q);
    }
  }
  std::vector<Statement> out;
  out.reserve(merged.size());
  for (auto& [_, st] : merged) {
    st.support = st.tweet_ids.size();
    out.push_back(std::move(st));
  }
  return out;
}

std::string encode_local_name(std::string_view key) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : key) {
    const auto u = static_cast<unsigned char>(c);
    if (c == ' ') {
      out += '_';
    } else if (std::isalnum(u) || c == '-' || c == '.' || c == '_' || c == '~' || u >= 0x80) {
      out += c;
    } else {
      out += '%';
      out += kHex[u >> 4];
      out += kHex[u & 0xF];
    }
  }
  return out;
}

std::string mint_entity_uri(std::string_view key, std::string_view base) {
  return std::string(base) + encode_local_name(key);
}

KnowledgeGraph build_graph(std::vector<Statement> statements, const EntityIndex& entities,
                           const std::vector<EntityLink>& links, Namespaces ns) {
  KnowledgeGraph g;
  g.namespaces = std::move(ns);
  g.statements = std::move(statements);
  for (const auto& st : g.statements) {
    for (const auto* key : {&st.subject_key, &st.object_key}) {
      auto it = entities.entities.find(*key);
      if (it == entities.entities.end()) throw InvariantError("statement uses unknown entity '" + *key + "'");
      g.entities.emplace(*key, it->second);
    }
  }
  for (const auto& l : links) {
    if (g.entities.count(l.entity_key)) g.links.push_back(l);
  }
  g.links = merge_links(std::move(g.links));
  return g;
}

void check_graph(const KnowledgeGraph& g) {
  for (const auto& st : g.statements) {
    if (st.subject_key.empty() || st.object_key.empty()) throw InvariantError("statement with an empty entity key");
    if (!g.entities.count(st.subject_key) || !g.entities.count(st.object_key)) {
      throw InvariantError("statement references an entity missing from the graph");
    }
    if (st.support != st.tweet_ids.size() || st.support == 0) {
      throw InvariantError("statement support does not match its tweets");
    }
  }
  for (const auto& l : g.links) {
    if (!g.entities.count(l.entity_key)) throw InvariantError("link for unknown entity '" + l.entity_key + "'");
  }
}

namespace {

struct Vocab {
  std::string res, ont;
  std::string type = std::string(vocab::rdf) + "type";

  Term o(std::string_view local) const { return Term::iri(ont + std::string(local)); }
  static Term w3(std::string_view ns, std::string_view local) { return Term::iri(std::string(ns) + std::string(local)); }
};

Term int_literal(std::size_t v) { return Term::literal(std::to_string(v), std::string(vocab::xsd) + "integer"); }
Term bool_literal(bool v) { return Term::literal(v ? "true" : "false", std::string(vocab::xsd) + "boolean"); }

// rdf:type first, then by predicate and object.
void push_node(std::vector<RdfTriple>& out, const Term& subject, std::vector<std::pair<Term, Term>> po,
               const std::string& type_iri) {
  std::stable_sort(po.begin(), po.end(), [&](const auto& a, const auto& b) {
    const bool at = a.first.value == type_iri, bt = b.first.value == type_iri;
    if (at != bt) return at;
    return std::tie(a.first.value, a.second) < std::tie(b.first.value, b.second);
  });
  for (auto& [p, o] : po) out.push_back({subject, std::move(p), std::move(o)});
}

}  // namespace

std::vector<RdfTriple> graph_triples(const KnowledgeGraph& g) {
  check_graph(g);
  const Vocab v{g.namespaces.resource, g.namespaces.ontology};
  const Term a = Term::iri(v.type);
  const Term owl_class = Vocab::w3(vocab::owl, "Class");
  const Term label = Vocab::w3(vocab::rdfs, "label");
  const Term domain = Vocab::w3(vocab::rdfs, "domain");
  const Term range = Vocab::w3(vocab::rdfs, "range");
  std::vector<RdfTriple> out;

  // Ontology header.
  push_node(out, v.o("Statement"), {{a, owl_class}, {label, Term::literal("Statement")}}, v.type);
  push_node(out, v.o("Entity"), {{a, owl_class}, {label, Term::literal("Entity")}}, v.type);
  push_node(out, v.o("Tweet"),
            {{a, owl_class},
             {label, Term::literal("Tweet")},
             {Vocab::w3(vocab::rdfs, "subClassOf"), Vocab::w3(vocab::schema, "SocialMediaPosting")}},
            v.type);
  const Term datatype_prop = Vocab::w3(vocab::owl, "DatatypeProperty");
  const Term object_prop = Vocab::w3(vocab::owl, "ObjectProperty");
  push_node(out, v.o("comesfromTweet"), {{a, object_prop}, {domain, v.o("Statement")}, {range, v.o("Tweet")}},
            v.type);
  push_node(out, v.o("hasSupport"),
            {{a, datatype_prop}, {domain, v.o("Statement")}, {range, Vocab::w3(vocab::xsd, "integer")}}, v.type);
  push_node(out, v.o("negation"),
            {{a, datatype_prop}, {domain, v.o("Statement")}, {range, Vocab::w3(vocab::xsd, "boolean")}}, v.type);
  for (const char* q : {"objectQuantifier", "subjectQuantifier"}) {
    push_node(out, v.o(q), {{a, datatype_prop}, {domain, v.o("Statement")}, {range, Vocab::w3(vocab::xsd, "string")}},
              v.type);
  }

  std::set<std::string> predicates;
  for (const auto& st : g.statements) predicates.insert(st.predicate);
  for (const auto& p : predicates) {
    push_node(out, v.o(encode_local_name(p)), {{a, object_prop}, {label, Term::literal(display_label(p))}}, v.type);
  }

  std::set<std::string> tweets;
  std::size_t n = 0;
  for (const auto& st : g.statements) {
    std::vector<std::pair<Term, Term>> po{{a, v.o("Statement")},
                                          {a, Vocab::w3(vocab::rdf, "Statement")},
                                          {v.o("hasSupport"), int_literal(st.support)},
                                          {v.o("negation"), bool_literal(st.negated)},
                                          {Vocab::w3(vocab::rdf, "subject"), Term::iri(mint_entity_uri(st.subject_key, v.res))},
                                          {Vocab::w3(vocab::rdf, "predicate"), v.o(encode_local_name(st.predicate))},
                                          {Vocab::w3(vocab::rdf, "object"), Term::iri(mint_entity_uri(st.object_key, v.res))}};
    for (const auto& id : st.tweet_ids) {
      po.emplace_back(v.o("comesfromTweet"), Term::iri(v.res + "tweet_" + encode_local_name(id)));
      tweets.insert(id);
    }
    for (const auto& q : st.subject_quantifiers) po.emplace_back(v.o("subjectQuantifier"), Term::literal(q));
    for (const auto& q : st.object_quantifiers) po.emplace_back(v.o("objectQuantifier"), Term::literal(q));
    push_node(out, v.o("statement_" + std::to_string(++n)), std::move(po), v.type);
  }

  std::map<std::string, std::vector<const EntityLink*>> links_by_key;
  for (const auto& l : g.links) links_by_key[l.entity_key].push_back(&l);
  std::map<std::string, std::string> entity_iris;  // IRI -> key, canonical order
  for (const auto& [key, _] : g.entities) entity_iris.emplace(mint_entity_uri(key, v.res), key);
  for (const auto& [iri, key] : entity_iris) {
    std::vector<std::pair<Term, Term>> po{{a, v.o("Entity")}, {label, Term::literal(key)}};
    for (const auto* l : links_by_key[key]) {
      po.emplace_back(l->kind == LinkKind::same_as ? Vocab::w3(vocab::owl, "sameAs") : Vocab::w3(vocab::skos, "related"),
                      Term::iri(l->resource_uri));
    }
    push_node(out, Term::iri(iri), std::move(po), v.type);
  }

  std::set<std::string> tweet_iris;
  for (const auto& id : tweets) tweet_iris.insert(v.res + "tweet_" + encode_local_name(id));
  for (const auto& iri : tweet_iris) push_node(out, Term::iri(iri), {{a, v.o("Tweet")}}, v.type);
  return out;
}

namespace {

class TermWriter {
 public:
  explicit TermWriter(const Namespaces& ns)
      : prefixes_{{"dtsmm", ns.resource},          {"dtsmm-ont", ns.ontology},       {"owl", std::string(vocab::owl)},
                  {"rdf", std::string(vocab::rdf)}, {"rdfs", std::string(vocab::rdfs)}, {"schema", std::string(vocab::schema)},
                  {"skos", std::string(vocab::skos)}, {"xsd", std::string(vocab::xsd)}} {}

  const std::vector<std::pair<std::string, std::string>>& prefixes() const { return prefixes_; }

  std::string iri(const std::string& value) const {
    // Longest matching namespace wins (the ontology IRI may extend the resource IRI).
    const std::pair<std::string, std::string>* best = nullptr;
    for (const auto& p : prefixes_) {
      if (value.size() > p.second.size() && value.compare(0, p.second.size(), p.second) == 0 &&
          (!best || p.second.size() > best->second.size())) {
        best = &p;
      }
    }
    if (best) {
      const auto local = std::string_view(value).substr(best->second.size());
      if (is_simple_local_name(local)) return best->first + ":" + std::string(local);
    }
    return to_ntriples(Term::iri(value));
  }

  std::string term(const Term& t) const {
    if (t.kind == Term::Kind::iri) return iri(t.value);
    if (t.kind == Term::Kind::literal) {
      if (t.datatype == std::string(vocab::xsd) + "integer" || t.datatype == std::string(vocab::xsd) + "boolean") {
        return t.value;
      }
    }
    return to_ntriples(t);
  }

 private:
  std::vector<std::pair<std::string, std::string>> prefixes_;
};

}  // namespace

void emit_turtle(const KnowledgeGraph& g, std::ostream& out) {
  const auto triples = graph_triples(g);
  const TermWriter w(g.namespaces);
  for (const auto& [prefix, iri] : w.prefixes()) out << "@prefix " << prefix << ": <" << iri << "> .\n";
  const std::string type_iri = std::string(vocab::rdf) + "type";
  for (std::size_t i = 0; i < triples.size();) {
    const auto& subject = triples[i].s;
    out << '\n' << w.term(subject);
    std::size_t j = i;
    bool first_pred = true;
    while (j < triples.size() && triples[j].s == subject) {
      const auto& pred = triples[j].p;
      out << (first_pred ? " " : " ;\n    ") << (pred.value == type_iri ? "a" : w.term(pred)) << ' ';
      first_pred = false;
      bool first_obj = true;
      while (j < triples.size() && triples[j].s == subject && triples[j].p == pred) {
        out << (first_obj ? "" : ", ") << w.term(triples[j].o);
        first_obj = false;
        ++j;
      }
    }
    out << " .\n";
    i = j;
  }
}

void emit_turtle(const KnowledgeGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  emit_turtle(g, out);
  if (!out) throw InputError("failed writing " + path.string());
}

namespace {

std::string local_name(std::string_view iri) {
  const auto cut = iri.find_last_of("#/");
  return std::string(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
}

bool local_is(std::string_view iri, std::string_view name) {
  const auto l = local_name(iri);
  return l.size() == name.size() && std::equal(l.begin(), l.end(), name.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

ValidationReport validate_graph(const TurtleDocument& doc) {
  struct Node {
    bool statement = false, entity = false, tweet = false;
    std::size_t subj = 0, pred = 0, obj = 0;
    std::vector<std::string> support;
    std::set<Term> sources;
  };
  const std::string rdf = std::string(vocab::rdf);
  const std::string same_as = std::string(vocab::owl) + "sameAs";
  const std::string related = std::string(vocab::skos) + "related";
  std::unordered_map<std::string, Node> nodes;
  std::vector<std::string> order;  // first-seen subjects, for stable violation order

  ValidationReport r;
  r.triples = doc.triples.size();
  for (const auto& t : doc.triples) {
    const std::string key = to_ntriples(t.s);
    auto [it, fresh] = nodes.try_emplace(key);
    if (fresh) order.push_back(key);
    auto& node = it->second;
    const auto& p = t.p.value;
    if (p == rdf + "type" && t.o.kind == Term::Kind::iri) {
      if (local_is(t.o.value, "Statement")) node.statement = true;
      if (local_is(t.o.value, "Entity")) node.entity = true;
      if (local_is(t.o.value, "Tweet")) node.tweet = true;
    } else if (p == rdf + "subject") {
      ++node.subj;
    } else if (p == rdf + "predicate") {
      ++node.pred;
    } else if (p == rdf + "object") {
      ++node.obj;
    } else if (p == same_as) {
      ++r.same_as_links;
    } else if (p == related) {
      ++r.related_links;
    } else if (local_is(p, "hasSupport")) {
      node.support.push_back(t.o.value);
    } else if (local_is(p, "comesfromTweet")) {
      node.sources.insert(t.o);
    }
  }

  for (const auto& key : order) {
    const auto& n = nodes.at(key);
    r.entities += n.entity;
    r.tweets += n.tweet;
    if (!n.statement) continue;
    ++r.statements;
    auto flag = [&](std::string msg) { r.violations.push_back({key, std::move(msg)}); };
    if (n.subj != 1) flag("expected one rdf:subject, found " + std::to_string(n.subj));
    if (n.pred != 1) flag("expected one rdf:predicate, found " + std::to_string(n.pred));
    if (n.obj != 1) flag("expected one rdf:object, found " + std::to_string(n.obj));
    if (n.support.size() != 1) {
      flag("expected one hasSupport, found " + std::to_string(n.support.size()));
      continue;
    }
    long long support = 0;
    const auto& lex = n.support.front();
    const char* begin = lex.data() + (!lex.empty() && lex[0] == '+' ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(begin, lex.data() + lex.size(), support);
    if (ec != std::errc() || ptr != lex.data() + lex.size()) {
      flag("hasSupport is not an integer: " + lex);
    } else if (support != static_cast<long long>(n.sources.size())) {
      flag("hasSupport " + std::to_string(support) + " but " + std::to_string(n.sources.size()) +
           " comesfromTweet edges");
    }
  }
  return r;
}

ValidationReport validate_graph(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw InputError("no such file: " + path.string());
  return validate_graph(load_turtle(path));
}

void to_json(nlohmann::json& j, const Statement& s) {
  j = {{"subject", s.subject_key},
       {"predicate", s.predicate},
       {"object", s.object_key},
       {"support", s.support},
       {"tweet_ids", s.tweet_ids},
       {"negated", s.negated},
       {"subject_quantifiers", s.subject_quantifiers},
       {"object_quantifiers", s.object_quantifiers}};
}

void to_json(nlohmann::json& j, const ValidationReport& r) {
  auto violations = nlohmann::json::array();
  for (const auto& v : r.violations) violations.push_back({{"node", v.node}, {"message", v.message}});
  j = {{"triples", r.triples},
       {"statements", r.statements},
       {"entities", r.entities},
       {"tweets", r.tweets},
       {"same_as_links", r.same_as_links},
       {"related_links", r.related_links},
       {"violations", violations}};
}

}  // namespace mbkg
