#include "mbkg/linking.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mbkg/text.hpp"

namespace mbkg {

std::string_view to_string(LinkKind k) { return k == LinkKind::same_as ? "same_as" : "related"; }

SpotlightClient::SpotlightClient(SpotlightOptions opts) : opts_(std::move(opts)) {
  const std::string& url = opts_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InputError("linking endpoint must be an absolute URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_ = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  const std::string suffix = "/rest/annotate";
  if (path.size() < suffix.size() || path.compare(path.size() - suffix.size(), suffix.size(), suffix) != 0) {
    path += suffix;
  }
  path_ = path;
}

std::vector<Annotation> SpotlightClient::annotate(const std::string& text, double confidence) {
  httplib::Client cli(scheme_host_);
  if (!cli.is_valid()) throw ServiceUnavailable("unsupported linking endpoint " + opts_.endpoint);
  cli.set_connection_timeout(opts_.timeout);
  cli.set_read_timeout(opts_.timeout);
  const httplib::Headers headers{{"Accept", "application/json"}};
  const httplib::Params params{{"text", text}, {"confidence", std::to_string(confidence)}};

  std::string last_error;
  auto delay = opts_.backoff;
  for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    auto res = cli.Post(path_, headers, params);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw ServiceError("linking service answered HTTP " + std::to_string(res->status));
    return parse_spotlight_response(res->body);
  }
  throw ServiceUnavailable("linking service unreachable at " + opts_.endpoint + ": " + last_error);
}

std::vector<Annotation> parse_spotlight_response(std::string_view body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ServiceError(std::string("malformed linking response: ") + e.what());
  }
  std::vector<Annotation> out;
  if (!j.is_object()) throw ServiceError("malformed linking response: not an object");
  auto it = j.find("Resources");
  if (it == j.end() || it->is_null()) return out;
  // Some Spotlight builds return a bare object for a single resource.
  const nlohmann::json resources = it->is_array() ? *it : nlohmann::json::array({*it});
  auto number = [](const nlohmann::json& v) {
    // Spotlight serializes numbers as strings.
    return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>();
  };
  try {
    for (const auto& r : resources) {
      Annotation a;
      a.uri = r.at("@URI").get<std::string>();
      a.surface_form = r.at("@surfaceForm").get<std::string>();
      a.offset = static_cast<std::size_t>(number(r.at("@offset")));
      a.similarity = r.contains("@similarityScore") ? number(r.at("@similarityScore")) : 0.0;
      out.push_back(std::move(a));
    }
  } catch (const std::exception& e) {
    throw ServiceError(std::string("malformed linking resource: ") + e.what());
  }
  return out;
}

namespace {

// Byte offset of code point `cp` in s, npos when past the end.
std::size_t byte_offset(std::string_view s, std::size_t cp) {
  std::size_t count = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (count == cp) return i;
      ++count;
    }
  }
  return std::string_view::npos;
}

}  // namespace

std::vector<EntityLink> link_entities(const RewrittenSentence& rewritten, const std::vector<Annotation>& annotations) {
  std::vector<EntityLink> out;
  for (const auto& a : annotations) {
    const std::size_t b = byte_offset(rewritten.text, a.offset);
    if (b == std::string_view::npos || a.surface_form.empty()) continue;
    const std::size_t e = b + a.surface_form.size();
    if (e > rewritten.text.size()) continue;
    for (const auto& span : rewritten.spans) {
      const bool inside = b >= span.begin && e <= span.end;
      if (!inside) continue;  // head overlap alone is discarded
      const bool head = b < span.head_end && span.head_begin < e;
      out.push_back({span.key, a.uri, head ? LinkKind::same_as : LinkKind::related, a.similarity});
    }
  }
  return out;
}

std::vector<EntityLink> link_entities(const RewrittenSentence& rewritten, AnnotationClient& client, double confidence) {
  if (rewritten.spans.empty()) return {};
  return link_entities(rewritten, client.annotate(rewritten.text, confidence));
}

std::vector<EntityLink> merge_links(std::vector<EntityLink> links) {
  std::map<std::pair<std::string, std::string>, EntityLink> merged;
  for (auto& l : links) {
    auto key = std::make_pair(l.entity_key, l.resource_uri);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(std::move(key), std::move(l));
      continue;
    }
    if (l.kind == LinkKind::same_as) it->second.kind = LinkKind::same_as;
    it->second.confidence = std::max(it->second.confidence, l.confidence);
  }
  std::vector<EntityLink> out;
  out.reserve(merged.size());
  for (auto& [_, l] : merged) out.push_back(std::move(l));
  return out;
}

LinkingOutcome link_all(const std::vector<RewrittenSentence>& sentences, AnnotationClient& client, double confidence,
                        int max_in_flight) {
  struct Slot {
    std::vector<EntityLink> links;
    std::string warning;
    bool failed = false;
  };
  std::vector<Slot> slots(sentences.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> unavailable{false};
  std::mutex mu;
  std::string unavailable_reason;

  auto worker = [&] {
    for (;;) {
      if (unavailable.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= sentences.size()) return;
      try {
        slots[i].links = link_entities(sentences[i], client, confidence);
      } catch (const ServiceUnavailable& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (!unavailable.exchange(true)) unavailable_reason = e.what();
        return;
      } catch (const ServiceError& e) {
        slots[i].failed = true;
        slots[i].warning = "post " + sentences[i].post_id + " sentence " + std::to_string(sentences[i].sent_index) +
                           ": " + e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(max_in_flight, static_cast<int>(sentences.size())));
  std::vector<std::thread> threads;
  for (int t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  LinkingOutcome outcome;
  if (unavailable) {
    outcome.service_available = false;
    outcome.warnings.push_back("linking skipped: " + unavailable_reason);
    return outcome;
  }
  std::vector<EntityLink> all;
  for (auto& s : slots) {
    if (s.failed) {
      ++outcome.sentences_failed;
      outcome.warnings.push_back(std::move(s.warning));
    }
    all.insert(all.end(), s.links.begin(), s.links.end());
  }
  outcome.links = merge_links(std::move(all));
  return outcome;
}

void to_json(nlohmann::json& j, const EntityLink& l) {
  j = {{"entity_key", l.entity_key},
       {"resource_uri", l.resource_uri},
       {"kind", to_string(l.kind)},
       {"confidence", l.confidence}};
}

void from_json(const nlohmann::json& j, EntityLink& l) {
  l.entity_key = j.at("entity_key").get<std::string>();
  l.resource_uri = j.at("resource_uri").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "same_as") {
    l.kind = LinkKind::same_as;
  } else if (kind == "related") {
    l.kind = LinkKind::related;
  } else {
    throw InputError("unknown link kind " + kind);
  }
  l.confidence = j.value("confidence", 0.0);
}

}  // namespace mbkg
