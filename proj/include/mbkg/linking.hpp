#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mbkg/entity_refine.hpp"
#include "mbkg/types.hpp"

namespace mbkg {

// The service could not be reached at all (as opposed to one bad response).
class ServiceUnavailable : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

enum class LinkKind { same_as, related };

std::string_view to_string(LinkKind k);

struct EntityLink {
  std::string entity_key;
  std::string resource_uri;
  LinkKind kind = LinkKind::same_as;
  double confidence = 0.0;

  friend bool operator==(const EntityLink&, const EntityLink&) = default;
};

// One resource returned by the annotation endpoint.
struct Annotation {
  std::string uri;
  std::string surface_form;
  std::size_t offset = 0;  // code points into the request text
  double similarity = 0.0;
};

class AnnotationClient {
 public:
  virtual ~AnnotationClient() = default;
  // Throws ServiceUnavailable when unreachable, ServiceError on a malformed reply.
  virtual std::vector<Annotation> annotate(const std::string& text, double confidence) = 0;
};

struct SpotlightOptions {
  std::string endpoint;  // base URL; "/rest/annotate" is appended unless already present
  int max_retries = 3;
  std::chrono::milliseconds backoff{200};
  std::chrono::seconds timeout{10};
};

class SpotlightClient : public AnnotationClient {
 public:
  explicit SpotlightClient(SpotlightOptions opts);
  std::vector<Annotation> annotate(const std::string& text, double confidence) override;

 private:
  SpotlightOptions opts_;
  std::string scheme_host_;
  std::string path_;
};

// Parses a Spotlight JSON body. A reply without "Resources" means no annotations.
std::vector<Annotation> parse_spotlight_response(std::string_view body);

// Applies the inclusion and head-overlap conditions to resolved annotations.
std::vector<EntityLink> link_entities(const RewrittenSentence& rewritten, const std::vector<Annotation>& annotations);
std::vector<EntityLink> link_entities(const RewrittenSentence& rewritten, AnnotationClient& client, double confidence);

struct LinkingOutcome {
  std::vector<EntityLink> links;  // deduplicated, sorted by (entity_key, resource_uri)
  std::vector<std::string> warnings;
  bool service_available = true;
  std::size_t sentences_failed = 0;
};

// Annotates every sentence with at most `max_in_flight` concurrent requests.
// An unreachable service stops linking and reports service_available = false.
LinkingOutcome link_all(const std::vector<RewrittenSentence>& sentences, AnnotationClient& client, double confidence,
                        int max_in_flight = 4);

// Same-as wins over related for the same (key, uri); confidence is the max seen.
std::vector<EntityLink> merge_links(std::vector<EntityLink> links);

void to_json(nlohmann::json& j, const EntityLink& l);
void from_json(const nlohmann::json& j, EntityLink& l);

}  // namespace mbkg
