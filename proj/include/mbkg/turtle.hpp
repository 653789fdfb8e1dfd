#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mbkg {

struct Term {
  enum class Kind { iri, blank, literal };
  Kind kind = Kind::iri;
  std::string value;     // IRI, blank label, or lexical form
  std::string datatype;  // literals only; empty for plain strings
  std::string lang;

  static Term iri(std::string v) { return {Kind::iri, std::move(v), {}, {}}; }
  static Term blank(std::string v) { return {Kind::blank, std::move(v), {}, {}}; }
  static Term literal(std::string v, std::string dt = {}, std::string lang = {}) {
    return {Kind::literal, std::move(v), std::move(dt), std::move(lang)};
  }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct RdfTriple {
  Term s, p, o;
  friend bool operator==(const RdfTriple&, const RdfTriple&) = default;
  friend auto operator<=>(const RdfTriple&, const RdfTriple&) = default;
};

class TurtleError : public std::runtime_error {
 public:
  TurtleError(std::size_t line, std::size_t column, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

namespace vocab {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view skos = "http://www.w3.org/2004/02/skos/core#";
inline constexpr std::string_view schema = "https://schema.org/";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
}  // namespace vocab

struct TurtleDocument {
  std::vector<RdfTriple> triples;
  std::map<std::string, std::string> prefixes;
};

// Turtle 1.1 reader (prefixes, base, collections, blank node property lists, all literal forms).
TurtleDocument parse_turtle(std::string_view text, std::string base = {});
TurtleDocument load_turtle(const std::filesystem::path& path);

// N-Triples rendering of one term / triple, used for comparisons and debugging.
std::string to_ntriples(const Term& t);
std::string to_ntriples(const RdfTriple& t);

// Writer side.
std::string escape_turtle_string(std::string_view s);
// True when `local` can be written after a prefix without escapes (conservative subset of PN_LOCAL).
bool is_simple_local_name(std::string_view local);

}  // namespace mbkg
