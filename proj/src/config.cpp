#include "mbkg/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>

#include "mbkg/text.hpp"
#include "mbkg/types.hpp"

namespace mbkg {

namespace {

class LineParser {
 public:
  LineParser(std::string_view s, std::size_t line_no) : s_(s), line_(line_no) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("config line " + std::to_string(line_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  void expect_end() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("unexpected trailing text");
  }

  std::string key() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  ConfigValue value() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '[') {
      ++pos_;
      std::vector<ConfigScalar> items;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return items;
      }
      for (;;) {
        items.push_back(scalar());
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          skip_ws();
          if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            break;
          }
          continue;
        }
        expect(']');
        break;
      }
      return items;
    }
    return std::visit([](auto&& v) -> ConfigValue { return v; }, scalar());
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;

  ConfigScalar scalar() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"' || c == '\'') return quoted(c);
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' && s_[pos_] != ' ' &&
           s_[pos_] != '\t') {
      ++pos_;
    }
    std::string tok(s_.substr(start, pos_ - start));
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    long long i = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
    if (ec == std::errc() && p == digits.data() + digits.size()) return i;
    double d = 0;
    auto [pd, ecd] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ecd == std::errc() && pd == digits.data() + digits.size()) return d;
    fail("cannot read value '" + tok + "'");
  }

  std::string quoted(char q) {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != q) {
      char c = s_[pos_++];
      if (q == '"' && c == '\\') {
        if (pos_ >= s_.size()) fail("dangling escape");
        const char e = s_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }
};

const char* type_name(const ConfigValue& v) {
  static const char* names[] = {"boolean", "integer", "float", "string", "array"};
  return names[v.index()];
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, std::filesystem::path base_dir) {
  ConfigFile cfg;
  cfg.base_dir_ = std::move(base_dir);
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    LineParser p(body, line_no);
    if (body[0] == '[') {
      p.expect('[');
      section = p.key();
      p.expect(']');
      p.expect_end();
      cfg.values_[section];
      continue;
    }
    const auto key = p.key();
    p.expect('=');
    auto value = p.value();
    p.expect_end();
    auto [it, fresh] = cfg.values_[section].emplace(key, std::move(value));
    if (!fresh) p.fail("duplicate key '" + key + "'");
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  return parse(in, std::filesystem::absolute(path).parent_path());
}

const ConfigValue* ConfigFile::find(const std::string& section, const std::string& key) const {
  auto s = values_.find(section);
  if (s == values_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
  std::vector<std::string> out;
  auto s = values_.find(section);
  if (s != values_.end()) {
    for (const auto& [k, _] : s->second) out.push_back(k);
  }
  return out;
}

std::vector<std::string> ConfigFile::sections() const {
  std::vector<std::string> out;
  for (const auto& [s, _] : values_) out.push_back(s);
  return out;
}

namespace {

[[noreturn]] void wrong_type(const std::string& section, const std::string& key, const char* want,
                             const ConfigValue& v) {
  throw InputError("config " + section + "." + key + ": expected " + want + ", found " + type_name(v));
}

template <typename T>
std::optional<std::vector<T>> list_of(const ConfigValue* v, const std::string& section, const std::string& key,
                                      const char* want) {
  if (!v) return std::nullopt;
  const auto* arr = std::get_if<std::vector<ConfigScalar>>(v);
  if (!arr) {
    // A lone scalar reads as a one-element list.
    if constexpr (std::is_same_v<T, double>) {
      if (auto* i = std::get_if<long long>(v)) return std::vector<double>{static_cast<double>(*i)};
    }
    if (auto* x = std::get_if<T>(v)) return std::vector<T>{*x};
    wrong_type(section, key, want, *v);
  }
  std::vector<T> out;
  for (const auto& item : *arr) {
    if constexpr (std::is_same_v<T, double>) {
      if (auto* i = std::get_if<long long>(&item)) {
        out.push_back(static_cast<double>(*i));
        continue;
      }
    }
    auto* x = std::get_if<T>(&item);
    if (!x) throw InputError("config " + section + "." + key + ": expected a list of " + want);
    out.push_back(*x);
  }
  return out;
}

}  // namespace

std::optional<std::string> ConfigFile::get_string(const std::string& section, const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (auto* s = std::get_if<std::string>(v)) return *s;
  wrong_type(section, key, "string", *v);
}

std::optional<std::filesystem::path> ConfigFile::get_path(const std::string& section, const std::string& key) const {
  auto s = get_string(section, key);
  if (!s) return std::nullopt;
  std::filesystem::path p(*s);
  if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
  return p.lexically_normal();
}

std::optional<long long> ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (auto* i = std::get_if<long long>(v)) return *i;
  wrong_type(section, key, "integer", *v);
}

std::optional<double> ConfigFile::get_double(const std::string& section, const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (auto* d = std::get_if<double>(v)) return *d;
  if (auto* i = std::get_if<long long>(v)) return static_cast<double>(*i);
  wrong_type(section, key, "number", *v);
}

std::optional<bool> ConfigFile::get_bool(const std::string& section, const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (auto* b = std::get_if<bool>(v)) return *b;
  wrong_type(section, key, "boolean", *v);
}

std::optional<std::vector<long long>> ConfigFile::get_int_list(const std::string& section,
                                                               const std::string& key) const {
  return list_of<long long>(find(section, key), section, key, "integers");
}

std::optional<std::vector<double>> ConfigFile::get_double_list(const std::string& section,
                                                               const std::string& key) const {
  return list_of<double>(find(section, key), section, key, "numbers");
}

std::optional<std::vector<std::string>> ConfigFile::get_string_list(const std::string& section,
                                                                    const std::string& key) const {
  return list_of<std::string>(find(section, key), section, key, "strings");
}

}  // namespace mbkg
