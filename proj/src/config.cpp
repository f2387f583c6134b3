#include "thz/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace thz::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_bare_key(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

// Drops a trailing # comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

std::string without_underscores(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != '_') out.push_back(c);
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view raw) {
  std::string s = without_underscores(raw);
  bool neg = false;
  std::string_view v = s;
  if (!v.empty() && (v.front() == '+' || v.front() == '-')) {
    neg = v.front() == '-';
    v.remove_prefix(1);
  }
  int base = 10;
  if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
    base = 16;
    v.remove_prefix(2);
  }
  if (v.empty()) return std::nullopt;
  std::uint64_t u = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), u, base);
  if (ec != std::errc() || p != v.data() + v.size()) return std::nullopt;
  if (u > std::uint64_t(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
  return neg ? -std::int64_t(u) : std::int64_t(u);
}

std::optional<double> parse_float(std::string_view raw) {
  std::string s = without_underscores(raw);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  const char* b = s.c_str();
  if (*b == '+') ++b;
  double d = 0.0;
  auto [p, ec] = std::from_chars(b, s.c_str() + s.size(), d);
  if (ec != std::errc() || p != s.c_str() + s.size()) return std::nullopt;
  return d;
}

}  // namespace

Document Document::parse(std::string_view text, std::string origin) {
  Document doc;
  doc.origin_ = std::move(origin);
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;

  auto fail = [&](const std::string& msg) {
    throw Error(Errc::config, doc.origin_ + ":" + std::to_string(line_no) + ": " + msg);
  };

  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!is_bare_key(name)) fail("bad section name '" + std::string(name) + "'");
      section = std::string(name);
      if (doc.sections_.count(section)) fail("duplicate section [" + section + "]");
      doc.sections_[section];
      doc.section_lines_[section] = line_no;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view rhs = trim(line.substr(eq + 1));
    if (!is_bare_key(key)) fail("bad key '" + key + "'");
    if (section.empty()) fail("key '" + key + "' outside any section");
    if (rhs.empty()) fail("missing value for '" + key + "'");
    auto& table = doc.sections_[section];
    if (table.count(key)) fail("duplicate key '" + section + "." + key + "'");

    Value value;
    if (rhs.front() == '"') {
      if (rhs.size() < 2 || rhs.back() != '"') fail("unterminated string for '" + key + "'");
      std::string s;
      for (std::size_t i = 1; i + 1 < rhs.size(); ++i) {
        if (rhs[i] == '\\' && i + 2 < rhs.size()) {
          const char c = rhs[++i];
          s.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
        } else {
          s.push_back(rhs[i]);
        }
      }
      value = s;
    } else if (rhs == "true" || rhs == "false") {
      value = rhs == "true";
    } else if (rhs.front() == '[') {
      if (rhs.back() != ']') fail("unterminated array for '" + key + "'");
      std::vector<double> items;
      std::string_view body = trim(rhs.substr(1, rhs.size() - 2));
      while (!body.empty()) {
        const std::size_t comma = body.find(',');
        const std::string_view item = trim(body.substr(0, comma));
        if (!item.empty()) {
          if (auto i = parse_int(item)) items.push_back(double(*i));
          else if (auto d = parse_float(item)) items.push_back(*d);
          else fail("non-numeric array element '" + std::string(item) + "' in '" + key + "'");
        } else if (comma != std::string_view::npos) {
          fail("empty array element in '" + key + "'");
        }
        if (comma == std::string_view::npos) break;
        body = trim(body.substr(comma + 1));
      }
      value = items;
    } else if (auto i = parse_int(rhs)) {
      value = *i;
    } else if (auto d = parse_float(rhs)) {
      value = *d;
    } else {
      fail("cannot parse value '" + std::string(rhs) + "' for '" + key + "'");
    }
    table.emplace(key, Entry{std::move(value), line_no});
  }
  return doc;
}

Document Document::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

bool Document::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) != 0;
}

std::vector<std::string> Document::sections() const {
  std::vector<std::string> out;
  for (const auto& kv : sections_) out.push_back(kv.first);
  return out;
}

std::string Document::where(const std::string& section, const std::string& key) const {
  std::string out = origin_ + ": " + section + "." + key;
  auto s = sections_.find(section);
  if (s != sections_.end()) {
    auto e = s->second.find(key);
    if (e != s->second.end()) out += " (line " + std::to_string(e->second.line) + ")";
  }
  return out;
}

const Entry* Document::find(const std::string& section, const std::string& key) {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto e = s->second.find(key);
  if (e == s->second.end()) return nullptr;
  read_.emplace(section, key);
  return &e->second;
}

std::optional<double> Document::number(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  if (auto d = std::get_if<double>(&e->value)) return *d;
  if (auto i = std::get_if<std::int64_t>(&e->value)) return double(*i);
  throw Error(Errc::config, where(section, key) + ": expected a number");
}

std::optional<std::int64_t> Document::integer(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  if (auto i = std::get_if<std::int64_t>(&e->value)) return *i;
  throw Error(Errc::config, where(section, key) + ": expected an integer");
}

std::optional<std::uint64_t> Document::unsigned_integer(const std::string& section, const std::string& key) {
  auto i = integer(section, key);
  if (!i) return std::nullopt;
  if (*i < 0) throw Error(Errc::config, where(section, key) + ": must be >= 0");
  return std::uint64_t(*i);
}

std::optional<std::string> Document::string(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  if (auto s = std::get_if<std::string>(&e->value)) return *s;
  throw Error(Errc::config, where(section, key) + ": expected a string");
}

std::optional<bool> Document::boolean(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  if (auto b = std::get_if<bool>(&e->value)) return *b;
  throw Error(Errc::config, where(section, key) + ": expected true or false");
}

std::optional<std::vector<double>> Document::array(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  if (auto a = std::get_if<std::vector<double>>(&e->value)) return *a;
  throw Error(Errc::config, where(section, key) + ": expected a numeric array");
}

void Document::reject_unread() const {
  for (const auto& [section, table] : sections_) {
    for (const auto& [key, entry] : table) {
      if (!read_.count({section, key}))
        throw Error(Errc::config, origin_ + ": " + section + "." + key + " (line " + std::to_string(entry.line) +
                                      "): unknown key");
    }
  }
}

}  // namespace thz::config
