#include "ferrotorque/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ferrotorque/error.hpp"

namespace ferrotorque::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

// Removes a trailing # comment that is not inside a string literal.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string && c == '\\') {
      ++i;
    } else if (c == '"') {
      in_string = !in_string;
    } else if (c == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string buf(s);
  buf.erase(std::remove(buf.begin(), buf.end(), '_'), buf.end());
  if (!buf.empty() && buf.front() == '+') buf.erase(0, 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc() || ptr != buf.data() + buf.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<Value> parse_scalar(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') return std::nullopt;
    Value v{.kind = Value::Kind::string};
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      char c = s[i];
      if (c == '"') return std::nullopt;
      if (c == '\\') {
        if (i + 2 >= s.size()) return std::nullopt;
        const char e = s[++i];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '\\': c = '\\'; break;
          case '"': c = '"'; break;
          default: return std::nullopt;
        }
      }
      v.text.push_back(c);
    }
    return v;
  }
  if (s == "true" || s == "false") return Value{.kind = Value::Kind::boolean, .flag = s == "true"};
  if (auto n = parse_number(s)) return Value{.kind = Value::Kind::number, .number = *n};
  return std::nullopt;
}

}  // namespace

nlohmann::json Value::to_json() const {
  switch (kind) {
    case Kind::number: return number;
    case Kind::string: return text;
    case Kind::boolean: return flag;
    case Kind::array: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& item : items) arr.push_back(item.to_json());
      return arr;
    }
  }
  return nullptr;
}

std::optional<Value> parse_value(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') return std::nullopt;
    Value arr{.kind = Value::Kind::array};
    std::string_view body = trim(text.substr(1, text.size() - 2));
    if (body.empty()) return arr;
    // Flat arrays only; split on commas outside string literals.
    bool in_string = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
      if (i < body.size() && body[i] == '"' && (i == 0 || body[i - 1] != '\\')) in_string = !in_string;
      if (i == body.size() || (body[i] == ',' && !in_string)) {
        const std::string_view piece = trim(body.substr(start, i - start));
        if (piece.empty() && i == body.size() && !arr.items.empty()) break;  // trailing comma
        auto item = parse_scalar(piece);
        if (!item) return std::nullopt;
        arr.items.push_back(std::move(*item));
        start = i + 1;
      }
    }
    return arr;
  }
  return parse_scalar(text);
}

bool Table::contains(const std::string& key) const { return find(key) != nullptr; }

const Value* Table::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

void Table::set(const std::string& key, Value value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(key, std::move(value));
}

std::optional<double> Table::number(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (v->kind != Value::Kind::number) throw ValidationError(path(key) + " must be a number");
  return v->number;
}

double Table::number(const std::string& key, double fallback) const {
  return number(key).value_or(fallback);
}

double Table::require_number(const std::string& key) const {
  if (auto v = number(key)) return *v;
  throw ValidationError("missing required field " + path(key));
}

std::optional<std::string> Table::string(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (v->kind != Value::Kind::string) throw ValidationError(path(key) + " must be a string");
  return v->text;
}

std::string Table::string(const std::string& key, const std::string& fallback) const {
  return string(key).value_or(fallback);
}

std::optional<bool> Table::boolean(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (v->kind != Value::Kind::boolean) throw ValidationError(path(key) + " must be true or false");
  return v->flag;
}

std::optional<std::vector<double>> Table::numbers(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (v->kind != Value::Kind::array) throw ValidationError(path(key) + " must be an array");
  std::vector<double> out;
  for (const auto& item : v->items) {
    if (item.kind != Value::Kind::number) throw ValidationError(path(key) + " must hold numbers");
    out.push_back(item.number);
  }
  return out;
}

std::optional<std::vector<std::string>> Table::strings(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (v->kind != Value::Kind::array) throw ValidationError(path(key) + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : v->items) {
    if (item.kind != Value::Kind::string) throw ValidationError(path(key) + " must hold strings");
    out.push_back(item.text);
  }
  return out;
}

void Table::restrict_keys(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [k, v] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ValidationError("unknown field " + path(k));
    }
  }
}

Document Document::parse(std::istream& in) {
  Document doc;
  std::string raw;
  int line_no = 0;
  Table* current = nullptr;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.size() < 3 || line.back() != ']' || line[1] == '[') {
        throw ParseError("malformed section header", line_no);
      }
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!valid_name(name)) throw ParseError("invalid section name '" + name + "'", line_no);
      if (doc.section(name)) throw ParseError("duplicate section [" + name + "]", line_no);
      current = &doc.section_for_write(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_name(key)) throw ParseError("invalid key '" + key + "'", line_no);
    if (!current) throw ParseError("key '" + key + "' outside of a [section]", line_no);
    if (current->contains(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    auto value = parse_value(line.substr(eq + 1));
    if (!value) throw ParseError("invalid value for '" + key + "'", line_no);
    current->set(key, std::move(*value));
  }
  return doc;
}

Document Document::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  Document doc = parse(in);
  doc.base_dir = path.parent_path();
  return doc;
}

void Document::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ValidationError("--set expects section.key=value");
  const std::string_view lhs = trim(assignment.substr(0, eq));
  const auto dot = lhs.find('.');
  if (dot == std::string_view::npos) throw ValidationError("--set expects section.key=value");
  const std::string section(lhs.substr(0, dot));
  const std::string key(lhs.substr(dot + 1));
  if (!valid_name(section) || !valid_name(key)) {
    throw ValidationError("invalid --set target '" + std::string(lhs) + "'");
  }
  const std::string_view rhs = trim(assignment.substr(eq + 1));
  Value value = parse_value(rhs).value_or(Value{.kind = Value::Kind::string, .text = std::string(rhs)});
  section_for_write(section).set(key, std::move(value));
}

const Table* Document::section(const std::string& name) const {
  for (const auto& t : sections_) {
    if (t.name() == name) return &t;
  }
  return nullptr;
}

const Table& Document::section_or_empty(const std::string& name) const {
  static const Table empty_tables[] = {Table("material"), Table("sensor"), Table("grid"),
                                       Table("noise"), Table("reference_lines"), Table("simulate"),
                                       Table("exclusion"), Table("output")};
  if (const Table* t = section(name)) return *t;
  for (const auto& t : empty_tables) {
    if (t.name() == name) return t;
  }
  throw ValidationError("unknown section [" + name + "]");
}

void Document::restrict_sections(std::initializer_list<std::string_view> allowed) const {
  for (const auto& t : sections_) {
    if (std::find(allowed.begin(), allowed.end(), t.name()) == allowed.end()) {
      throw ValidationError("unknown section [" + t.name() + "]");
    }
  }
}

Table& Document::section_for_write(const std::string& name) {
  for (auto& t : sections_) {
    if (t.name() == name) return t;
  }
  sections_.emplace_back(name);
  return sections_.back();
}

nlohmann::json Document::to_json() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& t : sections_) {
    nlohmann::json table = nlohmann::json::object();
    for (const auto& [k, v] : t.entries()) table[k] = v.to_json();
    out[t.name()] = std::move(table);
  }
  return out;
}

}  // namespace ferrotorque::cli
