// Declarative run configuration: a TOML subset with [section] tables,
// `key = value` pairs, strings, numbers, booleans, flat arrays and # comments.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ferrotorque::cli {

struct Value {
  enum class Kind { number, string, boolean, array };
  Kind kind = Kind::number;
  double number = 0.0;
  std::string text;
  bool flag = false;
  std::vector<Value> items;

  nlohmann::json to_json() const;
};

/// Parses a single TOML value (`1e-6`, `"text"`, `true`, `[1, 2]`).
/// Returns nullopt when the text is not a valid value.
std::optional<Value> parse_value(std::string_view text);

class Table {
 public:
  explicit Table(std::string name = {}) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  bool contains(const std::string& key) const;
  void set(const std::string& key, Value value);
  const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }

  /// Typed accessors; errors name the full `section.key` path.
  std::optional<double> number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  double require_number(const std::string& key) const;
  std::optional<std::string> string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::optional<bool> boolean(const std::string& key) const;
  std::optional<std::vector<double>> numbers(const std::string& key) const;
  std::optional<std::vector<std::string>> strings(const std::string& key) const;

  /// Throws ValidationError naming the first key not in `allowed`.
  void restrict_keys(std::initializer_list<std::string_view> allowed) const;

 private:
  const Value* find(const std::string& key) const;
  std::string path(const std::string& key) const { return name_ + "." + key; }

  std::string name_;
  std::vector<std::pair<std::string, Value>> entries_;
};

class Document {
 public:
  /// Parses config text. Throws ParseError with the offending line.
  static Document parse(std::istream& in);
  static Document load(const std::filesystem::path& path);

  /// Applies a `section.key=value` override; unparsable values become strings.
  void apply_override(std::string_view assignment);

  const Table* section(const std::string& name) const;
  /// Returns the named section or an empty table.
  const Table& section_or_empty(const std::string& name) const;
  bool has_section(const std::string& name) const { return section(name) != nullptr; }
  const std::vector<Table>& sections() const { return sections_; }

  /// Throws ValidationError naming the first section not in `allowed`.
  void restrict_sections(std::initializer_list<std::string_view> allowed) const;

  /// Directory used to resolve relative file references.
  std::filesystem::path base_dir;

  nlohmann::json to_json() const;

 private:
  Table& section_for_write(const std::string& name);
  std::vector<Table> sections_;
};

}  // namespace ferrotorque::cli
