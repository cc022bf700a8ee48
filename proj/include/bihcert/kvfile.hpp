#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bihcert::kv {

/// Typed value in a key/value document: string, boolean, number (integers
/// kept distinct for round-trip fidelity), or array of numbers.
struct Value {
  enum class Type { String, Boolean, Integer, Float, Array };

  Type type = Type::String;
  std::string str;
  bool boolean = false;
  long long integer = 0;
  double number = 0.0;
  std::vector<double> array;

  static Value of_string(std::string s);
  static Value of_bool(bool b);
  static Value of_int(long long i);
  static Value of_float(double d);
  static Value of_array(std::vector<double> a);

  /// Numeric view: integer or float. Throws std::runtime_error otherwise.
  double as_number() const;
};

/// Parse failure with the offending line and field for diagnostics.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line_, std::string field_, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_) +
                           (field_.empty() ? "" : " (" + field_ + ")") + ": " +
                           message),
        line(line_),
        field(std::move(field_)) {}

  int line;
  std::string field;
};

/// Ordered key/value document with named sections. The grammar is a strict
/// line-oriented subset: full-line or trailing `#` comments, `[section]`
/// headers (dots allowed), and `key = value` entries where a value is a
/// quoted string, true/false, a number, or `[n, n, ...]` of numbers.
struct Document {
  using Entry = std::pair<std::string, Value>;

  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };

  std::vector<Entry> root;  ///< entries before the first section header
  std::vector<Section> sections;

  Section& section(const std::string& name);           ///< find or append
  const Section* find_section(const std::string& name) const;
  const Value* find(const std::string& section_name,
                    const std::string& key) const;  ///< "" = root
  void set(const std::string& section_name, const std::string& key, Value v);
};

Document parse(const std::string& text);
Document parse_file(const std::string& path);

/// Deterministic serialization in insertion order; floats printed with
/// %.17g so that value -> text -> value round-trips exactly.
std::string serialize(const Document& doc);

/// Serialize and write via a temp file + rename so readers never observe a
/// partially written document.
void write_atomic(const Document& doc, const std::string& path);

std::string format_float(double v);

}  // namespace bihcert::kv
