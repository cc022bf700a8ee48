#include "bihcert/kvfile.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bihcert::kv {

Value Value::of_string(std::string s) {
  Value v;
  v.type = Type::String;
  v.str = std::move(s);
  return v;
}

Value Value::of_bool(bool b) {
  Value v;
  v.type = Type::Boolean;
  v.boolean = b;
  return v;
}

Value Value::of_int(long long i) {
  Value v;
  v.type = Type::Integer;
  v.integer = i;
  return v;
}

Value Value::of_float(double d) {
  Value v;
  v.type = Type::Float;
  v.number = d;
  return v;
}

Value Value::of_array(std::vector<double> a) {
  Value v;
  v.type = Type::Array;
  v.array = std::move(a);
  return v;
}

double Value::as_number() const {
  if (type == Type::Integer) return static_cast<double>(integer);
  if (type == Type::Float) return number;
  throw std::runtime_error("value is not numeric");
}

Document::Section& Document::section(const std::string& name) {
  for (Section& s : sections) {
    if (s.name == name) return s;
  }
  sections.push_back(Section{name, {}});
  return sections.back();
}

const Document::Section* Document::find_section(const std::string& name) const {
  for (const Section& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const Value* Document::find(const std::string& section_name,
                            const std::string& key) const {
  const std::vector<Entry>* entries = nullptr;
  if (section_name.empty()) {
    entries = &root;
  } else {
    const Section* s = find_section(section_name);
    if (!s) return nullptr;
    entries = &s->entries;
  }
  for (const Entry& e : *entries) {
    if (e.first == key) return &e.second;
  }
  return nullptr;
}

void Document::set(const std::string& section_name, const std::string& key,
                   Value v) {
  std::vector<Entry>& entries =
      section_name.empty() ? root : section(section_name).entries;
  for (Entry& e : entries) {
    if (e.first == key) {
      e.second = std::move(v);
      return;
    }
  }
  entries.emplace_back(key, std::move(v));
}

namespace {

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Removes a trailing comment that starts outside of any quoted string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
        c != '.') {
      return false;
    }
  }
  return true;
}

double parse_number_token(const std::string& tok, int line,
                          const std::string& field, bool* is_integer) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE) {
    throw ParseError(line, field, "expected a number, got '" + tok + "'");
  }
  if (is_integer) {
    *is_integer = tok.find_first_of(".eE") == std::string::npos;
  }
  return v;
}

Value parse_value(const std::string& raw, int line, const std::string& field) {
  const std::string tok = strip(raw);
  if (tok.empty()) {
    throw ParseError(line, field, "missing value");
  }
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"') {
      throw ParseError(line, field, "unterminated string");
    }
    std::string out;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
      if (tok[i] == '\\') {
        if (i + 1 >= tok.size() - 1) {
          throw ParseError(line, field, "dangling escape");
        }
        ++i;
        switch (tok[i]) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default:
            throw ParseError(line, field, "unknown escape sequence");
        }
      } else {
        out.push_back(tok[i]);
      }
    }
    return Value::of_string(out);
  }
  if (tok == "true") return Value::of_bool(true);
  if (tok == "false") return Value::of_bool(false);
  if (tok.front() == '[') {
    if (tok.back() != ']') {
      throw ParseError(line, field, "unterminated array");
    }
    std::vector<double> arr;
    const std::string inner = strip(tok.substr(1, tok.size() - 2));
    if (!inner.empty()) {
      std::size_t pos = 0;
      while (pos <= inner.size()) {
        std::size_t comma = inner.find(',', pos);
        const std::string piece =
            strip(inner.substr(pos, comma == std::string::npos
                                        ? std::string::npos
                                        : comma - pos));
        arr.push_back(parse_number_token(piece, line, field, nullptr));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    return Value::of_array(std::move(arr));
  }
  bool is_int = false;
  const double num = parse_number_token(tok, line, field, &is_int);
  if (is_int) {
    return Value::of_int(static_cast<long long>(num));
  }
  return Value::of_float(num);
}

}  // namespace

Document parse(const std::string& text) {
  Document doc;
  Document::Section* current = nullptr;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError(line_no, "", "unterminated section header");
      }
      const std::string name = strip(line.substr(1, line.size() - 2));
      if (!valid_key(name)) {
        throw ParseError(line_no, name, "invalid section name");
      }
      if (doc.find_section(name) != nullptr) {
        throw ParseError(line_no, name, "duplicate section");
      }
      doc.sections.push_back(Document::Section{name, {}});
      current = &doc.sections.back();
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, "", "expected 'key = value'");
    }
    const std::string key = strip(line.substr(0, eq));
    if (!valid_key(key)) {
      throw ParseError(line_no, key, "invalid key");
    }
    std::vector<Document::Entry>& entries =
        current ? current->entries : doc.root;
    for (const Document::Entry& e : entries) {
      if (e.first == key) {
        throw ParseError(line_no, key, "duplicate key");
      }
    }
    entries.emplace_back(key, parse_value(line.substr(eq + 1), line_no, key));
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(0, path, "cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void serialize_value(std::ostream& out, const Value& v) {
  switch (v.type) {
    case Value::Type::String: {
      out << '"';
      for (char c : v.str) {
        if (c == '"' || c == '\\') out << '\\';
        if (c == '\n') {
          out << "\\n";
          continue;
        }
        out << c;
      }
      out << '"';
      break;
    }
    case Value::Type::Boolean:
      out << (v.boolean ? "true" : "false");
      break;
    case Value::Type::Integer:
      out << v.integer;
      break;
    case Value::Type::Float:
      out << format_float(v.number);
      break;
    case Value::Type::Array: {
      out << '[';
      for (std::size_t i = 0; i < v.array.size(); ++i) {
        if (i) out << ", ";
        out << format_float(v.array[i]);
      }
      out << ']';
      break;
    }
  }
}

void serialize_entries(std::ostream& out,
                       const std::vector<Document::Entry>& entries) {
  for (const Document::Entry& e : entries) {
    out << e.first << " = ";
    serialize_value(out, e.second);
    out << '\n';
  }
}

}  // namespace

std::string serialize(const Document& doc) {
  std::ostringstream out;
  serialize_entries(out, doc.root);
  for (const Document::Section& s : doc.sections) {
    if (&s != &doc.sections.front() || !doc.root.empty()) out << '\n';
    out << '[' << s.name << "]\n";
    serialize_entries(out, s.entries);
  }
  return out.str();
}

void write_atomic(const Document& doc, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp + "' for writing");
    }
    out << serialize(doc);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace bihcert::kv
