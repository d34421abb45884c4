#include "hcdr/json_util.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace hcdr {

namespace {

// Structural scan only; nlohmann has already validated the syntax.
class LineScanner {
 public:
  LineScanner(const std::string& s, std::unordered_map<std::string, int>& out) : s_(s), out_(out) {}

  void run() {
    skip_ws();
    value("");
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string v;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
        v += s_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      v += s_[pos_++];
    }
    ++pos_;
    return v;
  }

  static std::string escape(const std::string& key) {
    std::string r;
    for (char c : key) {
      if (c == '~') r += "~0";
      else if (c == '/') r += "~1";
      else r += c;
    }
    return r;
  }

  void value(const std::string& path) {
    skip_ws();
    out_.emplace(path, line_);
    if (pos_ >= s_.size()) return;
    const char c = s_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      if (s_[pos_] == '}') { ++pos_; return; }
      while (pos_ < s_.size()) {
        skip_ws();
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        value(path + "/" + escape(key));
        skip_ws();
        if (s_[pos_++] == '}') return;
      }
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      if (s_[pos_] == ']') { ++pos_; return; }
      for (int k = 0; pos_ < s_.size(); ++k) {
        value(path + "/" + std::to_string(k));
        skip_ws();
        if (s_[pos_++] == ']') return;
      }
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}' && s_[pos_] != ']' &&
             !std::isspace(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
    }
  }

  const std::string& s_;
  std::unordered_map<std::string, int>& out_;
  size_t pos_ = 0;
  int line_ = 1;
};

int line_at(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

JsonDoc::JsonDoc(const std::string& text) {
  try {
    root_ = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", line_at(text, e.byte > 0 ? e.byte - 1 : 0), "malformed JSON");
  }
  LineScanner(text, lines_).run();
}

int JsonDoc::line_of(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    auto it = lines_.find(p);
    if (it != lines_.end()) return it->second;
    if (p.empty()) return 0;
    p = p.substr(0, p.rfind('/'));
  }
}

ParseError JsonDoc::error(const std::string& pointer, const std::string& what) const {
  std::string field = pointer.empty() ? "/" : pointer;
  return ParseError(field, line_of(pointer), what);
}

const nlohmann::json& JsonDoc::require(const nlohmann::json& obj, const std::string& pointer,
                                       const std::string& key) const {
  if (!obj.is_object() || !obj.contains(key))
    throw error(pointer + "/" + key, "required field is missing");
  return obj.at(key);
}

double JsonDoc::number(const nlohmann::json& j, const std::string& pointer) const {
  if (!j.is_number()) throw error(pointer, "expected a number");
  return j.get<double>();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCategory::kIo, "write failed for '" + path + "'");
}

}  // namespace hcdr
