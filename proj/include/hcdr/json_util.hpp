#pragma once

#include <string>
#include <unordered_map>

#include <json.hpp>

#include "hcdr/errors.hpp"

namespace hcdr {

/// Parsed JSON text that remembers the source line of every value, keyed by
/// JSON pointer, so schema errors can name both the field and its line.
class JsonDoc {
 public:
  explicit JsonDoc(const std::string& text);

  const nlohmann::json& root() const { return root_; }
  int line_of(const std::string& pointer) const;

  ParseError error(const std::string& pointer, const std::string& what) const;
  const nlohmann::json& require(const nlohmann::json& obj, const std::string& pointer,
                                const std::string& key) const;
  double number(const nlohmann::json& j, const std::string& pointer) const;

 private:
  nlohmann::json root_;
  std::unordered_map<std::string, int> lines_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hcdr
