#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace peaks {

// Formats a double with 17 significant digits (round-trip exact).
std::string g17(double v);

// Minimal JSON value with insertion-ordered objects and g17 number formatting,
// so identical runs produce byte-identical report files.
class Json {
public:
  static Json object();
  static Json array();
  static Json number(double v);
  static Json integer(std::int64_t v);
  static Json boolean(bool v);
  static Json string(std::string v);

  Json& set(const std::string& key, Json v);      // object
  Json& push(Json v);                             // array
  std::string dump(int indent = 2) const;

private:
  enum class Kind { Object, Array, Number, Integer, Bool, String };
  Kind kind_ = Kind::Object;
  std::string scalar_;
  std::vector<std::pair<std::string, Json>> members_;
  std::vector<Json> items_;
  void write(std::string& out, int indent, int depth) const;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace peaks
