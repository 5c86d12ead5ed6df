#include "peaks/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "peaks/errors.hpp"

namespace peaks {

std::string g17(double v) {
  char buf[40];
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json Json::object() {
  Json j;
  j.kind_ = Kind::Object;
  return j;
}
Json Json::array() {
  Json j;
  j.kind_ = Kind::Array;
  return j;
}
Json Json::number(double v) {
  Json j;
  j.kind_ = Kind::Number;
  j.scalar_ = g17(v);
  return j;
}
Json Json::integer(std::int64_t v) {
  Json j;
  j.kind_ = Kind::Integer;
  j.scalar_ = std::to_string(v);
  return j;
}
Json Json::boolean(bool v) {
  Json j;
  j.kind_ = Kind::Bool;
  j.scalar_ = v ? "true" : "false";
  return j;
}
Json Json::string(std::string v) {
  Json j;
  j.kind_ = Kind::String;
  j.scalar_ = std::move(v);
  return j;
}

Json& Json::set(const std::string& key, Json v) {
  members_.emplace_back(key, std::move(v));
  return *this;
}
Json& Json::push(Json v) {
  items_.push_back(std::move(v));
  return *this;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string padc(static_cast<std::size_t>(indent) * depth, ' ');
  switch (kind_) {
    case Kind::Number:
    case Kind::Integer:
    case Kind::Bool:
      // JSON has no nan/inf literals; emit them as strings.
      if (scalar_ == "nan" || scalar_ == "inf" || scalar_ == "-inf") {
        write_escaped(out, scalar_);
      } else {
        out += scalar_;
      }
      break;
    case Kind::String:
      write_escaped(out, scalar_);
      break;
    case Kind::Object: {
      if (members_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        out += pad;
        write_escaped(out, members_[i].first);
        out += ": ";
        members_[i].second.write(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ',';
        out += '\n';
      }
      out += padc + "}";
      break;
    }
    case Kind::Array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        out += pad;
        items_[i].write(out, indent, depth + 1);
        if (i + 1 < items_.size()) out += ',';
        out += '\n';
      }
      out += padc + "]";
      break;
    }
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace peaks
