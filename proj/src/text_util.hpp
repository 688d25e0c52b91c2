#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dmt/error.hpp"

namespace dmt::detail {

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline bool parse_finite_double(std::string_view s, double& out) {
  double parsed = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, parsed, std::chars_format::general);
  if (ec != std::errc{} || ptr != end || !std::isfinite(parsed)) return false;
  out = parsed;
  return true;
}

inline double parse_double_or_throw(std::string_view s, std::string_view what) {
  double v = 0.0;
  const char* begin = s.data();
  auto [ptr, ec] = std::from_chars(begin, begin + s.size(), v, std::chars_format::general);
  if (ec != std::errc{} || ptr != begin + s.size())
    throw Error("expected a number for " + std::string(what) + ", got '" + std::string(s) + "'");
  return v;
}

inline long parse_long_or_throw(std::string_view s, std::string_view what) {
  long v = 0;
  const char* begin = s.data();
  auto [ptr, ec] = std::from_chars(begin, begin + s.size(), v);
  if (ec != std::errc{} || ptr != begin + s.size())
    throw Error("expected an integer for " + std::string(what) + ", got '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_u64_or_throw(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  const char* begin = s.data();
  auto [ptr, ec] = std::from_chars(begin, begin + s.size(), v);
  if (ec != std::errc{} || ptr != begin + s.size())
    throw Error("expected an unsigned integer for " + std::string(what) + ", got '" +
                std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

/// Quotes a string for the model/report grammars: double quotes with
/// backslash escapes, only when the bare token would be ambiguous.
inline std::string quote(std::string_view s) {
  bool needs = s.empty();
  for (char c : s)
    if (c == ' ' || c == '"' || c == '\\' || c == '=' || c == '\t') needs = true;
  if (!needs) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Splits a line into whitespace-separated tokens honoring quote() output.
inline std::vector<std::string> tokenize_quoted(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::string tok;
    if (line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char c = line[i++];
        if (c == '\\' && i < line.size()) {
          tok.push_back(line[i++]);
        } else if (c == '"') {
          closed = true;
          break;
        } else {
          tok.push_back(c);
        }
      }
      if (!closed) throw Error("unterminated quote in line: " + std::string(line));
      // a quoted segment may be glued to a key= prefix handled by caller
      out.push_back(tok);
    } else {
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
        if (line[i] == '"') break;
        ++i;
      }
      tok.assign(line.substr(start, i - start));
      if (i < line.size() && line[i] == '"') {
        // key="quoted value"
        ++i;
        while (i < line.size()) {
          char c = line[i++];
          if (c == '\\' && i < line.size()) {
            tok.push_back(line[i++]);
          } else if (c == '"') {
            break;
          } else {
            tok.push_back(c);
          }
        }
      }
      out.push_back(tok);
    }
  }
  return out;
}

}  // namespace dmt::detail
