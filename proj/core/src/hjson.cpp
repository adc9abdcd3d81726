#include "testit/hjson.hpp"

#include "testit/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <regex>

namespace testit::hjson {
namespace {

using Json = nlohmann::ordered_json;

bool is_punctuator(char c) {
  return c == '{' || c == '}' || c == '[' || c == ']' || c == ',' || c == ':';
}

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Number or keyword literal, nullopt when `token` is anything else.
std::optional<Json> literal(std::string_view token) {
  if (token == "true") return Json(true);
  if (token == "false") return Json(false);
  if (token == "null") return Json(nullptr);
  static const std::regex number(R"(-?(0|[1-9][0-9]*)(\.[0-9]+)?([eE][+-]?[0-9]+)?)");
  if (token.empty() || !std::regex_match(token.begin(), token.end(), number)) {
    return std::nullopt;
  }
  const bool integral = token.find_first_of(".eE") == std::string_view::npos;
  if (integral) {
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), i);
    if (ec == std::errc() && p == token.data() + token.size()) return Json(i);
    std::uint64_t u = 0;
    auto [pu, ecu] = std::from_chars(token.data(), token.data() + token.size(), u);
    if (ecu == std::errc() && pu == token.data() + token.size()) return Json(u);
  }
  // Out-of-range integers fall through to double like JSON parsers do.
  return Json(std::stod(std::string(token)));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Json parse_root() {
    skip_ws();
    Json result;
    if (peek() == '{' || peek() == '[') {
      result = parse_value();
    } else if (at_end()) {
      result = Json::object();
    } else if (looks_like_member()) {
      result = parse_members(/*braced=*/false);
    } else {
      result = parse_value();
    }
    skip_ws();
    if (!at_end()) fail("unexpected trailing content");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::kSyntax,
                what + " (line " + std::to_string(line) + ", column " +
                    std::to_string(col) + ")");
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  // Skips whitespace (including newlines) and comments.
  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else if (c == '#' || (c == '/' && peek(1) == '/')) {
        while (!at_end() && peek() != '\n') ++pos_;
      } else if (c == '/' && peek(1) == '*') {
        auto end = text_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated block comment");
        pos_ = end + 2;
      } else {
        break;
      }
    }
  }

  // True if the upcoming text is `key:` (used to detect a braceless root).
  bool looks_like_member() {
    std::size_t saved = pos_;
    bool ok = false;
    try {
      parse_key();
      skip_ws();
      ok = peek() == ':';
    } catch (const Error&) {
      ok = false;
    }
    pos_ = saved;
    return ok;
  }

  std::string parse_key() {
    char c = peek();
    if (c == '"' || c == '\'') return parse_quoted(c);
    std::size_t start = pos_;
    while (!at_end()) {
      c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || is_punctuator(c)) break;
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  Json parse_members(bool braced) {
    Json obj = Json::object();
    while (true) {
      skip_ws();
      if (braced && peek() == '}') {
        ++pos_;
        return obj;
      }
      if (at_end()) {
        if (braced) fail("unterminated object");
        return obj;
      }
      std::string key = parse_key();
      skip_ws();
      if (peek() != ':') fail("expected ':' after key '" + key + "'");
      ++pos_;
      skip_ws();
      if (obj.contains(key)) fail("duplicate key '" + key + "'");
      obj[key] = parse_value();
      skip_ws();
      if (peek() == ',') ++pos_;
    }
  }

  Json parse_array() {
    Json arr = Json::array();
    ++pos_;  // '['
    while (true) {
      skip_ws();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      if (at_end()) fail("unterminated array");
      arr.push_back(parse_value());
      skip_ws();
      if (peek() == ',') ++pos_;
    }
  }

  Json parse_value() {
    char c = peek();
    if (at_end()) fail("expected a value");
    if (c == '{') {
      ++pos_;
      return parse_members(/*braced=*/true);
    }
    if (c == '[') return parse_array();
    if (c == '\'' && peek(1) == '\'' && peek(2) == '\'') return parse_multiline();
    if (c == '"' || c == '\'') return Json(parse_quoted(c));
    if (is_punctuator(c)) fail(std::string("unexpected '") + c + "'");
    return parse_quoteless();
  }

  // A literal (number/bool/null) ends at a punctuator, comment or newline;
  // anything else is a string running to end of line.
  Json parse_quoteless() {
    std::size_t start = pos_;
    while (true) {
      char c = peek();
      bool boundary = at_end() || c == '\n' || c == ',' || c == ']' || c == '}' ||
                      c == '#' || (c == '/' && (peek(1) == '/' || peek(1) == '*'));
      if (boundary) {
        if (auto lit = literal(trim(text_.substr(start, pos_ - start)))) return *lit;
        if (at_end() || c == '\n') break;
      }
      ++pos_;
    }
    return Json(std::string(trim(text_.substr(start, pos_ - start))));
  }

  std::string parse_quoted(char quote) {
    ++pos_;
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string");
      char c = text_[pos_++];
      if (c == quote) return out;
      if (c == '\n') fail("newline in quoted string");
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) fail("unterminated escape");
      char e = text_[pos_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': append_unicode(out); break;
        default: fail(std::string("invalid escape '\\") + e + "'");
      }
    }
  }

  unsigned read_hex4() {
    if (pos_ + 4 > text_.size()) fail("truncated \\u escape");
    unsigned v = 0;
    auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + pos_ + 4, v, 16);
    if (ec != std::errc() || p != text_.data() + pos_ + 4) fail("bad \\u escape");
    pos_ += 4;
    return v;
  }

  void append_unicode(std::string& out) {
    unsigned cp = read_hex4();
    if (cp >= 0xD800 && cp <= 0xDBFF) {
      if (peek() != '\\' || peek(1) != 'u') fail("unpaired surrogate");
      pos_ += 2;
      unsigned lo = read_hex4();
      if (lo < 0xDC00 || lo > 0xDFFF) fail("unpaired surrogate");
      cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
    }
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  // '''multiline''' : indentation up to the opening quotes' column is
  // stripped from each line, a leading newline is dropped.
  Json parse_multiline() {
    std::size_t line_start = text_.rfind('\n', pos_ == 0 ? 0 : pos_ - 1);
    std::size_t indent = line_start == std::string_view::npos ? pos_ : pos_ - line_start - 1;
    pos_ += 3;
    auto end = text_.find("'''", pos_);
    if (end == std::string_view::npos) fail("unterminated multiline string");
    std::string_view body = text_.substr(pos_, end - pos_);
    pos_ = end + 3;

    // Skip whitespace up to and including the first newline.
    auto first = body.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && body[first] == '\n') body.remove_prefix(first + 1);

    std::string out;
    std::size_t i = 0;
    while (i <= body.size()) {
      auto nl = body.find('\n', i);
      std::string_view line = body.substr(i, nl == std::string_view::npos ? std::string_view::npos : nl - i);
      std::size_t skip = 0;
      while (skip < indent && skip < line.size() && (line[skip] == ' ' || line[skip] == '\t')) ++skip;
      line.remove_prefix(skip);
      if (nl == std::string_view::npos) {
        // Last line holds only the closing quotes' indentation.
        if (!trim(line).empty()) out += line;
        break;
      }
      out += line;
      out += '\n';
      i = nl + 1;
    }
    if (!out.empty() && out.back() == '\n') out.pop_back();
    if (!out.empty() && out.back() == '\r') out.pop_back();
    return Json(out);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

nlohmann::ordered_json parse(std::string_view text) {
  return Parser(text).parse_root();
}

std::string quote(std::string_view value) {
  return nlohmann::json(std::string(value)).dump();
}

}  // namespace testit::hjson
