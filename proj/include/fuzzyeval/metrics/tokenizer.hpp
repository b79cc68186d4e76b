#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzyeval::metrics {

enum class TokenKind { whitespace, line_comment, block_comment, identifier, keyword, number, string, character, text_block, punct };

inline std::string_view to_string(TokenKind k) {
  switch (k) {
    case TokenKind::whitespace: return "whitespace";
    case TokenKind::line_comment: return "line_comment";
    case TokenKind::block_comment: return "block_comment";
    case TokenKind::identifier: return "identifier";
    case TokenKind::keyword: return "keyword";
    case TokenKind::number: return "number";
    case TokenKind::string: return "string";
    case TokenKind::character: return "character";
    case TokenKind::text_block: return "text_block";
    case TokenKind::punct: return "punct";
  }
  return "";
}

/// Byte range [begin, end) of the source plus the 1-based line it starts on.
struct Token {
  TokenKind kind = TokenKind::punct;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 1;

  std::string_view text(std::string_view src) const { return src.substr(begin, end - begin); }
  bool is_comment() const { return kind == TokenKind::line_comment || kind == TokenKind::block_comment; }
  bool significant() const { return kind != TokenKind::whitespace && !is_comment(); }

  bool operator==(const Token&) const = default;
};

class TokenizeError : public std::runtime_error {
 public:
  TokenizeError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " at line " + std::to_string(line)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline bool is_java_keyword(std::string_view s) {
  static constexpr std::array<std::string_view, 51> kw = {
      "abstract", "assert",     "boolean",   "break",     "byte",       "case",      "catch",    "char",
      "class",    "const",      "continue",  "default",   "do",         "double",    "else",     "enum",
      "extends",  "final",      "finally",   "float",     "for",        "goto",      "if",       "implements",
      "import",   "instanceof", "int",       "interface", "long",       "native",    "new",      "package",
      "private",  "protected",  "public",    "return",    "short",      "static",    "strictfp", "super",
      "switch",   "synchronized", "this",    "throw",     "throws",     "transient", "try",      "void",
      "volatile", "while",      "_"};
  for (auto k : kw) {
    if (k == s) return true;
  }
  return false;
}

namespace detail {

inline bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}
inline bool ident_part(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
inline bool digit(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

}  // namespace detail

/// Lossless Java lexer: the tokens tile the input exactly, so concatenating
/// their text reproduces it. Records, contextual keywords and `@` are left to
/// the parser. Throws TokenizeError on unterminated comments and literals.
inline std::vector<Token> tokenize(std::string_view src) {
  using namespace detail;
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  const std::size_t n = src.size();
  auto at = [&](std::size_t k) -> unsigned char { return k < n ? static_cast<unsigned char>(src[k]) : 0; };

  while (i < n) {
    const std::size_t start = i;
    const std::size_t start_line = line;
    const unsigned char c = at(i);
    TokenKind kind;

    if (space(c)) {
      kind = TokenKind::whitespace;
      while (i < n && space(at(i))) ++i;
    } else if (c == '/' && at(i + 1) == '/') {
      kind = TokenKind::line_comment;
      while (i < n && at(i) != '\n' && at(i) != '\r') ++i;
    } else if (c == '/' && at(i + 1) == '*') {
      kind = TokenKind::block_comment;
      const auto close = src.find("*/", i + 2);
      if (close == std::string_view::npos) throw TokenizeError("unterminated block comment", start_line);
      i = close + 2;
    } else if (c == '"' && at(i + 1) == '"' && at(i + 2) == '"') {
      kind = TokenKind::text_block;
      i += 3;
      while (true) {
        if (i >= n || (at(i) == '\\' && i + 1 >= n)) throw TokenizeError("unterminated text block", start_line);
        if (at(i) == '\\') {
          i += 2;
        } else if (at(i) == '"' && at(i + 1) == '"' && at(i + 2) == '"') {
          i += 3;
          break;
        } else {
          ++i;
        }
      }
    } else if (c == '"' || c == '\'') {
      kind = c == '"' ? TokenKind::string : TokenKind::character;
      ++i;
      while (true) {
        if (i >= n || at(i) == '\n' || at(i) == '\r') {
          throw TokenizeError(kind == TokenKind::string ? "unterminated string literal" : "unterminated character literal",
                              start_line);
        }
        if (at(i) == '\\') {
          if (i + 1 >= n || at(i + 1) == '\n' || at(i + 1) == '\r') {
            throw TokenizeError("unterminated literal", start_line);
          }
          i += 2;
        } else if (at(i) == c) {
          ++i;
          break;
        } else {
          ++i;
        }
      }
    } else if (digit(c) || (c == '.' && digit(at(i + 1)))) {
      kind = TokenKind::number;
      const bool hex = c == '0' && (at(i + 1) == 'x' || at(i + 1) == 'X');
      ++i;
      while (i < n) {
        const unsigned char d = at(i);
        const unsigned char p = at(i - 1);
        const bool exp = hex ? (p == 'p' || p == 'P') : (p == 'e' || p == 'E');
        if (ident_part(d) || d == '.' || ((d == '+' || d == '-') && exp)) {
          ++i;
        } else {
          break;
        }
      }
    } else if (ident_start(c)) {
      while (i < n && ident_part(at(i))) ++i;
      kind = is_java_keyword(src.substr(start, i - start)) ? TokenKind::keyword : TokenKind::identifier;
    } else {
      kind = TokenKind::punct;
      ++i;
    }

    for (std::size_t k = start; k < i; ++k) {
      if (src[k] == '\n' || (src[k] == '\r' && at(k + 1) != '\n')) ++line;
    }
    out.push_back(Token{kind, start, i, start_line});
  }
  return out;
}

/// Physical lines: newline-terminated lines plus a trailing partial line.
inline std::size_t count_lines(std::string_view src) {
  std::size_t lines = 0;
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (src[k] == '\n' || (src[k] == '\r' && (k + 1 >= src.size() || src[k + 1] != '\n'))) ++lines;
  }
  if (!src.empty() && src.back() != '\n' && src.back() != '\r') ++lines;
  return lines;
}

/// Lines on which some comment covers a non-blank character.
inline std::size_t count_comment_lines(std::string_view src, const std::vector<Token>& tokens) {
  std::vector<bool> marked(count_lines(src) + 2, false);
  for (const auto& t : tokens) {
    if (!t.is_comment()) continue;
    std::size_t line = t.line;
    for (std::size_t k = t.begin; k < t.end; ++k) {
      const char ch = src[k];
      if (ch == '\n' || (ch == '\r' && (k + 1 >= src.size() || src[k + 1] != '\n'))) {
        ++line;
      } else if (!detail::space(static_cast<unsigned char>(ch))) {
        marked[line] = true;
      }
    }
  }
  std::size_t count = 0;
  for (bool b : marked) count += b ? 1 : 0;
  return count;
}

}  // namespace fuzzyeval::metrics
