#pragma once

// Tokenizer shared by the SPARQL and Turtle-subset readers.

#include <string>
#include <string_view>
#include <vector>

#include "sparqlaug/errors.hpp"

namespace sparqlaug::detail {

enum class TokenKind {
  kIri,           // text = content between < >
  kPrefixedName,  // prefix / local split out; text = raw source
  kVariable,      // text = name without ? or $
  kString,        // text = unescaped value
  kNumber,        // text = raw source
  kWord,          // bare keyword or identifier, including `a` and `@prefix`
  kLangTag,       // text = tag without @
  kDoubleCaret,
  kBlankNode,     // `_:x`
  kPunct,         // single or double character operator
  kComment,       // text = body after the leading #'s, trimmed
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  std::string prefix;
  std::string local;
  SourcePosition pos;
  std::size_t end_offset = 0;
  /// Comments only: nothing but whitespace precedes it on its line.
  bool own_line = false;

  bool is_punct(std::string_view p) const {
    return kind == TokenKind::kPunct && text == p;
  }
  /// Case-insensitive keyword test.
  bool is_word(std::string_view keyword) const;
  std::string describe() const;
};

/// Tokenizes the whole input. Comments are kept as tokens; the final
/// token is always kEnd.
std::vector<Token> tokenize(std::string_view text);

std::string escape_string_literal(std::string_view value);
std::string to_upper_ascii(std::string_view s);

}  // namespace sparqlaug::detail
