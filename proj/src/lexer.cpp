#include "lexer.hpp"

#include <cctype>

namespace sparqlaug::detail {

namespace {

bool is_name_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}
bool is_name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}
bool is_pn_char(unsigned char c) {
  return is_name_char(c) || c == '-' || c == '.';
}
bool is_local_char(unsigned char c) {
  return is_pn_char(c) || c == ':' || c == '%';
}

void append_utf8(std::string& out, unsigned long cp) {
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

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_whitespace();
      if (at_end()) break;
      tokens.push_back(next(tokens.empty() ? nullptr : &tokens.back()));
    }
    Token end;
    end.kind = TokenKind::kEnd;
    end.pos = position();
    end.end_offset = pos_;
    tokens.push_back(std::move(end));
    return tokens;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  unsigned char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size()
               ? static_cast<unsigned char>(text_[pos_ + ahead])
               : '\0';
  }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }
  SourcePosition position() const {
    return SourcePosition{pos_, line_, pos_ - line_start_ + 1};
  }

  void skip_whitespace() {
    while (!at_end() && std::isspace(peek())) advance();
  }

  [[noreturn]] void fail(const SourcePosition& at, std::string what) const {
    throw SyntaxError(at, {std::move(what)},
                      at.offset < text_.size()
                          ? std::string(1, text_[at.offset])
                          : std::string());
  }

  Token make(TokenKind kind, SourcePosition start, std::string text) const {
    Token t;
    t.kind = kind;
    t.pos = start;
    t.text = std::move(text);
    t.end_offset = pos_;
    return t;
  }

  bool own_line_at(std::size_t offset) const {
    for (std::size_t i = line_start_; i < offset; ++i) {
      if (!std::isspace(static_cast<unsigned char>(text_[i]))) return false;
    }
    return true;
  }

  Token next(const Token* previous) {
    const SourcePosition start = position();
    const unsigned char c = peek();

    if (c == '#') {
      const bool own_line = own_line_at(pos_);
      while (!at_end() && peek() == '#') advance();
      const std::size_t body = pos_;
      while (!at_end() && peek() != '\n') advance();
      std::string_view raw = text_.substr(body, pos_ - body);
      while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front())))
        raw.remove_prefix(1);
      while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back())))
        raw.remove_suffix(1);
      Token t = make(TokenKind::kComment, start, std::string(raw));
      t.own_line = own_line;
      return t;
    }
    if ((c == '?' || c == '$') && is_name_char(peek(1))) {
      advance();
      const std::size_t begin = pos_;
      while (!at_end() && is_name_char(peek())) advance();
      std::string name(text_.substr(begin, pos_ - begin));
      if (std::isdigit(static_cast<unsigned char>(name[0]))) {
        fail(start, "variable name starting with a letter or '_'");
      }
      return make(TokenKind::kVariable, start, std::move(name));
    }
    if (c == '<') {
      std::size_t end = pos_ + 1;
      while (end < text_.size()) {
        const unsigned char ch = static_cast<unsigned char>(text_[end]);
        if (ch == '>' || std::isspace(ch) || ch == '<' || ch == '"' ||
            ch == '{' || ch == '}' || ch == '|' || ch == '^' || ch == '`' ||
            ch == '\\') {
          break;
        }
        ++end;
      }
      if (end < text_.size() && text_[end] == '>') {
        std::string value(text_.substr(pos_ + 1, end - pos_ - 1));
        while (pos_ <= end) advance();
        return make(TokenKind::kIri, start, std::move(value));
      }
      advance();
      if (peek() == '=') {
        advance();
        return make(TokenKind::kPunct, start, "<=");
      }
      return make(TokenKind::kPunct, start, "<");
    }
    if (c == '"' || c == '\'') return read_string(start, static_cast<char>(c));
    if (std::isdigit(c) ||
        ((c == '+' || c == '-') && std::isdigit(peek(1)) && !after_operand(previous))) {
      return read_number(start);
    }
    if (c == '@' && std::isalpha(peek(1))) {
      advance();
      const std::size_t begin = pos_;
      while (!at_end() && (std::isalnum(peek()) || peek() == '-')) advance();
      std::string word(text_.substr(begin, pos_ - begin));
      if (previous != nullptr && previous->kind == TokenKind::kString &&
          previous->end_offset == start.offset) {
        return make(TokenKind::kLangTag, start, std::move(word));
      }
      return make(TokenKind::kWord, start, "@" + word);
    }
    if (c == '^' && peek(1) == '^') {
      advance();
      advance();
      return make(TokenKind::kDoubleCaret, start, "^^");
    }
    if (c == ':' || is_name_start(c)) return read_name(start);

    static constexpr std::string_view kDouble[] = {"!=", ">=", "&&", "||"};
    for (std::string_view op : kDouble) {
      if (text_.substr(pos_, 2) == op) {
        advance();
        advance();
        return make(TokenKind::kPunct, start, std::string(op));
      }
    }
    static constexpr std::string_view kSingle = "{}().;,*[]=!<>+-/|^&?";
    if (kSingle.find(static_cast<char>(c)) != std::string_view::npos) {
      advance();
      return make(TokenKind::kPunct, start, std::string(1, static_cast<char>(c)));
    }
    fail(start, "a token");
  }

  static bool after_operand(const Token* previous) {
    if (previous == nullptr) return false;
    switch (previous->kind) {
      case TokenKind::kVariable:
      case TokenKind::kNumber:
      case TokenKind::kString:
      case TokenKind::kIri:
      case TokenKind::kPrefixedName:
      case TokenKind::kLangTag:
        return true;
      case TokenKind::kPunct:
        return previous->text == ")";
      default:
        return false;
    }
  }

  Token read_number(const SourcePosition& start) {
    if (peek() == '+' || peek() == '-') advance();
    while (std::isdigit(peek())) advance();
    if (peek() == '.' && std::isdigit(peek(1))) {
      advance();
      while (std::isdigit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(peek(1)) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(peek(2))))) {
      advance();
      if (peek() == '+' || peek() == '-') advance();
      while (std::isdigit(peek())) advance();
    }
    return make(TokenKind::kNumber, start,
                std::string(text_.substr(start.offset, pos_ - start.offset)));
  }

  Token read_name(const SourcePosition& start) {
    std::size_t end = pos_;
    while (end < text_.size() && is_pn_char(static_cast<unsigned char>(text_[end]))) ++end;
    std::size_t prefix_end = end;
    while (prefix_end > pos_ && text_[prefix_end - 1] == '.') --prefix_end;
    if (prefix_end < text_.size() && text_[prefix_end] == ':') {
      std::string prefix(text_.substr(pos_, prefix_end - pos_));
      while (pos_ <= prefix_end) advance();
      const std::size_t local_begin = pos_;
      std::size_t local_end = local_begin;
      while (local_end < text_.size() &&
             is_local_char(static_cast<unsigned char>(text_[local_end]))) {
        ++local_end;
      }
      while (local_end > local_begin && text_[local_end - 1] == '.') --local_end;
      while (pos_ < local_end) advance();
      std::string local(text_.substr(local_begin, local_end - local_begin));
      Token t = make(prefix == "_" ? TokenKind::kBlankNode : TokenKind::kPrefixedName,
                     start, std::string(text_.substr(start.offset, pos_ - start.offset)));
      t.prefix = std::move(prefix);
      t.local = std::move(local);
      return t;
    }
    while (!at_end() && is_name_char(peek())) advance();
    return make(TokenKind::kWord, start,
                std::string(text_.substr(start.offset, pos_ - start.offset)));
  }

  Token read_string(const SourcePosition& start, char quote) {
    const bool long_form = peek(1) == static_cast<unsigned char>(quote) &&
                           peek(2) == static_cast<unsigned char>(quote);
    const std::size_t skip = long_form ? 3 : 1;
    for (std::size_t i = 0; i < skip; ++i) advance();
    std::string value;
    while (true) {
      if (at_end()) fail(start, "closing quote");
      const char ch = text_[pos_];
      if (long_form) {
        if (ch == quote && peek(1) == static_cast<unsigned char>(quote) &&
            peek(2) == static_cast<unsigned char>(quote)) {
          advance();
          advance();
          advance();
          break;
        }
      } else {
        if (ch == quote) {
          advance();
          break;
        }
        if (ch == '\n' || ch == '\r') fail(start, "closing quote");
      }
      if (ch == '\\') {
        advance();
        if (at_end()) fail(start, "escape sequence");
        const char esc = text_[pos_];
        advance();
        switch (esc) {
          case 't': value += '\t'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'b': value += '\b'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u':
          case 'U': {
            const std::size_t digits = esc == 'u' ? 4 : 8;
            if (pos_ + digits > text_.size()) fail(start, "hex escape");
            unsigned long cp = 0;
            for (std::size_t i = 0; i < digits; ++i) {
              const unsigned char h = peek();
              if (!std::isxdigit(h)) fail(position(), "hex digit");
              cp = cp * 16 + static_cast<unsigned long>(
                                 std::isdigit(h) ? h - '0' : std::tolower(h) - 'a' + 10);
              advance();
            }
            append_utf8(value, cp);
            break;
          }
          default:
            fail(start, "valid escape sequence");
        }
        continue;
      }
      value += ch;
      advance();
    }
    return make(TokenKind::kString, start, std::move(value));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

}  // namespace

bool Token::is_word(std::string_view keyword) const {
  if (kind != TokenKind::kWord || text.size() != keyword.size()) return false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(text[i])) !=
        std::toupper(static_cast<unsigned char>(keyword[i]))) {
      return false;
    }
  }
  return true;
}

std::string Token::describe() const {
  switch (kind) {
    case TokenKind::kEnd: return "";
    case TokenKind::kIri: return "<" + text + ">";
    case TokenKind::kVariable: return "?" + text;
    case TokenKind::kString: return "\"" + text + "\"";
    case TokenKind::kComment: return "#" + text;
    default: return text;
  }
}

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

std::string escape_string_literal(std::string_view value) {
  std::string out;
  out.reserve(value.size() + 2);
  out += '"';
  for (char c : value) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string to_upper_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace sparqlaug::detail
