#include <algorithm>
#include <charconv>
#include <set>

#include "lexer.hpp"
#include "sparqlaug/ast.hpp"

namespace sparqlaug {

using detail::Token;
using detail::TokenKind;

namespace {

struct CommentSite {
  std::string text;
  std::size_t line = 0;
  bool own_line = false;
  std::size_t offset = 0;
  /// Index (into the comment-free token list) of the token that follows.
  std::size_t next_token = 0;
};

/// Source extent of a parsed triple, by index into the token list.
struct TripleSite {
  std::size_t first_token = 0;
  std::size_t last_token = 0;
  std::size_t end_line = 0;
};

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : text_(text) {
    for (auto& token : detail::tokenize(text)) {
      if (token.kind == TokenKind::kComment) {
        CommentSite site;
        site.text = std::move(token.text);
        site.line = token.pos.line;
        site.own_line = token.own_line;
        site.offset = token.pos.offset;
        site.next_token = tokens_.size();
        comments_.push_back(std::move(site));
      } else {
        tokens_.push_back(std::move(token));
      }
    }
  }

  SelectQuery parse() {
    SelectQuery query;
    parse_prologue(query.prologue);
    reject_other_forms();
    expect_word("SELECT", {"SELECT"});
    if (peek().is_word("DISTINCT")) {
      query.distinct = true;
      advance();
    } else if (peek().is_word("REDUCED")) {
      unsupported("REDUCED");
    }
    parse_projection(query.projection);
    if (peek().is_word("FROM")) unsupported("FROM");
    if (peek().is_word("WHERE")) advance();
    if (!peek().is_punct("{")) syntax_error({"WHERE", "{"});
    where_open_ = index_;
    query.where = parse_group();
    where_close_ = index_ - 1;
    parse_modifiers(query.modifiers);
    if (peek().kind != TokenKind::kEnd) syntax_error({"end of query"});
    attach_comments(query.where);
    check_invariants(query);
    return query;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(index_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = tokens_[index_];
    if (index_ + 1 < tokens_.size()) ++index_;
    return t;
  }

  [[noreturn]] void syntax_error(std::vector<std::string> expected) const {
    throw SyntaxError(peek().pos, std::move(expected), peek().describe());
  }
  [[noreturn]] void unsupported(std::string name) const {
    throw UnsupportedConstruct(std::move(name), peek().pos);
  }

  void expect_punct(std::string_view p) {
    if (!peek().is_punct(p)) syntax_error({"'" + std::string(p) + "'"});
    advance();
  }
  void expect_word(std::string_view w, std::vector<std::string> expected) {
    if (!peek().is_word(w)) syntax_error(std::move(expected));
    advance();
  }

  void parse_prologue(Prologue& prologue) {
    std::set<std::string> seen;
    while (true) {
      if (peek().is_word("BASE")) {
        advance();
        if (peek().kind != TokenKind::kIri) syntax_error({"IRI"});
        prologue.base = advance().text;
      } else if (peek().is_word("PREFIX")) {
        advance();
        const Token& name = peek();
        if (name.kind != TokenKind::kPrefixedName || !name.local.empty()) {
          syntax_error({"prefix name"});
        }
        std::string prefix = name.prefix;
        advance();
        if (peek().kind != TokenKind::kIri) syntax_error({"IRI"});
        std::string iri = advance().text;
        if (!seen.insert(prefix).second) {
          throw SemanticError("prefix '" + prefix + ":' declared twice");
        }
        prologue.prefixes.emplace_back(std::move(prefix), std::move(iri));
      } else {
        return;
      }
    }
  }

  void reject_other_forms() {
    for (const char* form : {"CONSTRUCT", "ASK", "DESCRIBE", "INSERT", "DELETE",
                             "LOAD", "CLEAR", "DROP", "CREATE", "WITH"}) {
      if (peek().is_word(form)) unsupported(form);
    }
  }

  void parse_projection(Projection& projection) {
    if (peek().is_punct("*")) {
      advance();
      projection.star = true;
      return;
    }
    while (true) {
      if (peek().kind == TokenKind::kVariable) {
        projection.variables.push_back(Variable{advance().text});
      } else if (peek().is_punct("(")) {
        unsupported("projection expression");
      } else {
        break;
      }
    }
    if (projection.variables.empty()) {
      syntax_error({"DISTINCT", "'*'", "variable"});
    }
  }

  GraphPattern parse_group() {
    expect_punct("{");
    if (peek().is_word("SELECT")) unsupported("subquery");
    GraphPattern group;
    while (!peek().is_punct("}")) {
      const Token& t = peek();
      if (t.kind == TokenKind::kEnd) syntax_error({"'}'"});
      if (t.is_word("OPTIONAL")) {
        advance();
        if (!peek().is_punct("{")) syntax_error({"'{'"});
        group.elements.emplace_back(OptionalPattern{parse_group()});
        skip_dot();
      } else if (t.is_word("FILTER")) {
        advance();
        group.elements.emplace_back(parse_filter());
        skip_dot();
      } else if (t.is_punct("{")) {
        group.elements.emplace_back(parse_union());
        skip_dot();
      } else if (t.is_word("BIND") || t.is_word("VALUES") || t.is_word("MINUS") ||
                 t.is_word("GRAPH") || t.is_word("SERVICE")) {
        unsupported(detail::to_upper_ascii(t.text));
      } else if (t.is_punct(".")) {
        syntax_error({"triple pattern", "'}'"});
      } else {
        parse_triples_block(group);
      }
    }
    advance();
    return group;
  }

  void skip_dot() {
    if (peek().is_punct(".")) advance();
  }

  UnionPattern parse_union() {
    GraphPattern left = parse_group();
    if (!peek().is_word("UNION")) unsupported("nested group");
    advance();
    if (!peek().is_punct("{")) syntax_error({"'{'"});
    UnionPattern result{std::move(left), parse_group()};
    while (peek().is_word("UNION")) {
      advance();
      if (!peek().is_punct("{")) syntax_error({"'{'"});
      GraphPattern wrapped;
      wrapped.elements.emplace_back(std::move(result));
      result = UnionPattern{std::move(wrapped), parse_group()};
    }
    return result;
  }

  FilterPattern parse_filter() {
    const Token& head = peek();
    if (head.is_word("NOT") || head.is_word("EXISTS")) unsupported("FILTER EXISTS");
    const std::size_t begin = head.pos.offset;
    if (!head.is_punct("(")) {
      const bool call = head.kind == TokenKind::kWord ||
                        head.kind == TokenKind::kPrefixedName ||
                        head.kind == TokenKind::kIri;
      if (!call) syntax_error({"'('", "function call"});
      advance();
      if (!peek().is_punct("(")) syntax_error({"'('"});
    }
    int depth = 0;
    std::size_t end = begin;
    do {
      const Token& t = peek();
      if (t.kind == TokenKind::kEnd) syntax_error({"')'"});
      if (t.is_punct("{") || t.is_punct("}")) unsupported("FILTER EXISTS");
      if (t.is_word("EXISTS")) unsupported("FILTER EXISTS");
      if (t.is_punct("(")) ++depth;
      if (t.is_punct(")")) --depth;
      end = t.end_offset;
      advance();
    } while (depth > 0);
    filter_spans_.emplace_back(begin, end);
    return FilterPattern{std::string(text_.substr(begin, end - begin))};
  }

  void parse_triples_block(GraphPattern& group) {
    while (true) {
      const std::size_t first = index_;
      Term subject = parse_subject();
      parse_property_list(group, subject, first);
      if (!peek().is_punct(".")) return;
      advance();
      const Token& t = peek();
      const bool starts_term =
          t.kind == TokenKind::kVariable || t.kind == TokenKind::kIri ||
          t.kind == TokenKind::kPrefixedName || t.kind == TokenKind::kBlankNode ||
          t.is_punct("[") || t.is_punct("(");
      if (!starts_term) return;
    }
  }

  void parse_property_list(GraphPattern& group, const Term& subject,
                           std::size_t first) {
    while (true) {
      Term predicate = parse_predicate();
      while (true) {
        Term object = parse_object();
        TripleSite site{first, index_ - 1, tokens_[index_ - 1].pos.line};
        triple_sites_.push_back(site);
        group.elements.emplace_back(TriplePattern{subject, predicate, std::move(object), {}});
        if (!peek().is_punct(",")) break;
        advance();
        first = index_;
      }
      if (!peek().is_punct(";")) return;
      while (peek().is_punct(";")) advance();
      const Token& t = peek();
      if (t.is_punct(".") || t.is_punct("}")) return;
      first = index_;
    }
  }

  void reject_blank_or_collection() {
    const Token& t = peek();
    if (t.kind == TokenKind::kBlankNode || t.is_punct("[")) unsupported("blank node");
    if (t.is_punct("(")) unsupported("collection");
  }

  Term parse_subject() {
    reject_blank_or_collection();
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kVariable: return Variable{advance().text};
      case TokenKind::kIri: return Iri{advance().text};
      case TokenKind::kPrefixedName: {
        const Token& n = advance();
        return PrefixedName{n.prefix, n.local};
      }
      default:
        syntax_error({"triple pattern", "'}'"});
    }
  }

  Term parse_predicate() {
    const Token& t = peek();
    if (t.is_punct("^") || t.is_punct("!") || t.is_punct("(")) unsupported("property path");
    Term predicate;
    if (t.kind == TokenKind::kVariable) {
      predicate = Variable{advance().text};
    } else if (t.kind == TokenKind::kIri) {
      predicate = Iri{advance().text};
    } else if (t.kind == TokenKind::kPrefixedName) {
      const Token& n = advance();
      predicate = PrefixedName{n.prefix, n.local};
    } else if (t.kind == TokenKind::kWord && t.text == "a") {
      advance();
      predicate = TypeKeyword{};
    } else {
      syntax_error({"predicate"});
    }
    const Token& after = peek();
    if (after.is_punct("/") || after.is_punct("|") || after.is_punct("*") ||
        (after.is_punct("+") && !signed_number_ahead()) || after.is_punct("?")) {
      unsupported("property path");
    }
    return predicate;
  }

  // `:p -5` lexes as punct then number because `-` after an operand is
  // normally an operator; a detached sign glued to its digits is a literal.
  bool signed_number_ahead() const {
    const Token& sign = peek();
    const Token& number = peek(1);
    return (sign.is_punct("+") || sign.is_punct("-")) && number.kind == TokenKind::kNumber &&
           number.pos.offset == sign.end_offset && index_ > 0 &&
           tokens_[index_ - 1].end_offset < sign.pos.offset;
  }

  Term parse_object() {
    reject_blank_or_collection();
    if (signed_number_ahead()) {
      Literal lit;
      lit.lexical = advance().text;
      lit.lexical += advance().text;
      lit.bare = true;
      return lit;
    }
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kVariable: return Variable{advance().text};
      case TokenKind::kIri: return Iri{advance().text};
      case TokenKind::kPrefixedName: {
        const Token& n = advance();
        return PrefixedName{n.prefix, n.local};
      }
      case TokenKind::kNumber: {
        Literal lit;
        lit.lexical = advance().text;
        lit.bare = true;
        return lit;
      }
      case TokenKind::kString: {
        Literal lit;
        lit.lexical = advance().text;
        if (peek().kind == TokenKind::kLangTag) {
          lit.language = advance().text;
        } else if (peek().kind == TokenKind::kDoubleCaret) {
          advance();
          const Token& dt = peek();
          if (dt.kind == TokenKind::kIri) {
            lit.datatype = Iri{advance().text};
          } else if (dt.kind == TokenKind::kPrefixedName) {
            const Token& n = advance();
            lit.datatype = PrefixedName{n.prefix, n.local};
          } else {
            syntax_error({"datatype IRI"});
          }
        }
        return lit;
      }
      case TokenKind::kWord:
        if (t.text == "true" || t.text == "false") {
          Literal lit;
          lit.lexical = advance().text;
          lit.bare = true;
          return lit;
        }
        [[fallthrough]];
      default:
        syntax_error({"object"});
    }
  }

  void parse_modifiers(SolutionModifiers& modifiers) {
    if (peek().is_word("GROUP")) unsupported("GROUP BY");
    if (peek().is_word("HAVING")) unsupported("HAVING");
    if (peek().is_word("ORDER")) {
      advance();
      expect_word("BY", {"BY"});
      while (true) {
        const Token& t = peek();
        if (t.kind == TokenKind::kVariable) {
          modifiers.order_by.push_back({Variable{advance().text}, SortDirection::kAscending});
        } else if (t.is_word("ASC") || t.is_word("DESC")) {
          const SortDirection dir =
              t.is_word("ASC") ? SortDirection::kAscending : SortDirection::kDescending;
          advance();
          expect_punct("(");
          if (peek().kind != TokenKind::kVariable) unsupported("ORDER BY expression");
          modifiers.order_by.push_back({Variable{advance().text}, dir});
          expect_punct(")");
        } else if (t.is_punct("(")) {
          unsupported("ORDER BY expression");
        } else {
          break;
        }
      }
      if (modifiers.order_by.empty()) syntax_error({"variable", "ASC", "DESC"});
    }
    for (int i = 0; i < 2; ++i) {
      if (peek().is_word("LIMIT") && !modifiers.limit) {
        advance();
        modifiers.limit = parse_unsigned();
      } else if (peek().is_word("OFFSET") && !modifiers.offset) {
        advance();
        modifiers.offset = parse_unsigned();
      }
    }
  }

  std::uint64_t parse_unsigned() {
    const Token& t = peek();
    std::uint64_t value = 0;
    if (t.kind == TokenKind::kNumber) {
      const char* first = t.text.data();
      const char* last = first + t.text.size();
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec == std::errc() && ptr == last) {
        advance();
        return value;
      }
    }
    syntax_error({"non-negative integer"});
  }

  bool inside_filter(std::size_t offset) const {
    return std::any_of(filter_spans_.begin(), filter_spans_.end(), [&](const auto& s) {
      return offset >= s.first && offset < s.second;
    });
  }

  void attach_comments(GraphPattern& where) {
    std::vector<std::string> attached(triple_sites_.size());
    auto append = [&](std::size_t triple, const std::string& text) {
      if (text.empty()) return;
      if (!attached[triple].empty()) attached[triple] += ' ';
      attached[triple] += text;
    };
    // Comments that must attach to the first triple starting at or after a
    // given token index, kept in source order.
    std::vector<std::pair<std::size_t, const CommentSite*>> pending;
    for (const auto& comment : comments_) {
      if (comment.next_token <= where_open_ || comment.next_token > where_close_ ||
          inside_filter(comment.offset)) {
        continue;
      }
      if (!comment.own_line) {
        std::size_t last = triple_sites_.size();
        for (std::size_t i = 0; i < triple_sites_.size(); ++i) {
          if (triple_sites_[i].last_token < comment.next_token) last = i;
        }
        if (last < triple_sites_.size() && triple_sites_[last].end_line == comment.line) {
          append(last, comment.text);
          continue;
        }
      }
      pending.emplace_back(comment.next_token, &comment);
    }
    std::vector<std::string> leading(triple_sites_.size());
    for (const auto& [next_token, comment] : pending) {
      for (std::size_t i = 0; i < triple_sites_.size(); ++i) {
        if (triple_sites_[i].first_token >= next_token) {
          if (!comment->text.empty()) {
            if (!leading[i].empty()) leading[i] += ' ';
            leading[i] += comment->text;
          }
          break;
        }
      }
    }
    for (std::size_t i = 0; i < attached.size(); ++i) {
      if (leading[i].empty()) continue;
      attached[i] = attached[i].empty() ? leading[i] : leading[i] + ' ' + attached[i];
    }
    std::size_t seq = 0;
    for_each_triple(where, [&](TriplePattern& triple) {
      if (!attached[seq].empty()) triple.trailing_comment = attached[seq];
      ++seq;
    });
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::vector<CommentSite> comments_;
  std::vector<TripleSite> triple_sites_;
  std::vector<std::pair<std::size_t, std::size_t>> filter_spans_;
  std::size_t index_ = 0;
  std::size_t where_open_ = 0;
  std::size_t where_close_ = 0;
};

}  // namespace

SelectQuery parse_query(std::string_view text) { return QueryParser(text).parse(); }

}  // namespace sparqlaug
