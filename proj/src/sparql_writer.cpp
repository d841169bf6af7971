#include <cctype>
#include <set>

#include "lexer.hpp"
#include "sparqlaug/ast.hpp"

namespace sparqlaug {

namespace {

bool name_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

/// Calls `on_variable(sigil_offset, name)` for every variable in a raw
/// expression, skipping string literals and IRIs.
template <class Fn>
void scan_expression(std::string_view expr, Fn&& on_variable) {
  std::size_t i = 0;
  while (i < expr.size()) {
    const char c = expr[i];
    if (c == '"' || c == '\'') {
      const bool long_form = expr.substr(i, 3) == std::string(3, c);
      const std::size_t width = long_form ? 3 : 1;
      i += width;
      while (i < expr.size()) {
        if (expr[i] == '\\') {
          i += 2;
          continue;
        }
        if (long_form ? expr.substr(i, 3) == std::string(3, c) : expr[i] == c) {
          i += width;
          break;
        }
        ++i;
      }
      continue;
    }
    if (c == '<') {
      std::size_t j = i + 1;
      while (j < expr.size() && expr[j] != '>' &&
             !std::isspace(static_cast<unsigned char>(expr[j])) && expr[j] != '<' &&
             expr[j] != '"') {
        ++j;
      }
      i = (j < expr.size() && expr[j] == '>') ? j + 1 : i + 1;
      continue;
    }
    if ((c == '?' || c == '$') && i + 1 < expr.size() &&
        name_char(static_cast<unsigned char>(expr[i + 1]))) {
      std::size_t j = i + 1;
      while (j < expr.size() && name_char(static_cast<unsigned char>(expr[j]))) ++j;
      on_variable(i, expr.substr(i + 1, j - i - 1));
      i = j;
      continue;
    }
    ++i;
  }
}

class Writer {
 public:
  Writer(const SelectQuery& query, bool emit_comments)
      : query_(query), emit_comments_(emit_comments) {}

  std::string run() {
    const auto& prologue = query_.prologue;
    if (prologue.base) out_ += "BASE <" + *prologue.base + ">\n";
    for (const auto& [prefix, iri] : prologue.prefixes) {
      out_ += "PREFIX " + prefix + ": <" + iri + ">\n";
    }
    out_ += "SELECT ";
    if (query_.distinct) out_ += "DISTINCT ";
    if (query_.projection.star) {
      out_ += "* ";
    } else {
      for (const auto& v : query_.projection.variables) out_ += variable(v) + " ";
    }
    out_ += "WHERE {\n";
    write_group(query_.where, 1);
    out_ += "}\n";

    const auto& mods = query_.modifiers;
    if (!mods.order_by.empty()) {
      out_ += "ORDER BY";
      for (const auto& key : mods.order_by) {
        out_ += key.direction == SortDirection::kDescending
                    ? " DESC(" + variable(key.variable) + ")"
                    : " " + variable(key.variable);
      }
      out_ += "\n";
    }
    if (mods.limit) out_ += "LIMIT " + std::to_string(*mods.limit) + "\n";
    if (mods.offset) out_ += "OFFSET " + std::to_string(*mods.offset) + "\n";
    return std::move(out_);
  }

 private:
  static std::string variable(const Variable& v) {
    if (!is_valid_variable_name(v.name)) {
      throw SemanticError("invalid variable name '" + v.name + "'");
    }
    return "?" + v.name;
  }

  std::string prefixed(const PrefixedName& name) const {
    if (query_.prologue.find(name.prefix) == nullptr) throw UnresolvablePrefix(name.prefix);
    return name.prefix + ":" + name.local;
  }

  std::string term(const Term& t) const {
    return std::visit(
        [&](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Iri>) {
            return "<" + v.value + ">";
          } else if constexpr (std::is_same_v<T, PrefixedName>) {
            return prefixed(v);
          } else if constexpr (std::is_same_v<T, Variable>) {
            return variable(v);
          } else if constexpr (std::is_same_v<T, TypeKeyword>) {
            return "a";
          } else {
            if (v.bare) return v.lexical;
            std::string s = detail::escape_string_literal(v.lexical);
            if (v.language) {
              s += "@" + *v.language;
            } else if (v.datatype) {
              s += "^^";
              s += std::holds_alternative<Iri>(*v.datatype)
                       ? "<" + std::get<Iri>(*v.datatype).value + ">"
                       : prefixed(std::get<PrefixedName>(*v.datatype));
            }
            return s;
          }
        },
        t);
  }

  void indent(int level) { out_.append(static_cast<std::size_t>(level) * 2, ' '); }

  void write_group(const GraphPattern& group, int level) {
    for (const auto& element : group.elements) {
      std::visit(
          [&](const auto& e) {
            using E = std::decay_t<decltype(e)>;
            indent(level);
            if constexpr (std::is_same_v<E, TriplePattern>) {
              out_ += term(e.subject) + " " + term(e.predicate) + " " + term(e.object) + " .";
              if (emit_comments_ && e.trailing_comment && !e.trailing_comment->empty()) {
                if (e.trailing_comment->find_first_of("\r\n") != std::string::npos) {
                  throw SemanticError("comment contains a line break");
                }
                out_ += " # " + *e.trailing_comment;
              }
              out_ += "\n";
            } else if constexpr (std::is_same_v<E, OptionalPattern>) {
              out_ += "OPTIONAL {\n";
              write_group(*e.body, level + 1);
              indent(level);
              out_ += "}\n";
            } else if constexpr (std::is_same_v<E, FilterPattern>) {
              out_ += "FILTER";
              if (e.expression.empty() || e.expression.front() != '(') out_ += " ";
              out_ += e.expression + "\n";
            } else {
              out_ += "{\n";
              write_group(*e.left, level + 1);
              indent(level);
              out_ += "} UNION {\n";
              write_group(*e.right, level + 1);
              indent(level);
              out_ += "}\n";
            }
          },
          element);
    }
  }

  const SelectQuery& query_;
  bool emit_comments_;
  std::string out_;
};

void collect_where(const GraphPattern& where, std::vector<Variable>& out,
                   std::set<std::string>& seen, bool include_filters) {
  auto add = [&](std::string_view name) {
    if (seen.insert(std::string(name)).second) out.push_back(Variable{std::string(name)});
  };
  for (const auto& element : where.elements) {
    std::visit(
        [&](const auto& e) {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, TriplePattern>) {
            for (const Term* t : {&e.subject, &e.predicate, &e.object}) {
              if (const auto* v = as_variable(*t)) add(v->name);
            }
          } else if constexpr (std::is_same_v<E, OptionalPattern>) {
            collect_where(*e.body, out, seen, include_filters);
          } else if constexpr (std::is_same_v<E, FilterPattern>) {
            if (include_filters) {
              for (const auto& name : expression_variables(e.expression)) add(name);
            }
          } else {
            collect_where(*e.left, out, seen, include_filters);
            collect_where(*e.right, out, seen, include_filters);
          }
        },
        element);
  }
}

}  // namespace

const std::string* Prologue::find(std::string_view prefix) const {
  for (const auto& [name, iri] : prefixes) {
    if (name == prefix) return &iri;
  }
  return nullptr;
}

std::string serialize(const SelectQuery& query, bool emit_comments) {
  return Writer(query, emit_comments).run();
}

std::vector<Variable> collect_variables(const SelectQuery& query) {
  std::vector<Variable> out;
  std::set<std::string> seen;
  for (const auto& v : query.projection.variables) {
    if (seen.insert(v.name).second) out.push_back(v);
  }
  collect_where(query.where, out, seen, true);
  return out;
}

std::string resolve_term(const Term& term, const Prologue& prologue) {
  if (std::holds_alternative<TypeKeyword>(term)) return std::string(kRdfType);
  if (const auto* name = std::get_if<PrefixedName>(&term)) {
    const std::string* ns = prologue.find(name->prefix);
    if (ns == nullptr) throw UnresolvablePrefix(name->prefix);
    return *ns + name->local;
  }
  if (const auto* iri = std::get_if<Iri>(&term)) {
    if (prologue.base && iri->value.find(':') == std::string::npos) {
      return *prologue.base + iri->value;
    }
    return iri->value;
  }
  throw SemanticError("term is not an IRI");
}

void check_invariants(const SelectQuery& query) {
  std::vector<Variable> bound;
  std::set<std::string> seen;
  collect_where(query.where, bound, seen, false);
  for (const auto& v : query.projection.variables) {
    if (!is_valid_variable_name(v.name)) {
      throw SemanticError("invalid variable name '" + v.name + "'");
    }
    if (!seen.contains(v.name)) {
      throw SemanticError("projected variable ?" + v.name +
                          " does not occur in the WHERE clause");
    }
  }
  std::set<std::string> prefixes;
  for (const auto& [prefix, iri] : query.prologue.prefixes) {
    if (!prefixes.insert(prefix).second) {
      throw SemanticError("prefix '" + prefix + ":' declared twice");
    }
  }
}

bool is_valid_variable_name(std::string_view name) {
  if (name.empty()) return false;
  const auto first = static_cast<unsigned char>(name.front());
  if (!std::isalpha(first) && first != '_') return false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x80 || (!std::isalnum(u) && u != '_')) return false;
  }
  return true;
}

std::vector<std::string> expression_variables(std::string_view expression) {
  std::vector<std::string> names;
  scan_expression(expression, [&](std::size_t, std::string_view name) {
    names.emplace_back(name);
  });
  return names;
}

std::string rename_expression_variables(
    std::string_view expression, const std::map<std::string, std::string>& renames) {
  std::string out;
  std::size_t copied = 0;
  scan_expression(expression, [&](std::size_t at, std::string_view name) {
    auto it = renames.find(std::string(name));
    if (it == renames.end()) return;
    out.append(expression.substr(copied, at + 1 - copied));
    out += it->second;
    copied = at + 1 + name.size();
  });
  out.append(expression.substr(copied));
  return out;
}

std::size_t count_triples(const GraphPattern& pattern) {
  std::size_t n = 0;
  for_each_triple(pattern, [&](const TriplePattern&) { ++n; });
  return n;
}

}  // namespace sparqlaug
