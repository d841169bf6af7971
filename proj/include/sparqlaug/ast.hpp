#pragma once

// AST for the SELECT subset of SPARQL handled by the rewriting pipeline:
// PREFIX/BASE, SELECT [DISTINCT], basic graph patterns with `;`/`,`
// abbreviations, OPTIONAL, FILTER, UNION, ORDER BY, LIMIT, OFFSET and `#`
// comments. Property paths, subqueries, aggregates, blank nodes and the
// other query forms are rejected with UnsupportedConstruct.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sparqlaug {

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

struct Iri {
  std::string value;
  bool operator==(const Iri&) const = default;
};

struct PrefixedName {
  std::string prefix;
  std::string local;
  bool operator==(const PrefixedName&) const = default;
};

struct Variable {
  std::string name;
  bool operator==(const Variable&) const = default;
  auto operator<=>(const Variable&) const = default;
};

using DatatypeRef = std::variant<Iri, PrefixedName>;

struct Literal {
  /// Unescaped lexical form.
  std::string lexical;
  std::optional<DatatypeRef> datatype;
  std::optional<std::string> language;
  /// Numeric and boolean literals written without quotes.
  bool bare = false;
  bool operator==(const Literal&) const = default;
};

/// The `a` shorthand for rdf:type.
struct TypeKeyword {
  bool operator==(const TypeKeyword&) const = default;
};

using Term = std::variant<Iri, PrefixedName, Variable, Literal, TypeKeyword>;

inline bool is_variable(const Term& t) {
  return std::holds_alternative<Variable>(t);
}
inline const Variable* as_variable(const Term& t) {
  return std::get_if<Variable>(&t);
}
/// True for Iri, PrefixedName and TypeKeyword.
inline bool is_constant_iri(const Term& t) {
  return std::holds_alternative<Iri>(t) ||
         std::holds_alternative<PrefixedName>(t) ||
         std::holds_alternative<TypeKeyword>(t);
}

struct TriplePattern {
  Term subject;
  Term predicate;
  Term object;
  /// No newline, no leading `#`.
  std::optional<std::string> trailing_comment;
  bool operator==(const TriplePattern&) const = default;
};

/// Heap-allocated value with deep copy, used to close the recursive
/// GraphPattern type.
template <class T>
class Box {
 public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  bool operator==(const Box& other) const { return *ptr_ == *other.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct GraphPattern;

struct OptionalPattern {
  Box<GraphPattern> body;
  bool operator==(const OptionalPattern&) const = default;
};

struct FilterPattern {
  /// Byte-exact source of the constraint, e.g. `(?a != ?b)` or
  /// `regex(?l, "^x")`. Always balanced in parentheses.
  std::string expression;
  bool operator==(const FilterPattern&) const = default;
};

struct UnionPattern {
  Box<GraphPattern> left;
  Box<GraphPattern> right;
  bool operator==(const UnionPattern&) const = default;
};

using PatternElement =
    std::variant<TriplePattern, OptionalPattern, FilterPattern, UnionPattern>;

struct GraphPattern {
  std::vector<PatternElement> elements;
  bool operator==(const GraphPattern&) const = default;
};

struct Prologue {
  std::optional<std::string> base;
  /// Declaration order; keys are unique.
  std::vector<std::pair<std::string, std::string>> prefixes;

  const std::string* find(std::string_view prefix) const;
  bool operator==(const Prologue&) const = default;
};

enum class SortDirection { kAscending, kDescending };

struct OrderKey {
  Variable variable;
  SortDirection direction = SortDirection::kAscending;
  bool operator==(const OrderKey&) const = default;
};

struct Projection {
  bool star = false;
  std::vector<Variable> variables;
  bool operator==(const Projection&) const = default;
};

struct SolutionModifiers {
  std::vector<OrderKey> order_by;
  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> offset;
  bool operator==(const SolutionModifiers&) const = default;
};

struct SelectQuery {
  Prologue prologue;
  bool distinct = false;
  Projection projection;
  GraphPattern where;
  SolutionModifiers modifiers;
  bool operator==(const SelectQuery&) const = default;
};

/// Parses a query of the supported subset. Full-line comments inside the
/// WHERE clause bind to the next triple, end-of-line comments to the triple
/// that ends on that line. Throws SyntaxError, UnsupportedConstruct or
/// SemanticError.
SelectQuery parse_query(std::string_view text);

/// Canonical layout: one prefix per line, one triple per line terminated
/// by ` .`, two spaces of indentation per nesting level.
/// Throws UnresolvablePrefix for prefixed names missing from the prologue.
std::string serialize(const SelectQuery& query, bool emit_comments = true);

/// Variables in first-occurrence order over projection, then WHERE.
std::vector<Variable> collect_variables(const SelectQuery& query);

/// Absolute IRI of an Iri, PrefixedName or TypeKeyword term.
std::string resolve_term(const Term& term, const Prologue& prologue);

/// Throws SemanticError when the query breaks a SelectQuery invariant.
void check_invariants(const SelectQuery& query);

bool is_valid_variable_name(std::string_view name);

/// Variable names mentioned in a raw FILTER span, in order of appearance,
/// with repetitions. String literals and IRIs are skipped.
std::vector<std::string> expression_variables(std::string_view expression);

/// Token-boundary-aware simultaneous substitution of variable names in a
/// raw expression. Names absent from `renames` are left alone.
std::string rename_expression_variables(
    std::string_view expression,
    const std::map<std::string, std::string>& renames);

template <class Pattern, class Fn>
void for_each_triple(Pattern& pattern, Fn&& fn) {
  for (auto& element : pattern.elements) {
    std::visit(
        [&](auto& e) {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, TriplePattern>) {
            fn(e);
          } else if constexpr (std::is_same_v<E, OptionalPattern>) {
            for_each_triple(*e.body, fn);
          } else if constexpr (std::is_same_v<E, UnionPattern>) {
            for_each_triple(*e.left, fn);
            for_each_triple(*e.right, fn);
          }
        },
        element);
  }
}

std::size_t count_triples(const GraphPattern& pattern);

}  // namespace sparqlaug
