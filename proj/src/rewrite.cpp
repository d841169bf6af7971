#include "sparqlaug/rewrite.hpp"

#include <set>

#include "sparqlaug/errors.hpp"

namespace sparqlaug {

namespace {

void rename_term(Term& term, const std::map<std::string, std::string>& renames) {
  if (auto* v = std::get_if<Variable>(&term)) {
    if (auto it = renames.find(v->name); it != renames.end()) v->name = it->second;
  }
}

void rename_pattern(GraphPattern& pattern, const std::map<std::string, std::string>& renames) {
  for (auto& element : pattern.elements) {
    std::visit(
        [&](auto& e) {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, TriplePattern>) {
            rename_term(e.subject, renames);
            rename_term(e.predicate, renames);
            rename_term(e.object, renames);
          } else if constexpr (std::is_same_v<E, OptionalPattern>) {
            rename_pattern(*e.body, renames);
          } else if constexpr (std::is_same_v<E, FilterPattern>) {
            e.expression = rename_expression_variables(e.expression, renames);
          } else {
            rename_pattern(*e.left, renames);
            rename_pattern(*e.right, renames);
          }
        },
        element);
  }
}

}  // namespace

SelectQuery strip_comments(SelectQuery query) {
  for_each_triple(query.where, [](TriplePattern& t) { t.trailing_comment.reset(); });
  return query;
}

SelectQuery rename_variables(SelectQuery query, const std::map<std::string, std::string>& renames) {
  for (auto& v : query.projection.variables) {
    if (auto it = renames.find(v.name); it != renames.end()) v.name = it->second;
  }
  rename_pattern(query.where, renames);
  for (auto& key : query.modifiers.order_by) {
    if (auto it = renames.find(key.variable.name); it != renames.end()) {
      key.variable.name = it->second;
    }
  }
  return query;
}

SelectQuery rename_sequential(const SelectQuery& query) {
  std::map<std::string, std::string> renames;
  std::size_t k = 0;
  for (const auto& v : collect_variables(query)) renames[v.name] = "x" + std::to_string(k++);
  return strip_comments(rename_variables(query, renames));
}

SelectQuery rename_meaningful(const SelectQuery& query, std::span<const VarClassBinding> bindings,
                              const SchemaGraph& schema) {
  std::set<std::string> present;
  for (const auto& v : collect_variables(query)) present.insert(v.name);

  std::map<std::string, const VarClassBinding*> bound;
  for (const auto& b : bindings) {
    if (present.contains(b.variable)) bound.try_emplace(b.variable, &b);
  }
  // Names of unbound variables are retained and must never be reused.
  std::set<std::string> taken;
  for (const auto& name : present) {
    if (!bound.contains(name)) taken.insert(name);
  }

  std::map<std::string, std::string> renames;
  for (const auto& b : bindings) {
    auto it = bound.find(b.variable);
    if (it == bound.end() || it->second != &b) continue;
    std::string base = variable_token(display_label(schema, b.class_iri));
    if (base.empty()) base = "entity";
    std::string name = base;
    for (int k = 2; taken.contains(name); ++k) name = base + std::to_string(k);
    taken.insert(name);
    renames[b.variable] = name;
  }
  return rename_variables(query, renames);
}

SelectQuery inject_comments(const SelectQuery& query, const SchemaGraph& schema,
                            Diagnostics* diag) {
  SelectQuery out = query;
  std::size_t unknown = 0;
  for_each_triple(out.where, [&](TriplePattern& t) {
    if (!is_constant_iri(t.predicate) || std::holds_alternative<TypeKeyword>(t.predicate)) return;
    std::string iri;
    try {
      iri = resolve_term(t.predicate, out.prologue);
    } catch (const UnresolvablePrefix&) {
      ++unknown;
      return;
    }
    if (iri == kRdfType) return;
    auto it = schema.properties.find(iri);
    if (it == schema.properties.end()) {
      ++unknown;
      return;
    }
    if (it->second.label && !it->second.label->empty()) t.trailing_comment = it->second.label;
  });
  if (diag && unknown > 0) {
    diag->warn(std::to_string(unknown) + " triple(s) with predicates absent from the schema");
  }
  return out;
}

SelectQuery apply_strategy(const SelectQuery& query, Strategy strategy,
                           std::span<const VarClassBinding> bindings, const SchemaGraph& schema,
                           Diagnostics* diag) {
  switch (strategy) {
    case Strategy::kOriginal:
      return strip_comments(query);
    case Strategy::kOriginalWithComments:
      return inject_comments(query, schema, diag);
    case Strategy::kRandomVars:
      return rename_sequential(query);
    case Strategy::kMeaningfulVars:
      return strip_comments(rename_meaningful(query, bindings, schema));
    case Strategy::kMeaningfulVarsComments:
      return inject_comments(rename_meaningful(query, bindings, schema), schema, diag);
  }
  return query;
}

SelectQuery canonicalize(const SelectQuery& query) {
  return rename_sequential(strip_comments(query));
}

}  // namespace sparqlaug
