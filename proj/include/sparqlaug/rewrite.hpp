#pragma once

#include <map>
#include <span>
#include <string>

#include "sparqlaug/ast.hpp"
#include "sparqlaug/augment.hpp"
#include "sparqlaug/diagnostics.hpp"
#include "sparqlaug/schema.hpp"
#include "sparqlaug/strategy.hpp"

namespace sparqlaug {

SelectQuery strip_comments(SelectQuery query);

/// Simultaneous substitution over projection, triples, FILTER spans and
/// ORDER BY keys. Variables missing from `renames` keep their names.
SelectQuery rename_variables(SelectQuery query, const std::map<std::string, std::string>& renames);

/// ?x0, ?x1, ... in first-occurrence order; drops comments.
SelectQuery rename_sequential(const SelectQuery& query);

/// Bound variables take the variable_token of their class label, suffixed
/// 2, 3, ... on collision (binding order). Unbound variables keep their
/// names and are never captured. Comments are left alone.
SelectQuery rename_meaningful(const SelectQuery& query, std::span<const VarClassBinding> bindings,
                              const SchemaGraph& schema);

/// Sets each triple's comment to its predicate's rdfs:label. Triples with
/// variable or unlabelled predicates keep whatever comment they had;
/// predicates unknown to the schema are counted in `diag`.
SelectQuery inject_comments(const SelectQuery& query, const SchemaGraph& schema,
                            Diagnostics* diag = nullptr);

SelectQuery apply_strategy(const SelectQuery& query, Strategy strategy,
                           std::span<const VarClassBinding> bindings, const SchemaGraph& schema,
                           Diagnostics* diag = nullptr);

/// rename_sequential after strip_comments: equal for every strategy
/// applied to the same query.
SelectQuery canonicalize(const SelectQuery& query);

}  // namespace sparqlaug
