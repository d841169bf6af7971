#pragma once

// Glue between augmentation, rewriting and dataset records, shared by the
// CLI and the Python module.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlaug/augment.hpp"
#include "sparqlaug/dataset.hpp"
#include "sparqlaug/diagnostics.hpp"
#include "sparqlaug/schema.hpp"
#include "sparqlaug/strategy.hpp"

namespace sparqlaug {

/// Applies `strategy` to the example's query and fills query_text and
/// strategy. Bindings are recomputed on the (possibly augmented) query.
AugmentedExample apply_strategy(AugmentedExample example, Strategy strategy,
                                const SchemaGraph& schema, Diagnostics* diag = nullptr);

DatasetRecord to_record(const AugmentedExample& example);

/// augment_catalog, then apply_strategy on every example.
std::vector<DatasetRecord> generate_dataset(std::span<const SeedExample> seeds,
                                            const SchemaGraph& schema,
                                            const QuestionTemplateSet& templates,
                                            const AugmentOptions& options, Strategy strategy,
                                            Diagnostics* diag = nullptr);

/// parse_query, apply_strategy, serialize.
std::string rewrite_query_text(std::string_view text, Strategy strategy,
                               const SchemaGraph& schema, Diagnostics* diag = nullptr);

}  // namespace sparqlaug
