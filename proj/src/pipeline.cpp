#include "sparqlaug/pipeline.hpp"

#include "sparqlaug/rewrite.hpp"

namespace sparqlaug {

AugmentedExample apply_strategy(AugmentedExample example, Strategy strategy,
                                const SchemaGraph& schema, Diagnostics* diag) {
  const auto bindings = find_class_instance_vars(example.query, schema);
  example.query = apply_strategy(example.query, strategy, bindings, schema, diag);
  example.query_text = serialize(example.query, true);
  example.strategy = strategy;
  return example;
}

DatasetRecord to_record(const AugmentedExample& example) {
  DatasetRecord r;
  r.id = example.id;
  r.question = example.question;
  r.query = example.query_text;
  r.strategy = example.strategy ? std::string(to_string(*example.strategy)) : "";
  r.seed_id = example.seed_id;
  r.added_property = example.added_property;
  return r;
}

std::vector<DatasetRecord> generate_dataset(std::span<const SeedExample> seeds,
                                            const SchemaGraph& schema,
                                            const QuestionTemplateSet& templates,
                                            const AugmentOptions& options, Strategy strategy,
                                            Diagnostics* diag) {
  std::vector<DatasetRecord> records;
  for (auto& example : augment_catalog(seeds, schema, templates, options, diag)) {
    records.push_back(to_record(apply_strategy(std::move(example), strategy, schema, diag)));
  }
  return records;
}

std::string rewrite_query_text(std::string_view text, Strategy strategy,
                               const SchemaGraph& schema, Diagnostics* diag) {
  const SelectQuery query = parse_query(text);
  const auto bindings = find_class_instance_vars(query, schema, diag);
  return serialize(apply_strategy(query, strategy, bindings, schema, diag), true);
}

}  // namespace sparqlaug
