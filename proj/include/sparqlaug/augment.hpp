#pragma once

// Seed-catalog augmentation: every class-instance variable of a seed query
// is extended, one property at a time, with a datatype property of its
// class that the seed does not already ask for.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlaug/ast.hpp"
#include "sparqlaug/diagnostics.hpp"
#include "sparqlaug/schema.hpp"
#include "sparqlaug/strategy.hpp"

namespace sparqlaug {

struct SeedExample {
  std::string id;
  std::string question;
  SelectQuery query;
};

enum class BindingEvidence { kExplicitType, kDomainInference };

struct VarClassBinding {
  std::string variable;
  std::string class_iri;
  BindingEvidence evidence = BindingEvidence::kExplicitType;
  bool operator==(const VarClassBinding&) const = default;
};

struct AugmentedExample {
  std::string id;
  std::string seed_id;
  std::string question;
  SelectQuery query;
  /// serialize(query, true) until a strategy is applied.
  std::string query_text;
  std::optional<Strategy> strategy;
  /// Absent iff the example is the seed passed through unchanged.
  std::optional<std::string> added_property;
  std::optional<std::string> added_variable;
};

/// Question templates keyed by id. Placeholders: {question} (the seed
/// question with normalized terminal punctuation), {class}, {property}.
class QuestionTemplateSet {
 public:
  static constexpr std::string_view kDefaultId = "default";

  /// Registers "default" and "include".
  QuestionTemplateSet();

  void add(std::string id, std::string text);
  bool contains(std::string_view id) const;

  /// Throws UnknownTemplateId or InvalidLabel (empty label).
  std::string render(std::string_view id, std::string_view seed_question,
                     std::string_view class_label, std::string_view property_label) const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

/// Trims trailing whitespace and punctuation, then ends the question with
/// `?` if that run contained one and `.` otherwise.
std::string normalize_question(std::string_view question);

std::string question_for_property(std::string_view seed_question, std::string_view class_label,
                                  std::string_view property_label,
                                  std::string_view template_id = QuestionTemplateSet::kDefaultId);

/// One binding per variable, in collect_variables order. Explicit
/// `?v a C` wins over rdfs:domain inference; ambiguous variables are
/// omitted and reported in `diag`.
std::vector<VarClassBinding> find_class_instance_vars(const SelectQuery& query,
                                                      const SchemaGraph& schema,
                                                      Diagnostics* diag = nullptr);

/// Lower-case ASCII alphanumerics of `text`, usable as a variable name.
/// Empty when nothing survives.
std::string variable_token(std::string_view text);

/// Human-readable name for an IRI: its label, else its local name, else
/// the IRI itself. Never empty for a non-empty IRI.
std::string display_label(const SchemaGraph& schema, std::string_view iri);

struct AugmentOptions {
  std::string template_id = std::string(QuestionTemplateSet::kDefaultId);
  bool include_seeds = false;
};

/// Augmented examples for one seed, ids `<seed>/aug1`, `<seed>/aug2`, ...
std::vector<AugmentedExample> augment_seed(const SeedExample& seed, const SchemaGraph& schema,
                                           const QuestionTemplateSet& templates,
                                           const AugmentOptions& options = {},
                                           Diagnostics* diag = nullptr);

/// Seeds in order; with include_seeds each seed's pass-through (id = seed
/// id) precedes its augmentations. Throws DuplicateSeedId.
std::vector<AugmentedExample> augment_catalog(std::span<const SeedExample> seeds,
                                              const SchemaGraph& schema,
                                              const QuestionTemplateSet& templates,
                                              const AugmentOptions& options = {},
                                              Diagnostics* diag = nullptr);

}  // namespace sparqlaug
