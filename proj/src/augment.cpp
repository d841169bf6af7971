#include "sparqlaug/augment.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sparqlaug/errors.hpp"
#include "sparqlaug/text_template.hpp"

namespace sparqlaug {

namespace {

std::optional<std::string> try_resolve(const Term& term, const Prologue& prologue) {
  if (!is_constant_iri(term)) return std::nullopt;
  try {
    return resolve_term(term, prologue);
  } catch (const UnresolvablePrefix&) {
    return std::nullopt;
  }
}

bool mentions(const TriplePattern& triple, const std::string& name) {
  for (const Term* t : {&triple.subject, &triple.predicate, &triple.object}) {
    if (const auto* v = as_variable(*t); v && v->name == name) return true;
  }
  return false;
}

bool valid_local_part(std::string_view local) {
  if (local.empty()) return false;
  auto ok = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-' || c == '.'; };
  if (!std::all_of(local.begin(), local.end(), ok)) return false;
  return local.front() != '-' && local.front() != '.' && local.back() != '.';
}

/// Shortest spelling of `iri` the prologue allows.
Term compact_iri(const std::string& iri, const Prologue& prologue) {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& entry : prologue.prefixes) {
    const std::string& ns = entry.second;
    if (iri.size() > ns.size() && iri.compare(0, ns.size(), ns) == 0 &&
        valid_local_part(std::string_view(iri).substr(ns.size())) &&
        (best == nullptr || ns.size() > best->second.size())) {
      best = &entry;
    }
  }
  if (best == nullptr) return Iri{iri};
  return PrefixedName{best->first, iri.substr(best->second.size())};
}

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
  if (!taken.contains(base)) return base;
  for (int k = 2;; ++k) {
    std::string candidate = base + std::to_string(k);
    if (!taken.contains(candidate)) return candidate;
  }
}

}  // namespace

QuestionTemplateSet::QuestionTemplateSet() {
  add(std::string(kDefaultId), "{question} Also show the {property} of the {class}.");
  add("include", "{question} Include the {property} of each {class}.");
}

void QuestionTemplateSet::add(std::string id, std::string text) {
  templates_[std::move(id)] = std::move(text);
}

bool QuestionTemplateSet::contains(std::string_view id) const {
  return templates_.find(id) != templates_.end();
}

std::string QuestionTemplateSet::render(std::string_view id, std::string_view seed_question,
                                        std::string_view class_label,
                                        std::string_view property_label) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) throw UnknownTemplateId(std::string(id));
  if (class_label.empty() || property_label.empty()) {
    throw InvalidLabel("class and property labels must be non-empty");
  }
  return render_template(it->second, {{"question", normalize_question(seed_question)},
                                      {"class", std::string(class_label)},
                                      {"property", std::string(property_label)}});
}

std::string normalize_question(std::string_view question) {
  std::size_t end = question.size();
  bool asks = false;
  while (end > 0) {
    const char c = question[end - 1];
    if (std::isspace(static_cast<unsigned char>(c))) {
      --end;
    } else if (c == '?' || c == '.' || c == '!' || c == ',' || c == ';' || c == ':') {
      asks = asks || c == '?';
      --end;
    } else {
      break;
    }
  }
  std::size_t begin = 0;
  while (begin < end && std::isspace(static_cast<unsigned char>(question[begin]))) ++begin;
  std::string out(question.substr(begin, end - begin));
  if (out.empty()) return out;
  out += asks ? '?' : '.';
  return out;
}

std::string question_for_property(std::string_view seed_question, std::string_view class_label,
                                  std::string_view property_label,
                                  std::string_view template_id) {
  static const QuestionTemplateSet defaults;
  return defaults.render(template_id, seed_question, class_label, property_label);
}

std::string variable_token(std::string_view text) {
  std::string out;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalnum(u)) out += static_cast<char>(std::tolower(u));
  }
  if (!out.empty() && std::isdigit(static_cast<unsigned char>(out.front()))) out = "v" + out;
  return out;
}

std::string display_label(const SchemaGraph& schema, std::string_view iri) {
  if (auto label = label_of(schema, iri); label && !label->empty()) return *label;
  std::string_view local = local_name(iri);
  return std::string(local.empty() ? iri : local);
}

std::vector<VarClassBinding> find_class_instance_vars(const SelectQuery& query,
                                                      const SchemaGraph& schema,
                                                      Diagnostics* diag) {
  std::vector<VarClassBinding> bindings;
  for (const auto& var : collect_variables(query)) {
    std::set<std::string> explicit_types;
    std::set<std::string> inferred;
    for_each_triple(query.where, [&](const TriplePattern& t) {
      const auto* subject = as_variable(t.subject);
      if (subject == nullptr || subject->name != var.name) return;
      auto predicate = try_resolve(t.predicate, query.prologue);
      if (!predicate) return;
      if (*predicate == kRdfType) {
        if (auto cls = try_resolve(t.object, query.prologue)) explicit_types.insert(*cls);
        return;
      }
      auto it = schema.properties.find(*predicate);
      if (it != schema.properties.end() && it->second.domains.size() == 1) {
        inferred.insert(*it->second.domains.begin());
      }
    });
    if (explicit_types.size() == 1) {
      bindings.push_back({var.name, *explicit_types.begin(), BindingEvidence::kExplicitType});
    } else if (explicit_types.size() > 1) {
      if (diag) diag->warn("?" + var.name + " has several rdf:type classes; skipped");
    } else if (inferred.size() == 1) {
      bindings.push_back({var.name, *inferred.begin(), BindingEvidence::kDomainInference});
    } else if (inferred.size() > 1) {
      if (diag) diag->warn("?" + var.name + " has several inferable domain classes; skipped");
    }
  }
  return bindings;
}

std::vector<AugmentedExample> augment_seed(const SeedExample& seed, const SchemaGraph& schema,
                                           const QuestionTemplateSet& templates,
                                           const AugmentOptions& options, Diagnostics* diag) {
  if (!templates.contains(options.template_id)) throw UnknownTemplateId(options.template_id);
  try {
    check_invariants(seed.query);
  } catch (const Error& e) {
    throw SeedParseFailure(seed.id, e.what());
  }

  const SelectQuery& base = seed.query;
  std::set<std::string> taken;
  for (const auto& v : collect_variables(base)) taken.insert(v.name);

  std::vector<AugmentedExample> out;
  for (const auto& binding : find_class_instance_vars(base, schema, diag)) {
    std::set<std::string> present;
    for_each_triple(base.where, [&](const TriplePattern& t) {
      const auto* s = as_variable(t.subject);
      if (s == nullptr || s->name != binding.variable) return;
      if (auto p = try_resolve(t.predicate, base.prologue)) present.insert(*p);
    });

    // Insertion point: after the last top-level triple mentioning the
    // variable, else after the last top-level triple.
    const auto& elements = base.where.elements;
    std::size_t insert_at = 0;
    std::size_t after_last_triple = 0;
    bool mentioned = false;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      const auto* triple = std::get_if<TriplePattern>(&elements[i]);
      if (triple == nullptr) continue;
      after_last_triple = i + 1;
      if (mentions(*triple, binding.variable)) {
        insert_at = i + 1;
        mentioned = true;
      }
    }
    if (!mentioned) insert_at = after_last_triple;

    const std::string class_label = display_label(schema, binding.class_iri);
    for (const auto& property : properties_for_class(schema, binding.class_iri, KindFilter::kDatatype)) {
      if (present.contains(property.iri)) continue;
      const std::string property_label = display_label(schema, property.iri);
      std::string token = variable_token(property_label);
      if (token.empty()) token = "value";
      const std::string new_var = fresh_name(token, taken);

      AugmentedExample example;
      example.seed_id = seed.id;
      example.query = base;
      auto& where = example.query.where.elements;
      where.insert(where.begin() + static_cast<std::ptrdiff_t>(insert_at),
                   TriplePattern{Variable{binding.variable}, compact_iri(property.iri, base.prologue),
                                 Variable{new_var}, std::nullopt});
      if (!example.query.projection.star) {
        example.query.projection.variables.push_back(Variable{new_var});
      }
      example.question =
          templates.render(options.template_id, seed.question, class_label, property_label);
      example.query_text = serialize(example.query, true);
      example.added_property = property.iri;
      example.added_variable = new_var;
      example.id = seed.id + "/aug" + std::to_string(out.size() + 1);
      out.push_back(std::move(example));
    }
  }
  return out;
}

std::vector<AugmentedExample> augment_catalog(std::span<const SeedExample> seeds,
                                              const SchemaGraph& schema,
                                              const QuestionTemplateSet& templates,
                                              const AugmentOptions& options, Diagnostics* diag) {
  std::set<std::string> ids;
  for (const auto& seed : seeds) {
    if (seed.id.empty()) throw Error("seed with empty id");
    if (!ids.insert(seed.id).second) throw DuplicateSeedId(seed.id);
  }
  std::vector<AugmentedExample> out;
  for (const auto& seed : seeds) {
    if (options.include_seeds) {
      AugmentedExample pass;
      pass.id = seed.id;
      pass.seed_id = seed.id;
      pass.question = seed.question;
      pass.query = seed.query;
      pass.query_text = serialize(seed.query, true);
      out.push_back(std::move(pass));
    }
    auto augmented = augment_seed(seed, schema, templates, options, diag);
    std::move(augmented.begin(), augmented.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace sparqlaug
