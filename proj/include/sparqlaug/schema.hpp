#pragma once

// Classes, datatype/object properties, labels and rdfs:domain facts gathered
// from a TBox (Turtle subset) and from instance data (ABox).

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlaug/diagnostics.hpp"

namespace sparqlaug {

namespace vocab {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
}  // namespace vocab

enum class PropertyKind { kDatatype, kObject, kUnknown };
enum class EvidenceSource { kTBox, kABox };

struct PropertyInfo {
  std::string iri;
  std::optional<std::string> label;
  std::set<std::string> domains;
  std::set<EvidenceSource> sources;
  /// Declared owl:DatatypeProperty, literal range, or seen with a literal.
  bool literal_evidence = false;
  /// Declared owl:ObjectProperty, or seen with an IRI or blank node.
  bool resource_evidence = false;

  /// Datatype or object when the evidence agrees, unknown otherwise.
  PropertyKind kind() const;
  bool operator==(const PropertyInfo&) const = default;
};

struct SchemaGraph {
  std::set<std::string> classes;
  std::map<std::string, std::string> class_labels;
  std::map<std::string, PropertyInfo> properties;

  bool empty() const { return classes.empty() && properties.empty(); }
  bool operator==(const SchemaGraph&) const = default;
};

struct RdfNode {
  enum class Kind { kIri, kLiteral, kBlank };
  Kind kind = Kind::kIri;
  std::string value;
  std::optional<std::string> datatype;
  std::optional<std::string> language;
  bool operator==(const RdfNode&) const = default;
};

struct ResolvedTriple {
  RdfNode subject;
  RdfNode predicate;
  RdfNode object;
  bool operator==(const ResolvedTriple&) const = default;
};

/// Parses the Turtle subset (prefix/base directives, IRIs, prefixed names,
/// literals, `;` and `,`, `a`) into absolute triples. Blank nodes and
/// collections raise UnsupportedConstruct.
std::vector<ResolvedTriple> parse_turtle(std::string_view text);

/// One triple per line, `<iri>` / `_:b` / quoted literal terms, ` .`
/// terminator. Malformed lines are skipped and counted in `diag`.
std::vector<ResolvedTriple> parse_ntriples(std::string_view text,
                                           Diagnostics* diag = nullptr);

SchemaGraph load_schema(std::string_view turtle_text, Diagnostics* diag = nullptr);

/// Properties observed on typed instances. Triples whose subject is a
/// literal or whose predicate is not an IRI are counted as skipped.
SchemaGraph induce_from_abox(std::span<const ResolvedTriple> triples,
                             Diagnostics* diag = nullptr);

/// Set union; commutative and monotone.
void merge_into(SchemaGraph& target, const SchemaGraph& delta);

enum class KindFilter { kDatatype, kAny };

/// Properties whose domains contain `class_iri`, ordered by IRI.
std::vector<PropertyInfo> properties_for_class(const SchemaGraph& schema,
                                               std::string_view class_iri,
                                               KindFilter filter);

/// rdfs:label when known, otherwise a phrase derived from the IRI's local
/// name (`anatomicalEntity` -> "anatomical entity"). Absent for empty or
/// opaque local names such as `RO_0002162`.
std::optional<std::string> label_of(const SchemaGraph& schema, std::string_view iri);

std::optional<std::string> label_from_iri(std::string_view iri);

/// Text after the last `#`, `/` or `:`.
std::string_view local_name(std::string_view iri);

}  // namespace sparqlaug
