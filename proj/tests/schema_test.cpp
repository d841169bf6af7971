#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "sparqlaug/errors.hpp"
#include "sparqlaug/schema.hpp"

using namespace sparqlaug;

namespace {

constexpr const char* kPrefixes =
    "@prefix : <http://e/#> .\n"
    "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
    "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
    "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n";

SchemaGraph schema_of(const std::string& body, Diagnostics* diag = nullptr) {
  return load_schema(std::string(kPrefixes) + body, diag);
}

std::vector<std::string> iris(const std::vector<PropertyInfo>& props) {
  std::vector<std::string> out;
  for (const auto& p : props) out.push_back(p.iri);
  return out;
}

}  // namespace

TEST(LoadSchema, DomainMakesPropertyAvailable) {
  auto s = schema_of(
      ":label a owl:DatatypeProperty ; rdfs:domain :Gene ; rdfs:label \"label\" .\n"
      ":Gene a owl:Class .\n");
  EXPECT_EQ(iris(properties_for_class(s, "http://e/#Gene", KindFilter::kDatatype)),
            std::vector<std::string>{"http://e/#label"});
  EXPECT_EQ(s.properties.at("http://e/#label").sources,
            std::set<EvidenceSource>{EvidenceSource::kTBox});
}

TEST(LoadSchema, EmptyDocument) {
  EXPECT_TRUE(load_schema("").empty());
  EXPECT_TRUE(schema_of("").empty());
}

TEST(LoadSchema, UndeclaredDomainIsRegisteredWithWarning) {
  Diagnostics diag;
  auto s = schema_of(":p a owl:DatatypeProperty ; rdfs:domain :Ghost .\n", &diag);
  EXPECT_TRUE(s.classes.contains("http://e/#Ghost"));
  EXPECT_FALSE(s.class_labels.contains("http://e/#Ghost"));
  ASSERT_EQ(diag.warnings.size(), 1u);
  EXPECT_NE(diag.warnings[0].find("Ghost"), std::string::npos);
}

TEST(LoadSchema, Errors) {
  EXPECT_THROW(load_schema(":a :b :c ."), UnresolvablePrefix);
  EXPECT_THROW(schema_of(":a :b ."), SyntaxError);
  EXPECT_THROW(schema_of(":a :b [ :c :d ] ."), UnsupportedConstruct);
}

TEST(LoadSchema, RangeCountsAsKindEvidence) {
  auto s = schema_of(
      "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
      ":Gene a owl:Class . :Taxon a owl:Class .\n"
      ":name a rdf:Property ; rdfs:domain :Gene ; rdfs:range xsd:string .\n"
      ":taxon a rdf:Property ; rdfs:domain :Gene ; rdfs:range :Taxon .\n");
  EXPECT_EQ(s.properties.at("http://e/#name").kind(), PropertyKind::kDatatype);
  EXPECT_EQ(s.properties.at("http://e/#taxon").kind(), PropertyKind::kObject);
}

TEST(InduceFromAbox, LiteralObjectGivesDatatypeDomain) {
  auto triples = parse_turtle(std::string(kPrefixes) + ":g1 a :Gene ; :description \"x\" .");
  auto delta = induce_from_abox(triples);
  const auto& p = delta.properties.at("http://e/#description");
  EXPECT_EQ(p.domains, std::set<std::string>{"http://e/#Gene"});
  EXPECT_EQ(p.kind(), PropertyKind::kDatatype);
  EXPECT_EQ(p.sources, std::set<EvidenceSource>{EvidenceSource::kABox});
  EXPECT_TRUE(delta.classes.contains("http://e/#Gene"));
}

TEST(InduceFromAbox, NoTypesGivesEmptyDelta) {
  auto triples = parse_turtle(std::string(kPrefixes) + ":g1 :description \"x\" ; :p :q .");
  EXPECT_TRUE(induce_from_abox(triples).empty());
}

TEST(InduceFromAbox, MixedObjectsGiveUnknownKindAndWarning) {
  Diagnostics diag;
  auto triples = parse_turtle(std::string(kPrefixes) +
                              ":g1 a :Gene ; :rel \"x\" .\n:g2 a :Gene ; :rel :g1 .");
  auto delta = induce_from_abox(triples, &diag);
  EXPECT_EQ(delta.properties.at("http://e/#rel").kind(), PropertyKind::kUnknown);
  EXPECT_EQ(diag.warnings.size(), 1u);
  EXPECT_TRUE(properties_for_class(delta, "http://e/#Gene", KindFilter::kDatatype).empty());
  EXPECT_EQ(properties_for_class(delta, "http://e/#Gene", KindFilter::kAny).size(), 1u);
}

TEST(ParseNtriples, SkipsMalformedLines) {
  Diagnostics diag;
  auto triples = parse_ntriples(
      "<http://e/a> <http://e/p> \"v\"@en .\n"
      "this is not a triple\n"
      "# comment\n"
      "<http://e/a> <http://e/q> <http://e/b> .\n",
      &diag);
  EXPECT_EQ(triples.size(), 2u);
  EXPECT_EQ(diag.skipped, 1u);
  EXPECT_EQ(triples[0].object.language, "en");
}

TEST(PropertiesForClass, SortedFilteredAndUnknownClass) {
  auto s = schema_of(
      ":Gene a owl:Class .\n"
      ":zeta a owl:DatatypeProperty ; rdfs:domain :Gene .\n"
      ":alpha a owl:DatatypeProperty ; rdfs:domain :Gene .\n"
      ":link a owl:ObjectProperty ; rdfs:domain :Gene .\n");
  EXPECT_EQ(iris(properties_for_class(s, "http://e/#Gene", KindFilter::kDatatype)),
            (std::vector<std::string>{"http://e/#alpha", "http://e/#zeta"}));
  EXPECT_EQ(properties_for_class(s, "http://e/#Gene", KindFilter::kAny).size(), 3u);
  EXPECT_TRUE(properties_for_class(s, "http://e/#Nope", KindFilter::kAny).empty());
}

TEST(LabelOf, ExplicitDerivedAndAbsent) {
  auto s = schema_of(
      "@prefix obo: <http://purl.obolibrary.org/obo/> .\n"
      "obo:RO_0002162 a owl:ObjectProperty ; rdfs:label \"in taxon\" .\n");
  EXPECT_EQ(label_of(s, "http://purl.obolibrary.org/obo/RO_0002162"), "in taxon");
  EXPECT_EQ(label_of(s, "http://purl.org/genex#anatomicalEntity"), "anatomical entity");
  EXPECT_EQ(label_of(s, "http://e/has_sex_value"), "has sex value");
  EXPECT_FALSE(label_of(s, "http://e/"));
  EXPECT_FALSE(label_of(s, "http://purl.obolibrary.org/obo/RO_0000001"));
}

TEST(LabelOf, PrefersUntaggedThenEnglish) {
  auto s = schema_of(":Gene a owl:Class ; rdfs:label \"Gen\"@de , \"gene\"@en .\n");
  EXPECT_EQ(label_of(s, "http://e/#Gene"), "gene");
}

TEST(MergeInto, CommutativeAndMonotone) {
  std::mt19937 rng(11);
  const char* classes[] = {"A", "B", "C"};
  const char* props[] = {"p", "q", "r", "s"};
  for (int round = 0; round < 50; ++round) {
    std::vector<SchemaGraph> deltas;
    for (int d = 0; d < 4; ++d) {
      std::string ttl = std::string(kPrefixes);
      for (int k = 0; k < 4; ++k) {
        const std::string subject = ":i" + std::to_string(rng() % 5);
        ttl += subject + " a :" + classes[rng() % 3] + " .\n";
        ttl += subject + " :" + props[rng() % 4] + " " +
               (rng() % 2 ? std::string("\"v\"") : std::string(":o")) + " .\n";
      }
      deltas.push_back(induce_from_abox(parse_turtle(ttl)));
    }
    SchemaGraph forward, backward;
    for (const auto& d : deltas) merge_into(forward, d);
    for (auto it = deltas.rbegin(); it != deltas.rend(); ++it) merge_into(backward, *it);
    EXPECT_EQ(forward, backward);

    SchemaGraph grown = forward;
    merge_into(grown, deltas.front());
    for (const auto& [iri, info] : forward.properties) {
      ASSERT_TRUE(grown.properties.contains(iri));
      EXPECT_TRUE(std::includes(grown.properties.at(iri).domains.begin(),
                                grown.properties.at(iri).domains.end(), info.domains.begin(),
                                info.domains.end()));
    }
  }
}

TEST(LocalName, SplitsOnLastSeparator) {
  EXPECT_EQ(local_name("http://e/#Gene"), "Gene");
  EXPECT_EQ(local_name("http://e/a/b"), "b");
  EXPECT_EQ(local_name("urn:x:y"), "y");
}
