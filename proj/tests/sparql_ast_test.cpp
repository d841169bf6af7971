#include <gtest/gtest.h>

#include <string>

#include "sparqlaug/ast.hpp"
#include "sparqlaug/errors.hpp"
#include "support/test_support.hpp"

using namespace sparqlaug;

namespace {

const TriplePattern& triple_at(const SelectQuery& q, std::size_t i) {
  return std::get<TriplePattern>(q.where.elements.at(i));
}

std::vector<std::string> comments_of(const SelectQuery& q) {
  std::vector<std::string> out;
  for_each_triple(q.where, [&](const TriplePattern& t) {
    if (t.trailing_comment) out.push_back(*t.trailing_comment);
  });
  return out;
}

}  // namespace

TEST(ParseQuery, TrailingCommentBindsToItsTriple) {
  auto q = parse_query(
      "PREFIX obo: <http://purl.obolibrary.org/obo/> SELECT ?gene WHERE { "
      "?gene obo:RO_0002162 ?taxon . # in taxon\n}");
  ASSERT_EQ(q.projection.variables.size(), 1u);
  EXPECT_EQ(q.projection.variables[0].name, "gene");
  ASSERT_EQ(q.where.elements.size(), 1u);
  EXPECT_EQ(triple_at(q, 0).trailing_comment, "in taxon");
  EXPECT_EQ(triple_at(q, 0).predicate, Term(PrefixedName{"obo", "RO_0002162"}));
}

TEST(ParseQuery, EmptyWhereViolatesProjectionInvariant) {
  EXPECT_THROW(parse_query("SELECT ?x WHERE { }"), SemanticError);
}

TEST(ParseQuery, MissingProjectionIsSyntaxErrorAfterSelect) {
  try {
    parse_query("SELECT WHERE {");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position().line, 1u);
    EXPECT_EQ(e.position().column, 8u);
    EXPECT_EQ(e.found(), "WHERE");
  }
}

TEST(ParseQuery, OwnLineCommentBindsToNextTriple) {
  auto q = parse_query(
      "PREFIX ex: <http://e/>\nSELECT ?a WHERE {\n  # lead\n  ?a ex:p ?b .\n  ?b ex:q ?c .\n}");
  EXPECT_EQ(triple_at(q, 0).trailing_comment, "lead");
  EXPECT_FALSE(triple_at(q, 1).trailing_comment);
}

TEST(ParseQuery, SemicolonAndCommaAbbreviations) {
  auto q = parse_query(
      "PREFIX ex: <http://e/> SELECT ?s WHERE { ?s ex:p ?o ; ex:q \"x\"@en , 3 . }");
  ASSERT_EQ(q.where.elements.size(), 3u);
  EXPECT_EQ(triple_at(q, 2).subject, Term(Variable{"s"}));
  EXPECT_EQ(triple_at(q, 1).object, Term(Literal{"x", std::nullopt, "en", false}));
  EXPECT_EQ(triple_at(q, 2).object, Term(Literal{"3", std::nullopt, std::nullopt, true}));
}

TEST(ParseQuery, FilterSpanIsKeptVerbatim) {
  auto q = parse_query(
      "PREFIX ex: <http://e/> SELECT ?a WHERE { ?a ex:l ?l . FILTER regex(?l,  \"^a\" ) }");
  EXPECT_EQ(std::get<FilterPattern>(q.where.elements.at(1)).expression,
            "regex(?l,  \"^a\" )");
}

TEST(ParseQuery, RejectsConstructsOutsideTheSubset) {
  const char* rejected[] = {
      "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }",
      "ASK { ?s ?p ?o }",
      "PREFIX ex: <http://e/> SELECT ?s WHERE { ?s ex:p/ex:q ?o }",
      "PREFIX ex: <http://e/> SELECT ?s WHERE { ?s ex:p* ?o }",
      "PREFIX ex: <http://e/> SELECT ?s WHERE { ?s ex:p ?o . { SELECT ?o WHERE { ?o ex:q ?z } } }",
      "PREFIX ex: <http://e/> SELECT ?s WHERE { ?s ex:p _:b }",
      "PREFIX ex: <http://e/> SELECT ?s WHERE { ?s ex:p ?o . BIND(1 AS ?z) }",
      "PREFIX ex: <http://e/> SELECT (COUNT(?s) AS ?n) WHERE { ?s ex:p ?o }",
      "PREFIX ex: <http://e/> SELECT ?s WHERE { ?s ex:p ?o } GROUP BY ?s",
  };
  for (const char* text : rejected) {
    EXPECT_THROW(parse_query(text), UnsupportedConstruct) << text;
  }
}

TEST(ParseQuery, SignedNumericObjectVersusPathOperator) {
  const auto q = parse_query("PREFIX ex: <http://e/> SELECT ?s WHERE { ?s ex:p -5 . ?s ex:q +2.5e3 }");
  EXPECT_NE(serialize(q).find("?s ex:p -5 .\n  ?s ex:q +2.5e3 ."), std::string::npos) << serialize(q);
  EXPECT_EQ(parse_query(serialize(q)), q);
  EXPECT_THROW(parse_query("PREFIX ex: <http://e/> SELECT ?s WHERE { ?s ex:p+ ?o }"),
               UnsupportedConstruct);
}

TEST(ParseQuery, DuplicatePrefixIsSemanticError) {
  EXPECT_THROW(parse_query("PREFIX a: <http://x/> PREFIX a: <http://y/> SELECT * WHERE { ?s a:p ?o }"),
               SemanticError);
}

TEST(Serialize, CanonicalLayout) {
  auto q = parse_query(
      "prefix ex: <http://e/> select distinct ?a where {?a ex:p ?b. # c\n"
      "optional{?b ex:q ?c} filter(?a != ?b)} order by desc(?a) limit 3");
  EXPECT_EQ(serialize(q, true),
            "PREFIX ex: <http://e/>\n"
            "SELECT DISTINCT ?a WHERE {\n"
            "  ?a ex:p ?b . # c\n"
            "  OPTIONAL {\n"
            "    ?b ex:q ?c .\n"
            "  }\n"
            "  FILTER(?a != ?b)\n"
            "}\n"
            "ORDER BY DESC(?a)\n"
            "LIMIT 3\n");
}

TEST(Serialize, WithoutCommentsDropsHash) {
  auto q = parse_query(
      "PREFIX obo: <http://purl.obolibrary.org/obo/> SELECT ?gene WHERE { "
      "?gene obo:RO_0002162 ?taxon . # in taxon\n}");
  const std::string text = serialize(q, false);
  EXPECT_NE(text.find("  ?gene obo:RO_0002162 ?taxon .\n"), std::string::npos);
  EXPECT_EQ(text.find('#'), std::string::npos);
}

TEST(Serialize, UnboundPrefixThrows) {
  auto q = parse_query("SELECT ?s WHERE { ?s nope:p ?o }");
  EXPECT_THROW(serialize(q), UnresolvablePrefix);
}

TEST(Serialize, EscapesLiterals) {
  auto q = parse_query("SELECT ?s WHERE { ?s <http://e/p> \"a\\\"b\\nc\" }");
  const std::string text = serialize(q);
  EXPECT_NE(text.find("\"a\\\"b\\nc\""), std::string::npos);
  EXPECT_EQ(parse_query(text), q);
}

TEST(Serialize, RoundTripsCorpusAndPreservesComments) {
  for (const auto& text : sparqlaug::testing::parser_corpus()) {
    const SelectQuery q = parse_query(text);
    const std::string once = serialize(q, true);
    const SelectQuery again = parse_query(once);
    EXPECT_EQ(again, q) << text;
    EXPECT_EQ(serialize(again, true), once);
    EXPECT_EQ(comments_of(again), comments_of(q));
    EXPECT_EQ(collect_variables(again), collect_variables(q));
  }
}

TEST(CollectVariables, FirstOccurrenceWithoutDuplicates) {
  auto q = parse_query("PREFIX : <http://e/> SELECT * WHERE { ?g a :Gene . ?g :expr ?c . ?c :x ?g }");
  EXPECT_EQ(collect_variables(q), (std::vector<Variable>{{"g"}, {"c"}}));
}

TEST(CollectVariables, NoVariables) {
  auto q = parse_query("PREFIX : <http://e/> SELECT * WHERE { :a :b :c }");
  EXPECT_TRUE(collect_variables(q).empty());
}

TEST(ResolveTerm, KeywordPrefixedAndUnbound) {
  Prologue p;
  p.prefixes.emplace_back("obo", "http://purl.obolibrary.org/obo/");
  EXPECT_EQ(resolve_term(TypeKeyword{}, p), kRdfType);
  EXPECT_EQ(resolve_term(PrefixedName{"obo", "RO_0002162"}, p),
            "http://purl.obolibrary.org/obo/RO_0002162");
  EXPECT_THROW(resolve_term(PrefixedName{"up", "Taxon"}, p), UnresolvablePrefix);
}

TEST(RenameExpression, TokenBoundaryAware) {
  EXPECT_EQ(rename_expression_variables("(?gene != ?taxon)", {{"gene", "x0"}, {"taxon", "x1"}}),
            "(?x0 != ?x1)");
  EXPECT_EQ(rename_expression_variables("(?genes = \"?gene\")", {{"gene", "x0"}}),
            "(?genes = \"?gene\")");
  EXPECT_EQ(rename_expression_variables("(?a = ?b)", {{"a", "b"}, {"b", "a"}}), "(?b = ?a)");
}
