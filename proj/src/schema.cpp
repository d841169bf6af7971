#include "sparqlaug/schema.hpp"

#include <algorithm>
#include <cctype>

#include "lexer.hpp"
#include "sparqlaug/errors.hpp"

namespace sparqlaug {

using detail::Token;
using detail::TokenKind;

namespace {

std::string rdf(std::string_view local) { return std::string(vocab::kRdf) + std::string(local); }
std::string rdfs(std::string_view local) { return std::string(vocab::kRdfs) + std::string(local); }
std::string owl(std::string_view local) { return std::string(vocab::kOwl) + std::string(local); }

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

class TurtleReader {
 public:
  explicit TurtleReader(std::string_view text) {
    for (auto& t : detail::tokenize(text)) {
      if (t.kind != TokenKind::kComment) tokens_.push_back(std::move(t));
    }
  }

  std::vector<ResolvedTriple> run() {
    while (peek().kind != TokenKind::kEnd) {
      if (peek().is_word("@prefix") || peek().is_word("PREFIX")) {
        const bool sparql_style = peek().is_word("PREFIX");
        advance();
        const Token& name = peek();
        if (name.kind != TokenKind::kPrefixedName || !name.local.empty()) {
          error({"prefix name"});
        }
        std::string prefix = name.prefix;
        advance();
        if (peek().kind != TokenKind::kIri) error({"IRI"});
        prefixes_[prefix] = absolute(advance().text);
        if (!sparql_style) expect_dot();
      } else if (peek().is_word("@base") || peek().is_word("BASE")) {
        const bool sparql_style = peek().is_word("BASE");
        advance();
        if (peek().kind != TokenKind::kIri) error({"IRI"});
        base_ = advance().text;
        if (!sparql_style) expect_dot();
      } else {
        statement();
      }
    }
    return std::move(triples_);
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  const Token& advance() {
    const Token& t = tokens_[index_];
    if (index_ + 1 < tokens_.size()) ++index_;
    return t;
  }
  [[noreturn]] void error(std::vector<std::string> expected) const {
    throw SyntaxError(peek().pos, std::move(expected), peek().describe());
  }
  void expect_dot() {
    if (!peek().is_punct(".")) error({"'.'"});
    advance();
  }

  std::string absolute(const std::string& iri) const {
    if (base_ && iri.find(':') == std::string::npos) return *base_ + iri;
    return iri;
  }

  void reject_anonymous() const {
    if (peek().kind == TokenKind::kBlankNode || peek().is_punct("[")) {
      throw UnsupportedConstruct("blank node", peek().pos);
    }
    if (peek().is_punct("(")) throw UnsupportedConstruct("collection", peek().pos);
  }

  std::optional<RdfNode> resource() {
    const Token& t = peek();
    if (t.kind == TokenKind::kIri) {
      return RdfNode{RdfNode::Kind::kIri, absolute(advance().text), {}, {}};
    }
    if (t.kind == TokenKind::kPrefixedName) {
      auto it = prefixes_.find(t.prefix);
      if (it == prefixes_.end()) throw UnresolvablePrefix(t.prefix);
      RdfNode node{RdfNode::Kind::kIri, it->second + t.local, {}, {}};
      advance();
      return node;
    }
    return std::nullopt;
  }

  void statement() {
    reject_anonymous();
    auto subject = resource();
    if (!subject) error({"subject IRI", "@prefix"});
    while (true) {
      RdfNode predicate;
      if (peek().kind == TokenKind::kWord && peek().text == "a") {
        advance();
        predicate = RdfNode{RdfNode::Kind::kIri, rdf("type"), {}, {}};
      } else if (auto p = resource()) {
        predicate = std::move(*p);
      } else {
        error({"predicate"});
      }
      while (true) {
        triples_.push_back({*subject, predicate, object()});
        if (!peek().is_punct(",")) break;
        advance();
      }
      if (!peek().is_punct(";")) break;
      while (peek().is_punct(";")) advance();
      if (peek().is_punct(".")) break;
    }
    expect_dot();
  }

  RdfNode object() {
    reject_anonymous();
    if (auto r = resource()) return *r;
    const Token& t = peek();
    RdfNode lit;
    lit.kind = RdfNode::Kind::kLiteral;
    if (t.kind == TokenKind::kString) {
      lit.value = advance().text;
      if (peek().kind == TokenKind::kLangTag) {
        lit.language = advance().text;
      } else if (peek().kind == TokenKind::kDoubleCaret) {
        advance();
        auto dt = resource();
        if (!dt) error({"datatype IRI"});
        lit.datatype = dt->value;
      }
      return lit;
    }
    if (t.kind == TokenKind::kNumber) {
      lit.value = advance().text;
      const bool decimal = lit.value.find_first_of(".eE") != std::string::npos;
      lit.datatype = std::string(vocab::kXsd) + (decimal ? "decimal" : "integer");
      return lit;
    }
    if (t.kind == TokenKind::kWord && (t.text == "true" || t.text == "false")) {
      lit.value = advance().text;
      lit.datatype = std::string(vocab::kXsd) + "boolean";
      return lit;
    }
    error({"object"});
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
  std::map<std::string, std::string> prefixes_;
  std::optional<std::string> base_;
  std::vector<ResolvedTriple> triples_;
};

/// Label preference: untagged, then English, then first seen.
int label_rank(const RdfNode& literal) {
  if (!literal.language) return 0;
  std::string lang = *literal.language;
  std::transform(lang.begin(), lang.end(), lang.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return (lang == "en" || starts_with(lang, "en-")) ? 1 : 2;
}

bool literal_range(std::string_view range) {
  return starts_with(range, vocab::kXsd) || range == rdfs("Literal") ||
         range == rdf("langString") || range == rdf("PlainLiteral");
}

PropertyInfo& property(SchemaGraph& g, const std::string& iri) {
  auto [it, inserted] = g.properties.try_emplace(iri);
  if (inserted) it->second.iri = iri;
  return it->second;
}

void merge_label(std::optional<std::string>& target, const std::optional<std::string>& other) {
  if (!other) return;
  if (!target || *other < *target) target = other;
}

std::vector<std::string> split_words(std::string_view name) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  auto lower_or_digit = [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c));
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (c == '_' || c == '-' || c == '.' || c == ' ' || c == '%') {
      flush();
      continue;
    }
    if (upper(c) && !current.empty()) {
      const char prev = name[i - 1];
      const bool next_lower = i + 1 < name.size() &&
                              std::islower(static_cast<unsigned char>(name[i + 1]));
      if (lower_or_digit(prev) || (upper(prev) && next_lower)) flush();
    }
    current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  flush();
  return words;
}

}  // namespace

PropertyKind PropertyInfo::kind() const {
  if (literal_evidence && !resource_evidence) return PropertyKind::kDatatype;
  if (resource_evidence && !literal_evidence) return PropertyKind::kObject;
  return PropertyKind::kUnknown;
}

std::vector<ResolvedTriple> parse_turtle(std::string_view text) {
  return TurtleReader(text).run();
}

std::vector<ResolvedTriple> parse_ntriples(std::string_view text, Diagnostics* diag) {
  std::vector<ResolvedTriple> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;

    std::vector<Token> tokens;
    try {
      for (auto& t : detail::tokenize(line)) {
        if (t.kind != TokenKind::kComment) tokens.push_back(std::move(t));
      }
    } catch (const Error&) {
      if (diag) ++diag->skipped;
      continue;
    }
    if (tokens.size() == 1) continue;  // blank or comment-only line

    std::size_t i = 0;
    auto node = [&](bool allow_literal) -> std::optional<RdfNode> {
      const Token& t = tokens[i];
      if (t.kind == TokenKind::kIri) {
        ++i;
        return RdfNode{RdfNode::Kind::kIri, t.text, {}, {}};
      }
      if (t.kind == TokenKind::kBlankNode) {
        ++i;
        return RdfNode{RdfNode::Kind::kBlank, t.local, {}, {}};
      }
      if (allow_literal && t.kind == TokenKind::kString) {
        ++i;
        RdfNode lit{RdfNode::Kind::kLiteral, t.text, {}, {}};
        if (tokens[i].kind == TokenKind::kLangTag) {
          lit.language = tokens[i++].text;
        } else if (tokens[i].kind == TokenKind::kDoubleCaret) {
          if (tokens[i + 1].kind != TokenKind::kIri) return std::nullopt;
          lit.datatype = tokens[i + 1].text;
          i += 2;
        }
        return lit;
      }
      return std::nullopt;
    };
    auto s = node(false);
    auto p = s ? node(false) : std::nullopt;
    auto o = p ? node(true) : std::nullopt;
    const bool well_formed = o && p->kind == RdfNode::Kind::kIri &&
                             tokens[i].is_punct(".") &&
                             tokens[i + 1].kind == TokenKind::kEnd;
    if (!well_formed) {
      if (diag) ++diag->skipped;
      continue;
    }
    out.push_back({std::move(*s), std::move(*p), std::move(*o)});
  }
  return out;
}

SchemaGraph load_schema(std::string_view turtle_text, Diagnostics* diag) {
  const auto triples = parse_turtle(turtle_text);
  const std::string type = rdf("type");
  const std::string label = rdfs("label");
  const std::string domain = rdfs("domain");
  const std::string range = rdfs("range");

  SchemaGraph g;
  std::map<std::string, std::pair<int, std::string>> labels;
  for (const auto& t : triples) {
    const std::string& s = t.subject.value;
    const std::string& p = t.predicate.value;
    const RdfNode& o = t.object;
    if (p == type && o.kind == RdfNode::Kind::kIri) {
      if (o.value == owl("Class") || o.value == rdfs("Class")) {
        g.classes.insert(s);
      } else if (o.value == owl("DatatypeProperty")) {
        auto& info = property(g, s);
        info.sources.insert(EvidenceSource::kTBox);
        info.literal_evidence = true;
      } else if (o.value == owl("ObjectProperty")) {
        auto& info = property(g, s);
        info.sources.insert(EvidenceSource::kTBox);
        info.resource_evidence = true;
      } else if (o.value == rdf("Property") || o.value == owl("AnnotationProperty")) {
        property(g, s).sources.insert(EvidenceSource::kTBox);
      }
    } else if (p == label && o.kind == RdfNode::Kind::kLiteral) {
      const int rank = label_rank(o);
      auto it = labels.find(s);
      if (it == labels.end() || rank < it->second.first) labels[s] = {rank, o.value};
    } else if (p == domain && o.kind == RdfNode::Kind::kIri) {
      auto& info = property(g, s);
      info.sources.insert(EvidenceSource::kTBox);
      info.domains.insert(o.value);
    } else if (p == range && o.kind == RdfNode::Kind::kIri) {
      auto& info = property(g, s);
      info.sources.insert(EvidenceSource::kTBox);
      if (literal_range(o.value)) info.literal_evidence = true;
    }
  }

  for (const auto& [iri, info] : g.properties) {
    for (const auto& cls : info.domains) {
      if (g.classes.insert(cls).second && diag) {
        diag->warn("class <" + cls + "> used as rdfs:domain of <" + iri +
                   "> is not declared; registered without a label");
      }
    }
  }
  // Ranges naming a declared class count as object-property evidence.
  for (const auto& t : triples) {
    if (t.predicate.value == range && g.classes.contains(t.object.value)) {
      property(g, t.subject.value).resource_evidence = true;
    }
  }
  for (auto& [iri, info] : g.properties) {
    if (info.kind() == PropertyKind::kUnknown && info.literal_evidence && diag) {
      diag->warn("property <" + iri + "> has conflicting datatype/object evidence");
    }
  }
  for (const auto& [iri, entry] : labels) {
    if (g.classes.contains(iri)) g.class_labels[iri] = entry.second;
    if (auto it = g.properties.find(iri); it != g.properties.end()) {
      it->second.label = entry.second;
    }
  }
  return g;
}

SchemaGraph induce_from_abox(std::span<const ResolvedTriple> triples, Diagnostics* diag) {
  const std::string type = rdf("type");
  std::map<std::string, std::set<std::string>> types;
  for (const auto& t : triples) {
    if (t.predicate.kind == RdfNode::Kind::kIri && t.predicate.value == type &&
        t.subject.kind != RdfNode::Kind::kLiteral && t.object.kind == RdfNode::Kind::kIri) {
      types[t.subject.value].insert(t.object.value);
    }
  }

  SchemaGraph delta;
  for (const auto& t : triples) {
    if (t.subject.kind == RdfNode::Kind::kLiteral || t.predicate.kind != RdfNode::Kind::kIri) {
      if (diag) ++diag->skipped;
      continue;
    }
    if (t.predicate.value == type) continue;
    auto it = types.find(t.subject.value);
    if (it == types.end()) continue;
    auto& info = property(delta, t.predicate.value);
    info.sources.insert(EvidenceSource::kABox);
    if (t.object.kind == RdfNode::Kind::kLiteral) {
      info.literal_evidence = true;
    } else {
      info.resource_evidence = true;
    }
    for (const auto& cls : it->second) {
      info.domains.insert(cls);
      delta.classes.insert(cls);
    }
  }
  if (diag) {
    for (const auto& [iri, info] : delta.properties) {
      if (info.literal_evidence && info.resource_evidence) {
        diag->warn("property <" + iri + "> observed with both literal and IRI objects");
      }
    }
  }
  return delta;
}

void merge_into(SchemaGraph& target, const SchemaGraph& delta) {
  target.classes.insert(delta.classes.begin(), delta.classes.end());
  for (const auto& [iri, text] : delta.class_labels) {
    auto [it, inserted] = target.class_labels.try_emplace(iri, text);
    if (!inserted && text < it->second) it->second = text;
  }
  for (const auto& [iri, info] : delta.properties) {
    auto& dst = property(target, iri);
    merge_label(dst.label, info.label);
    dst.domains.insert(info.domains.begin(), info.domains.end());
    dst.sources.insert(info.sources.begin(), info.sources.end());
    dst.literal_evidence = dst.literal_evidence || info.literal_evidence;
    dst.resource_evidence = dst.resource_evidence || info.resource_evidence;
  }
}

std::vector<PropertyInfo> properties_for_class(const SchemaGraph& schema,
                                               std::string_view class_iri,
                                               KindFilter filter) {
  std::vector<PropertyInfo> out;
  for (const auto& [iri, info] : schema.properties) {
    if (!info.domains.contains(std::string(class_iri))) continue;
    if (filter == KindFilter::kDatatype && info.kind() != PropertyKind::kDatatype) continue;
    out.push_back(info);
  }
  return out;
}

std::string_view local_name(std::string_view iri) {
  const std::size_t cut = iri.find_last_of("#/:");
  return cut == std::string_view::npos ? iri : iri.substr(cut + 1);
}

std::optional<std::string> label_from_iri(std::string_view iri) {
  const auto words = split_words(local_name(iri));
  if (words.empty()) return std::nullopt;
  std::string out;
  for (const auto& w : words) {
    if (std::any_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c); })) {
      return std::nullopt;
    }
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::optional<std::string> label_of(const SchemaGraph& schema, std::string_view iri) {
  const std::string key(iri);
  if (auto it = schema.class_labels.find(key); it != schema.class_labels.end()) {
    return it->second;
  }
  if (auto it = schema.properties.find(key); it != schema.properties.end() && it->second.label) {
    return it->second.label;
  }
  return label_from_iri(iri);
}

}  // namespace sparqlaug
