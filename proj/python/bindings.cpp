#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sparqlaug/augment.hpp"
#include "sparqlaug/dataset.hpp"
#include "sparqlaug/errors.hpp"
#include "sparqlaug/metrics.hpp"
#include "sparqlaug/pipeline.hpp"
#include "sparqlaug/rewrite.hpp"
#include "sparqlaug/schema.hpp"

namespace py = pybind11;
using namespace sparqlaug;

namespace {

Strategy strategy_from(const std::string& tag) {
  if (auto s = parse_strategy(tag)) return *s;
  throw sparqlaug::Error("unknown strategy '" + tag + "'");
}

py::dict to_dict(const DatasetRecord& r) {
  py::dict d;
  d["id"] = r.id;
  d["question"] = r.question;
  d["query"] = r.query;
  d["strategy"] = r.strategy;
  d["seed_id"] = r.seed_id;
  d["added_property"] = r.added_property ? py::object(py::str(*r.added_property)) : py::none();
  return d;
}

DatasetRecord from_dict(const py::dict& d) {
  DatasetRecord r;
  r.id = d["id"].cast<std::string>();
  r.question = d["question"].cast<std::string>();
  r.query = d["query"].cast<std::string>();
  r.strategy = d.contains("strategy") ? d["strategy"].cast<std::string>() : "original";
  r.seed_id = d.contains("seed_id") ? d["seed_id"].cast<std::string>() : r.id;
  if (d.contains("added_property") && !d["added_property"].is_none()) {
    r.added_property = d["added_property"].cast<std::string>();
  }
  return r;
}

std::vector<DatasetRecord> from_list(const py::list& items) {
  std::vector<DatasetRecord> out;
  for (const auto& item : items) out.push_back(from_dict(item.cast<py::dict>()));
  return out;
}

py::list to_list(const std::vector<DatasetRecord>& records) {
  py::list out;
  for (const auto& r : records) out.append(to_dict(r));
  return out;
}

py::dict report_dict(const MetricReport& m) {
  py::dict d;
  d["pairs"] = m.pairs;
  d["bleu"] = m.bleu;
  d["sp_bleu"] = m.sp_bleu ? py::object(py::float_(*m.sp_bleu)) : py::none();
  d["meteor"] = m.meteor;
  d["rouge_l"] = m.rouge_l;
  d["f1"] = m.f1;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SPARQL query-dataset augmentation, rewriting, splitting and metrics";

  py::register_exception<sparqlaug::Error>(m, "Error", PyExc_ValueError);

  py::list strategies;
  for (Strategy s : kAllStrategies) strategies.append(std::string(to_string(s)));
  m.attr("STRATEGIES") = strategies;

  py::class_<SchemaGraph>(m, "Schema")
      .def(py::init([](const std::string& turtle) { return load_schema(turtle); }),
           py::arg("turtle") = "")
      .def(
          "add_abox",
          [](SchemaGraph& self, const std::string& ntriples) {
            const auto triples = parse_ntriples(ntriples);
            merge_into(self, induce_from_abox(triples));
          },
          py::arg("ntriples"))
      .def_property_readonly("classes", [](const SchemaGraph& s) { return s.classes; })
      .def("properties_for_class",
           [](const SchemaGraph& s, const std::string& class_iri, bool datatype_only) {
             std::vector<std::string> out;
             for (const auto& p : properties_for_class(
                      s, class_iri, datatype_only ? KindFilter::kDatatype : KindFilter::kAny)) {
               out.push_back(p.iri);
             }
             return out;
           },
           py::arg("class_iri"), py::arg("datatype_only") = true);

  m.def(
      "serialize",
      [](const std::string& text, bool comments) { return serialize(parse_query(text), comments); },
      py::arg("query"), py::arg("comments") = true,
      "Parse a query and print it in canonical layout.");
  m.def(
      "canonicalize",
      [](const std::string& text) { return serialize(canonicalize(parse_query(text))); },
      py::arg("query"));
  m.def(
      "rewrite",
      [](const std::string& text, const std::string& strategy, const SchemaGraph& schema) {
        return rewrite_query_text(text, strategy_from(strategy), schema);
      },
      py::arg("query"), py::arg("strategy"), py::arg("schema"));

  m.def(
      "generate_dataset",
      [](const py::list& seeds, const SchemaGraph& schema, const std::string& strategy,
         bool include_seeds, const std::string& template_id) {
        std::vector<SeedExample> parsed;
        for (const auto& item : seeds) {
          const auto d = item.cast<py::dict>();
          const auto id = d["id"].cast<std::string>();
          try {
            parsed.push_back(
                {id, d["question"].cast<std::string>(), parse_query(d["query"].cast<std::string>())});
          } catch (const sparqlaug::Error& e) {
            throw SeedParseFailure(id, e.what());
          }
        }
        AugmentOptions options;
        options.include_seeds = include_seeds;
        options.template_id = template_id;
        return to_list(generate_dataset(parsed, schema, QuestionTemplateSet(), options,
                                        strategy_from(strategy)));
      },
      py::arg("seeds"), py::arg("schema"), py::arg("strategy") = "original",
      py::arg("include_seeds") = false, py::arg("template") = "default");

  m.def(
      "read_dataset",
      [](const std::filesystem::path& path) { return to_list(read_dataset(path)); },
      py::arg("path"));
  m.def(
      "write_dataset",
      [](const py::list& records, const std::filesystem::path& path) {
        return write_dataset(from_list(records), path);
      },
      py::arg("records"), py::arg("path"));
  m.def(
      "split_nested",
      [](const py::list& records, std::vector<double> fractions, std::uint64_t seed) {
        py::list out;
        for (const auto& part : split_nested(from_list(records), {std::move(fractions), seed})) {
          out.append(to_list(part));
        }
        return out;
      },
      py::arg("records"), py::arg("fractions") = std::vector<double>{0.25, 0.5, 0.75, 1.0},
      py::arg("seed") = 0);
  m.def(
      "format_prompt",
      [](const py::dict& record, const std::string& template_id) {
        return format_prompt(from_dict(record), template_id);
      },
      py::arg("record"), py::arg("template") = "default");

  m.def(
      "tokenize_query",
      [](const std::string& text, bool lowercase) {
        return tokenize_query(text, TokenizeOptions{lowercase});
      },
      py::arg("text"), py::arg("lowercase") = false);
  m.def(
      "bleu",
      [](const TokenSequence& c, const TokenSequence& r, int max_n) {
        return bleu(c, r, max_n).score;
      },
      py::arg("candidate"), py::arg("reference"), py::arg("max_n") = 4);
  m.def(
      "meteor",
      [](const TokenSequence& c, const TokenSequence& r) { return meteor(c, r); },
      py::arg("candidate"), py::arg("reference"));
  m.def(
      "rouge_l",
      [](const TokenSequence& c, const TokenSequence& r, double beta) {
        return rouge_l(c, r, beta);
      },
      py::arg("candidate"), py::arg("reference"), py::arg("beta") = 1.0);
  m.def(
      "token_f1",
      [](const TokenSequence& c, const TokenSequence& r) { return token_f1(c, r); },
      py::arg("candidate"), py::arg("reference"));
  m.def(
      "evaluate_corpus",
      [](const std::vector<std::pair<std::string, std::string>>& pairs,
         const std::optional<std::vector<std::string>>& vocab, bool lowercase) {
        std::optional<SubwordVocabulary> v;
        if (vocab) v.emplace(*vocab);
        return report_dict(evaluate_corpus(pairs, v ? &*v : nullptr, TokenizeOptions{lowercase}));
      },
      py::arg("pairs"), py::arg("vocab") = std::nullopt, py::arg("lowercase") = false,
      "Macro-averaged scores over (candidate, reference) query texts.");
}
