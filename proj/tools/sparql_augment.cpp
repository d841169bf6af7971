// sparql-augment: dataset generation, rewriting, splitting, scoring and
// endpoint validation from the command line.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparqlaug/dataset.hpp"
#include "sparqlaug/endpoint.hpp"
#include "sparqlaug/errors.hpp"
#include "sparqlaug/metrics.hpp"
#include "sparqlaug/pipeline.hpp"
#include "sparqlaug/rewrite.hpp"
#include "sparqlaug/schema.hpp"

namespace fs = std::filesystem;
using namespace sparqlaug;

namespace {

/// Reported as `sparql-augment: <stage>: <file>[:<line>]: <message>`.
struct StageFailure {
  std::string message;
};

std::optional<std::size_t> line_of(const std::exception& e) {
  if (const auto* s = dynamic_cast<const SyntaxError*>(&e)) return s->position().line;
  if (const auto* u = dynamic_cast<const UnsupportedConstruct*>(&e)) return u->position().line;
  if (const auto* m = dynamic_cast<const MalformedRecord*>(&e)) return m->line();
  return std::nullopt;
}

template <typename Fn>
auto stage(const std::string& name, const std::string& file, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    std::string where = file;
    if (auto line = line_of(e); line && dynamic_cast<const MalformedRecord*>(&e) == nullptr) {
      where += ":" + std::to_string(*line);
    }
    throw StageFailure{name + ": " + where + ": " + e.what()};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DestinationUnwritable(path);
  out << text;
  if (!out) throw DestinationUnwritable(path);
}

Strategy strategy_flag(const std::string& tag) {
  auto s = parse_strategy(tag);
  if (!s) throw Error("unknown strategy '" + tag + "'");
  return *s;
}

void print_warnings(const Diagnostics& diag) {
  std::set<std::string> seen;
  for (const auto& w : diag.warnings) {
    if (seen.insert(w).second) std::cerr << "warning: " << w << "\n";
  }
  if (diag.skipped > 0) std::cerr << "warning: " << diag.skipped << " input(s) skipped\n";
}

struct SchemaInput {
  SchemaGraph graph;
  std::string digest;
};

SchemaInput load_schema_files(const std::string& schema_path, const std::string& abox_path,
                              Diagnostics& diag) {
  SchemaInput input;
  const std::string ttl = stage("load schema", schema_path, [&] { return read_file(schema_path); });
  input.digest = sha256_hex(ttl);
  input.graph = stage("load schema", schema_path, [&] { return load_schema(ttl, &diag); });
  if (!abox_path.empty()) {
    const std::string text = stage("read abox", abox_path, [&] { return read_file(abox_path); });
    const auto triples =
        stage("read abox", abox_path, [&] { return parse_ntriples(text, &diag); });
    merge_into(input.graph, induce_from_abox(triples, &diag));
  }
  return input;
}

fs::path suffixed(const fs::path& base, const std::string& suffix) {
  return base.parent_path() / (base.stem().string() + suffix + base.extension().string());
}

std::string percent_suffix(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_p%g", fraction * 100.0);
  return buf;
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size()) throw Error("bad fraction '" + item + "'");
    out.push_back(v > 1.0 ? v / 100.0 : v);
  }
  return out;
}

// --- gen-dataset ----------------------------------------------------------

struct GenConfig {
  std::string schema, abox, seeds, strategy = "original", out, template_id = "default";
  std::string prompts, prompt_template = "default";
  bool include_seeds = false;
};

int cmd_gen_dataset(const GenConfig& c) {
  Diagnostics diag;
  const Strategy strategy = stage("configure", "--strategy", [&] { return strategy_flag(c.strategy); });
  const SchemaInput schema = load_schema_files(c.schema, c.abox, diag);
  const auto seeds = stage("read seeds", c.seeds, [&] { return read_seed_catalog(fs::path(c.seeds)); });

  AugmentOptions options;
  options.include_seeds = c.include_seeds;
  options.template_id = c.template_id;
  const QuestionTemplateSet templates;
  const auto records = stage("augment", c.seeds, [&] {
    return generate_dataset(seeds, schema.graph, templates, options, strategy, &diag);
  });

  stage("write dataset", c.out, [&] { return write_dataset(records, fs::path(c.out)); });
  const fs::path manifest = manifest_path(c.out);
  stage("write manifest", manifest.string(), [&] {
    write_manifest({records.size(), std::string(to_string(strategy)), schema.digest}, manifest);
    return 0;
  });
  if (!c.prompts.empty()) {
    stage("write prompts", c.prompts, [&] {
      std::string text;
      for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["id"] = r.id;
        j["text"] = format_prompt(r, c.prompt_template);
        text += j.dump() + "\n";
      }
      write_text(c.prompts, text);
      return 0;
    });
  }
  print_warnings(diag);
  std::cout << "records=" << records.size() << " strategy=" << to_string(strategy)
            << " seeds=" << seeds.size() << " out=" << c.out << "\n";
  return 0;
}

// --- rewrite --------------------------------------------------------------

struct RewriteConfig {
  std::string in, query, schema, abox, strategy, out;
};

int cmd_rewrite(const RewriteConfig& c) {
  Diagnostics diag;
  const Strategy strategy = stage("configure", "--strategy", [&] { return strategy_flag(c.strategy); });
  const SchemaInput schema = load_schema_files(c.schema, c.abox, diag);
  if (!c.query.empty()) {
    const std::string text = stage("read query", c.query, [&] {
      if (c.query == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
      }
      return read_file(c.query);
    });
    const std::string out = stage("rewrite", c.query, [&] {
      return rewrite_query_text(text, strategy, schema.graph, &diag);
    });
    stage("write output", c.out.empty() ? "stdout" : c.out, [&] {
      write_text(c.out, out);
      return 0;
    });
    print_warnings(diag);
    return 0;
  }
  auto records = stage("read dataset", c.in, [&] { return read_dataset(fs::path(c.in)); });
  for (auto& r : records) {
    r.query = stage("rewrite", c.in + " record " + r.id, [&] {
      return rewrite_query_text(r.query, strategy, schema.graph, &diag);
    });
    r.strategy = std::string(to_string(strategy));
  }
  stage("write dataset", c.out.empty() ? "stdout" : c.out, [&] {
    std::ostringstream buffer;
    write_dataset(records, buffer);
    write_text(c.out, buffer.str());
    return 0;
  });
  print_warnings(diag);
  if (!c.out.empty()) std::cout << "records=" << records.size() << " out=" << c.out << "\n";
  return 0;
}

// --- split ----------------------------------------------------------------

struct SplitConfig {
  std::string in, out, fractions = "25,50,75,100";
  std::uint64_t seed = 0;
  double test_fraction = 0.0;
};

int cmd_split(const SplitConfig& c) {
  const auto records = stage("read dataset", c.in, [&] { return read_dataset(fs::path(c.in)); });
  const fs::path base = c.out.empty() ? fs::path(c.in) : fs::path(c.out);
  std::vector<DatasetRecord> pool = records;

  if (c.test_fraction > 0.0) {
    const auto split = stage("split", c.in, [&] {
      return train_test_split(records, c.test_fraction, c.seed);
    });
    const fs::path train = suffixed(base, "_train");
    const fs::path test = suffixed(base, "_test");
    stage("write dataset", train.string(), [&] { return write_dataset(split.train, train); });
    stage("write dataset", test.string(), [&] { return write_dataset(split.test, test); });
    std::cout << "train=" << split.train.size() << " test=" << split.test.size() << "\n";
    pool = split.train;
  }

  SplitSpec spec;
  spec.seed = c.seed;
  spec.fractions = stage("configure", "--fractions", [&] { return parse_fractions(c.fractions); });
  const auto parts = stage("split", c.in, [&] { return split_nested(pool, spec); });
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const fs::path path = suffixed(base, percent_suffix(spec.fractions[k]));
    stage("write dataset", path.string(), [&] { return write_dataset(parts[k], path); });
    std::cout << path.string() << " records=" << parts[k].size() << "\n";
  }
  return 0;
}

// --- evaluate -------------------------------------------------------------

struct EvaluateConfig {
  std::string candidates, references, vocab, out;
  bool lowercase = false;
};

int cmd_evaluate(const EvaluateConfig& c) {
  const auto cands =
      stage("read candidates", c.candidates, [&] { return read_dataset(fs::path(c.candidates)); });
  const auto refs =
      stage("read references", c.references, [&] { return read_dataset(fs::path(c.references)); });

  std::map<std::string, const DatasetRecord*> by_id;
  for (const auto& r : cands) by_id[r.id] = &r;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> unmatched;
  std::set<std::string> ref_ids;
  for (const auto& r : refs) {
    ref_ids.insert(r.id);
    auto it = by_id.find(r.id);
    if (it == by_id.end()) {
      unmatched.push_back(r.id);
    } else {
      pairs.emplace_back(it->second->query, r.query);
    }
  }
  for (const auto& r : cands) {
    if (!ref_ids.contains(r.id)) unmatched.push_back(r.id);
  }
  if (!unmatched.empty()) {
    stage("align", c.candidates + " / " + c.references, [&]() -> int { throw IdMismatch(unmatched); });
  }

  std::optional<SubwordVocabulary> vocab;
  if (!c.vocab.empty()) {
    const std::string text = stage("read vocabulary", c.vocab, [&] { return read_file(c.vocab); });
    vocab = stage("read vocabulary", c.vocab, [&] { return SubwordVocabulary::from_text(text); });
  }
  TokenizeOptions options;
  options.lowercase = c.lowercase;
  const MetricReport report = stage("evaluate", c.candidates, [&] {
    return evaluate_corpus(pairs, vocab ? &*vocab : nullptr, options);
  });
  const std::string table = format_report(report);
  std::cout << table;
  if (!c.out.empty()) {
    stage("write report", c.out, [&] {
      nlohmann::ordered_json j;
      j["pairs"] = report.pairs;
      j["bleu"] = report.bleu;
      j["sp_bleu"] = report.sp_bleu ? nlohmann::ordered_json(*report.sp_bleu) : nullptr;
      j["meteor"] = report.meteor;
      j["rouge_l"] = report.rouge_l;
      j["f1"] = report.f1;
      write_text(c.out, j.dump(2) + "\n");
      return 0;
    });
  }
  return 0;
}

// --- validate -------------------------------------------------------------

struct ValidateConfig {
  std::string in, endpoint, out;
  std::size_t concurrency = 4;
  std::uint64_t limit = 10;
  double timeout_seconds = 30.0;
};

int cmd_validate(ValidateConfig c) {
  if (c.endpoint.empty()) {
    if (const char* env = std::getenv("SPARQL_ENDPOINT")) c.endpoint = env;
  }
  if (c.endpoint.empty()) {
    throw StageFailure{"configure: --endpoint: no endpoint given and SPARQL_ENDPOINT is unset"};
  }
  const auto records = stage("read dataset", c.in, [&] { return read_dataset(fs::path(c.in)); });
  ValidateOptions options;
  options.concurrency = c.concurrency;
  options.limit_override = c.limit;
  options.timeout = std::chrono::milliseconds(static_cast<long>(c.timeout_seconds * 1000));
  const auto report = stage("validate", c.endpoint, [&] {
    return validate_dataset(records, c.endpoint, options);
  });
  stage("write report", c.out.empty() ? "stdout" : c.out, [&] {
    write_text(c.out, report_to_json(report));
    return 0;
  });
  const auto& t = report.totals;
  std::cerr << "records=" << t.records << " parsed=" << t.parsed << " executed=" << t.executed
            << " nonempty=" << t.nonempty << "\n";
  return t.parsed == t.records ? 0 : 1;
}

// --- stats ----------------------------------------------------------------

int cmd_stats(const std::string& in) {
  const auto records = stage("read dataset", in, [&] { return read_dataset(fs::path(in)); });
  std::map<std::string, std::size_t> strategies;
  std::set<std::string> seeds;
  std::size_t augmented = 0, unparseable = 0, triples = 0, parsed = 0;
  for (const auto& r : records) {
    ++strategies[r.strategy];
    seeds.insert(r.seed_id);
    if (r.added_property) ++augmented;
    try {
      triples += count_triples(parse_query(r.query).where);
      ++parsed;
    } catch (const Error&) {
      ++unparseable;
    }
  }
  std::cout << "records " << records.size() << "\n"
            << "seed groups " << seeds.size() << "\n"
            << "augmented " << augmented << "\n"
            << "pass-through " << records.size() - augmented << "\n"
            << "unparseable " << unparseable << "\n";
  if (parsed > 0) {
    std::cout << "mean triples "
              << std::round(100.0 * static_cast<double>(triples) / static_cast<double>(parsed)) / 100.0
              << "\n";
  }
  for (const auto& [tag, n] : strategies) {
    std::cout << "strategy " << (tag.empty() ? "-" : tag) << " " << n << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Augment question-to-SPARQL catalogs and score SPARQL output", "sparql-augment"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sparql-augment 0.1.0");

  GenConfig gen;
  auto* g = app.add_subcommand("gen-dataset", "Augment a seed catalog into a dataset");
  g->add_option("--schema", gen.schema, "TBox in Turtle")->required();
  g->add_option("--abox", gen.abox, "Instance triples in N-Triples");
  g->add_option("--seeds", gen.seeds, "Seed catalog (JSON lines)")->required();
  g->add_option("--strategy", gen.strategy, "Naming/comment strategy")->capture_default_str();
  g->add_option("--out", gen.out, "Dataset file to write")->required();
  g->add_flag("--include-seeds", gen.include_seeds, "Emit each seed before its augmentations");
  g->add_option("--template", gen.template_id, "Question template id")->capture_default_str();
  g->add_option("--prompts", gen.prompts, "Also write fine-tuning prompts here");
  g->add_option("--prompt-template", gen.prompt_template, "Prompt template id")
      ->capture_default_str();

  RewriteConfig rw;
  auto* r = app.add_subcommand("rewrite", "Apply a strategy to a query or a dataset");
  auto* rin = r->add_option("--in", rw.in, "Dataset file");
  auto* rq = r->add_option("--query", rw.query, "File holding one query, - for stdin");
  rin->excludes(rq);
  r->add_option("--schema", rw.schema, "TBox in Turtle")->required();
  r->add_option("--abox", rw.abox, "Instance triples in N-Triples");
  r->add_option("--strategy", rw.strategy, "Naming/comment strategy")->required();
  r->add_option("--out", rw.out, "Output file (default stdout)");

  SplitConfig sp;
  auto* s = app.add_subcommand("split", "Nested training partitions and train/test split");
  s->add_option("--in", sp.in, "Dataset file")->required();
  s->add_option("--fractions", sp.fractions, "Comma-separated percents or fractions")
      ->capture_default_str();
  s->add_option("--seed", sp.seed, "Shuffle seed")->capture_default_str();
  s->add_option("--test-fraction", sp.test_fraction,
                "Hold out this share as whole seed groups first");
  s->add_option("--out", sp.out, "Base path for partition files (default --in)");

  EvaluateConfig ev;
  auto* e = app.add_subcommand("evaluate", "Score candidate queries against references");
  e->add_option("--candidates", ev.candidates, "Dataset of candidate queries")->required();
  e->add_option("--references", ev.references, "Dataset of reference queries")->required();
  e->add_option("--vocab", ev.vocab, "Subword vocabulary for SP-BLEU");
  e->add_flag("--lowercase", ev.lowercase, "Lower-case text before scoring");
  e->add_option("--out", ev.out, "Also write the report as JSON");

  ValidateConfig va;
  auto* v = app.add_subcommand("validate", "Execute dataset queries against an endpoint");
  v->add_option("--in", va.in, "Dataset file")->required();
  v->add_option("--endpoint", va.endpoint, "SPARQL endpoint URL (default $SPARQL_ENDPOINT)");
  v->add_option("--concurrency", va.concurrency, "Requests in flight")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  v->add_option("--limit", va.limit, "LIMIT applied to every query")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  v->add_option("--timeout", va.timeout_seconds, "Per-request timeout in seconds")
      ->capture_default_str();
  v->add_option("--out", va.out, "Report file (default stdout)");

  std::string stats_in;
  auto* st = app.add_subcommand("stats", "Summarize a dataset");
  st->add_option("--in", stats_in, "Dataset file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) return cmd_gen_dataset(gen);
    if (*r) {
      if (rw.in.empty() && rw.query.empty()) {
        std::cerr << "sparql-augment: rewrite: one of --in or --query is required\n";
        return 2;
      }
      return cmd_rewrite(rw);
    }
    if (*s) return cmd_split(sp);
    if (*e) return cmd_evaluate(ev);
    if (*v) return cmd_validate(va);
    if (*st) return cmd_stats(stats_in);
  } catch (const StageFailure& f) {
    std::cerr << "sparql-augment: " << f.message << "\n";
    return 2;
  }
  return 2;
}
