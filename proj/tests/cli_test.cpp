#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "sparqlaug/ast.hpp"
#include "sparqlaug/dataset.hpp"
#include "support/test_support.hpp"

using namespace sparqlaug;
using namespace sparqlaug::testing;

namespace {

std::string cli() { return quote(SPARQLAUG_CLI); }

std::string toy(const std::string& name) { return quote(source_path("data/toy/" + name)); }

std::size_t line_count(const std::filesystem::path& p) {
  const std::string text = read_file(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::vector<DatasetRecord> synthetic(std::size_t n) {
  std::vector<DatasetRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"r" + std::to_string(i), "Q" + std::to_string(i) + "?",
                   "SELECT ?x WHERE { ?x <http://e/p> " + std::to_string(i) + " }", "original",
                   "r" + std::to_string(i), std::nullopt});
  }
  return out;
}

}  // namespace

TEST(Cli, GenDatasetMeaningfulWithComments) {
  TempDir dir;
  const auto out = dir / "toy.jsonl";
  auto r = run_command(cli() + " gen-dataset --schema " + toy("schema.ttl") + " --seeds " +
                       toy("seeds.jsonl") + " --strategy meaningful-vars-comments --include-seeds" +
                       " --out " + quote(out));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("records=6 strategy=meaningful-vars-comments"), std::string::npos);
  const auto records = read_dataset(out);
  ASSERT_EQ(records.size(), 6u);
  for (const auto& rec : records) {
    EXPECT_EQ(rec.strategy, "meaningful-vars-comments");
    EXPECT_NO_THROW(parse_query(rec.query)) << rec.query;
    EXPECT_NE(rec.query.find(" # "), std::string::npos) << rec.query;
  }
  EXPECT_TRUE(std::filesystem::exists(manifest_path(out)));
}

TEST(Cli, GenDatasetOriginalIsCanonicalSerialization) {
  TempDir dir;
  const auto out = dir / "toy.jsonl";
  auto r = run_command(cli() + " gen-dataset --schema " + toy("schema.ttl") + " --seeds " +
                       toy("seeds.jsonl") + " --include-seeds --out " + quote(out));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto seeds = read_seed_catalog(source_path("data/toy/seeds.jsonl"));
  const auto records = read_dataset(out);
  for (const auto& seed : seeds) {
    auto it = std::find_if(records.begin(), records.end(),
                           [&](const DatasetRecord& rec) { return rec.id == seed.id; });
    ASSERT_NE(it, records.end());
    EXPECT_EQ(it->query, serialize(seed.query));
    EXPECT_FALSE(it->added_property);
  }
}

TEST(Cli, UnreadableSeedsNamesThePath) {
  TempDir dir;
  const auto missing = dir / "absent.jsonl";
  auto r = run_command(cli() + " gen-dataset --schema " + toy("schema.ttl") + " --seeds " +
                       quote(missing) + " --out " + quote(dir / "o.jsonl"));
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find(missing.string()), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(dir / "o.jsonl"));
}

TEST(Cli, SeedSyntaxErrorNamesFileAndLine) {
  TempDir dir;
  const auto seeds = dir / "seeds.jsonl";
  write_file(seeds, read_file(source_path("data/toy/seeds.jsonl")) +
                        R"({"id":"bad","question":"Q?","query":"SELECT WHERE {"})" + "\n");
  auto r = run_command(cli() + " gen-dataset --schema " + toy("schema.ttl") + " --seeds " +
                       quote(seeds) + " --out " + quote(dir / "o.jsonl"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find(seeds.string()), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("bad"), std::string::npos) << r.err;
}

TEST(Cli, RewriteSingleQueryFromStdin) {
  TempDir dir;
  const auto q = dir / "q.rq";
  write_file(q, "PREFIX : <http://example.org/toy#>\nSELECT ?a WHERE { ?a a :Gene . ?a :name ?n }");
  auto r = run_command(cli() + " rewrite --schema " + toy("schema.ttl") +
                       " --strategy meaningful-vars-comments --query - < " + quote(q));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("?gene :name ?n . # name"), std::string::npos) << r.out;

  r = run_command(cli() + " rewrite --schema " + toy("schema.ttl") + " --strategy bogus --query " +
                  quote(q));
  EXPECT_NE(r.exit_code, 0);
}

TEST(Cli, EvaluateIdentityAlteredAndMisaligned) {
  TempDir dir;
  const auto ref = dir / "ref.jsonl";
  auto records = synthetic(5);
  write_dataset(records, ref);

  auto r = run_command(cli() + " evaluate --candidates " + quote(ref) + " --references " +
                       quote(ref));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("1.000     -         0.99"), std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("1.000     1.000\n"), std::string::npos) << r.out;

  auto altered = records;
  altered[0].query = "SELECT ?y WHERE { ?x <http://e/p> 0 }";
  const auto cand = dir / "cand.jsonl";
  write_dataset(altered, cand);
  const auto json = dir / "scores.json";
  r = run_command(cli() + " evaluate --candidates " + quote(cand) + " --references " +
                  quote(ref) + " --out " + quote(json));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto scores = nlohmann::json::parse(read_file(json));
  EXPECT_LT(scores.at("bleu").get<double>(), 1.0);
  EXPECT_LT(scores.at("f1").get<double>(), 1.0);

  altered.pop_back();
  write_dataset(altered, cand);
  r = run_command(cli() + " evaluate --candidates " + quote(cand) + " --references " +
                  quote(ref));
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("r4"), std::string::npos) << r.err;
}

TEST(Cli, SplitSizesAndDeterminism) {
  TempDir dir;
  const auto in = dir / "all.jsonl";
  write_dataset(synthetic(100), in);
  for (const char* name : {"a", "b"}) {
    auto r = run_command(cli() + " split --in " + quote(in) + " --fractions 25,50,75,100 --seed 5" +
                         " --out " + quote(dir / (std::string(name) + ".jsonl")));
    ASSERT_EQ(r.exit_code, 0) << r.err;
  }
  const std::size_t sizes[] = {25, 50, 75, 100};
  const char* tags[] = {"25", "50", "75", "100"};
  for (int k = 0; k < 4; ++k) {
    const auto a = dir / ("a_p" + std::string(tags[k]) + ".jsonl");
    const auto b = dir / ("b_p" + std::string(tags[k]) + ".jsonl");
    EXPECT_EQ(line_count(a), sizes[k]);
    EXPECT_EQ(read_file(a), read_file(b));
  }
  auto r = run_command(cli() + " split --in " + quote(in) + " --seed 6 --out " +
                       quote(dir / "c.jsonl"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(read_file(dir / "c_p100.jsonl"), read_file(dir / "a_p100.jsonl"));
}

TEST(Cli, SplitWithTestFraction) {
  TempDir dir;
  const auto in = dir / "all.jsonl";
  write_dataset(synthetic(20), in);
  auto r = run_command(cli() + " split --in " + quote(in) + " --test-fraction 0.2 --out " +
                       quote(dir / "s.jsonl"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(line_count(dir / "s_test.jsonl"), 4u);
  EXPECT_EQ(line_count(dir / "s_train.jsonl"), 16u);
  EXPECT_EQ(line_count(dir / "s_p25.jsonl"), 4u);
}

TEST(Cli, ValidateAgainstStub) {
  StubEndpoint stub;
  TempDir dir;
  const auto in = dir / "d.jsonl";
  auto records = synthetic(4);
  write_dataset(records, in);
  const auto report = dir / "report.json";
  auto r = run_command(cli() + " validate --in " + quote(in) + " --endpoint " + stub.url() +
                       " --out " + quote(report));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto json = nlohmann::json::parse(read_file(report));
  EXPECT_EQ(json.at("totals").at("executed"), 4);
  EXPECT_NE(stub.last_query().find("LIMIT 10"), std::string::npos);

  records[1].query = "SELECT WHERE {";
  write_dataset(records, in);
  r = run_command(cli() + " validate --in " + quote(in) + " --endpoint " + stub.url());
  EXPECT_EQ(r.exit_code, 1) << r.err;
}

TEST(Cli, StatsCountsRecords) {
  TempDir dir;
  const auto out = dir / "toy.jsonl";
  ASSERT_EQ(run_command(cli() + " gen-dataset --schema " + toy("schema.ttl") + " --seeds " +
                        toy("seeds.jsonl") + " --include-seeds --out " + quote(out))
                .exit_code,
            0);
  auto r = run_command(cli() + " stats --in " + quote(out));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("records"), std::string::npos);
  EXPECT_NE(r.out.find("6"), std::string::npos);
}
