#include "sparqlaug/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sparqlaug/errors.hpp"
#include "sparqlaug/text_template.hpp"

namespace sparqlaug {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string dump_line(const ordered_json& j) {
  try {
    return j.dump();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("cannot encode record: ") + e.what());
  }
}

ordered_json parse_object(std::string_view line, std::size_t line_number) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedRecord(line_number, e.what());
  }
  if (!j.is_object()) throw MalformedRecord(line_number, "record is not an object");
  return j;
}

std::string string_field(const ordered_json& j, const char* key, std::size_t line_number) {
  auto it = j.find(key);
  if (it == j.end()) throw MalformedRecord(line_number, std::string("missing field '") + key + "'");
  if (!it->is_string()) {
    throw MalformedRecord(line_number, std::string("field '") + key + "' is not a string");
  }
  return it->get<std::string>();
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(line, number);
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  return in;
}

void check_fractions(const std::vector<double>& fractions) {
  if (fractions.empty()) throw Error("split needs at least one fraction");
  double previous = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw Error("split fraction outside (0, 1]");
    if (f <= previous) throw Error("split fractions must be strictly increasing");
    previous = f;
  }
}

}  // namespace

std::string encode_record(const DatasetRecord& record) {
  ordered_json j;
  j["id"] = record.id;
  j["question"] = record.question;
  j["query"] = record.query;
  j["strategy"] = record.strategy;
  j["seed_id"] = record.seed_id;
  j["added_property"] =
      record.added_property ? ordered_json(*record.added_property) : ordered_json(nullptr);
  return dump_line(j);
}

DatasetRecord decode_record(std::string_view line, std::size_t line_number) {
  const ordered_json j = parse_object(line, line_number);
  DatasetRecord r;
  r.id = string_field(j, "id", line_number);
  r.question = string_field(j, "question", line_number);
  r.query = string_field(j, "query", line_number);
  r.strategy = string_field(j, "strategy", line_number);
  r.seed_id = string_field(j, "seed_id", line_number);
  auto it = j.find("added_property");
  if (it == j.end()) throw MalformedRecord(line_number, "missing field 'added_property'");
  if (it->is_string()) {
    r.added_property = it->get<std::string>();
  } else if (!it->is_null()) {
    throw MalformedRecord(line_number, "field 'added_property' is neither a string nor null");
  }
  if (r.id.empty()) throw MalformedRecord(line_number, "empty id");
  if (r.query.empty()) throw MalformedRecord(line_number, "empty query");
  return r;
}

std::size_t write_dataset(std::span<const DatasetRecord> records, std::ostream& out) {
  std::set<std::string_view> ids;
  std::vector<std::string> lines;
  lines.reserve(records.size());
  for (const auto& r : records) {
    if (!ids.insert(r.id).second) throw DuplicateId(r.id);
    if (r.query.empty()) throw Error("record '" + r.id + "' has an empty query");
    lines.push_back(encode_record(r));
  }
  for (const auto& line : lines) out << line << '\n';
  return records.size();
}

std::size_t write_dataset(std::span<const DatasetRecord> records,
                          const std::filesystem::path& path) {
  std::ostringstream buffer;
  const std::size_t n = write_dataset(records, buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DestinationUnwritable(path.string());
  out << buffer.str();
  out.flush();
  if (!out) throw DestinationUnwritable(path.string());
  return n;
}

std::vector<DatasetRecord> read_dataset(std::istream& in) {
  std::vector<DatasetRecord> records;
  std::set<std::string> ids;
  for_each_line(in, [&](const std::string& line, std::size_t number) {
    DatasetRecord r = decode_record(line, number);
    if (!ids.insert(r.id).second) throw DuplicateId(r.id);
    records.push_back(std::move(r));
  });
  return records;
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_dataset(in);
}

std::vector<SeedExample> read_seed_catalog(std::istream& in) {
  std::vector<SeedExample> seeds;
  std::set<std::string> ids;
  for_each_line(in, [&](const std::string& line, std::size_t number) {
    const ordered_json j = parse_object(line, number);
    SeedExample seed;
    seed.id = string_field(j, "id", number);
    seed.question = string_field(j, "question", number);
    const std::string query = string_field(j, "query", number);
    if (seed.id.empty()) throw MalformedRecord(number, "empty id");
    if (seed.question.empty()) throw MalformedRecord(number, "empty question");
    if (!ids.insert(seed.id).second) throw DuplicateSeedId(seed.id);
    try {
      seed.query = parse_query(query);
    } catch (const Error& e) {
      throw SeedParseFailure(seed.id, "line " + std::to_string(number) + ": " + e.what());
    }
    seeds.push_back(std::move(seed));
  });
  return seeds;
}

std::vector<SeedExample> read_seed_catalog(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_seed_catalog(in);
}

void write_seed_catalog(std::span<const SeedExample> seeds, std::ostream& out) {
  for (const auto& seed : seeds) {
    ordered_json j;
    j["id"] = seed.id;
    j["question"] = seed.question;
    j["query"] = serialize(seed.query, true);
    out << dump_line(j) << '\n';
  }
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  SplitMix64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::size_t partition_size(double fraction, std::size_t n) {
  const double exact = fraction * static_cast<double>(n);
  const auto size = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::min(size, n);
}

std::vector<std::vector<DatasetRecord>> split_nested(std::span<const DatasetRecord> records,
                                                     const SplitSpec& spec) {
  if (records.empty()) throw EmptyDataset();
  check_fractions(spec.fractions);
  const auto order = shuffled_indices(records.size(), spec.seed);
  std::vector<std::vector<DatasetRecord>> partitions;
  for (double f : spec.fractions) {
    std::vector<DatasetRecord> part;
    const std::size_t size = partition_size(f, records.size());
    part.reserve(size);
    for (std::size_t i = 0; i < size; ++i) part.push_back(records[order[i]]);
    partitions.push_back(std::move(part));
  }
  return partitions;
}

TrainTestSplit train_test_split(std::span<const DatasetRecord> records, double test_fraction,
                                std::uint64_t seed) {
  if (records.empty()) throw EmptyDataset();
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error("test fraction must lie strictly between 0 and 1");
  }
  std::vector<std::string> group_names;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, fresh] = groups.try_emplace(records[i].seed_id);
    if (fresh) group_names.push_back(records[i].seed_id);
    it->second.push_back(i);
  }

  const std::size_t target = partition_size(test_fraction, records.size());
  TrainTestSplit split;
  for (std::size_t g : shuffled_indices(group_names.size(), seed)) {
    auto& side = split.test.size() < target ? split.test : split.train;
    for (std::size_t i : groups[group_names[g]]) side.push_back(records[i]);
  }
  if (split.train.empty() || split.test.empty()) {
    throw UnsatisfiableStratification("cannot place " + std::to_string(group_names.size()) +
                                      " seed group(s) on both sides of a " +
                                      std::to_string(test_fraction) + " test split");
  }
  return split;
}

PromptTemplateSet::PromptTemplateSet() {
  add(std::string(kDefaultId),
      "Translate the question into a SPARQL query.\nQuestion: {question}\nQuery:\n{query}");
  add("alpaca",
      "### Instruction:\nTranslate the question into a SPARQL query.\n\n"
      "### Input:\n{question}\n\n### Response:\n{query}");
}

void PromptTemplateSet::add(std::string id, std::string text) {
  templates_[std::move(id)] = std::move(text);
}

bool PromptTemplateSet::contains(std::string_view id) const {
  return templates_.find(id) != templates_.end();
}

std::string PromptTemplateSet::render(std::string_view id, const DatasetRecord& record) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) throw UnknownTemplateId(std::string(id));
  return render_template(it->second, {{"question", record.question}, {"query", record.query}});
}

std::string format_prompt(const DatasetRecord& record, std::string_view template_id) {
  static const PromptTemplateSet defaults;
  return defaults.render(template_id, record);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& dataset) {
  return dataset.string() + ".manifest.json";
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  ordered_json j;
  j["count"] = manifest.count;
  j["strategy"] = manifest.strategy;
  j["schema_sha256"] = manifest.schema_sha256;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DestinationUnwritable(path.string());
  out << j.dump() << '\n';
  if (!out) throw DestinationUnwritable(path.string());
}

}  // namespace sparqlaug
