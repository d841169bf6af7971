#pragma once

// Line-delimited dataset files, seed catalogs, nested training partitions
// and prompt formatting.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlaug/augment.hpp"

namespace sparqlaug {

struct DatasetRecord {
  std::string id;
  std::string question;
  std::string query;
  std::string strategy;
  std::string seed_id;
  std::optional<std::string> added_property;

  bool operator==(const DatasetRecord&) const = default;
};

/// One JSON object per line with keys in the order id, question, query,
/// strategy, seed_id, added_property (null when absent). No trailing
/// newline.
std::string encode_record(const DatasetRecord& record);

/// Throws MalformedRecord(line) on anything but a JSON object with the six
/// keys and a non-empty query. Unknown keys are ignored.
DatasetRecord decode_record(std::string_view line, std::size_t line_number);

/// Ids are checked before anything is written. Throws DuplicateId.
std::size_t write_dataset(std::span<const DatasetRecord> records, std::ostream& out);
/// Also throws DestinationUnwritable.
std::size_t write_dataset(std::span<const DatasetRecord> records,
                          const std::filesystem::path& path);

/// Blank lines are skipped. Throws MalformedRecord or DuplicateId.
std::vector<DatasetRecord> read_dataset(std::istream& in);
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);

/// Seed catalog lines carry id, question and query. Queries are parsed on
/// load; a failure raises SeedParseFailure naming the seed.
std::vector<SeedExample> read_seed_catalog(std::istream& in);
std::vector<SeedExample> read_seed_catalog(const std::filesystem::path& path);
void write_seed_catalog(std::span<const SeedExample> seeds, std::ostream& out);

/// splitmix64 (Steele, Lea and Flood), the permutation source for every
/// shuffle in this module.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// Fisher-Yates from the back: for i = n-1 .. 1, swap i with
/// next() % (i + 1).
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

struct SplitSpec {
  std::vector<double> fractions{0.25, 0.5, 0.75, 1.0};
  std::uint64_t seed = 0;
};

/// ceil(fraction * n), ignoring floating-point excess below 1e-9.
std::size_t partition_size(double fraction, std::size_t n);

/// Partition k holds the first partition_size(fraction_k, N) shuffled
/// records, so each partition is a prefix of the next. Throws EmptyDataset,
/// or Error for fractions outside (0, 1] or not strictly increasing.
std::vector<std::vector<DatasetRecord>> split_nested(std::span<const DatasetRecord> records,
                                                     const SplitSpec& spec);

struct TrainTestSplit {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> test;
};

/// Whole seed groups, in shuffled group order, fill the test side until it
/// holds at least ceil(test_fraction * N) records. Throws EmptyDataset, or
/// UnsatisfiableStratification when either side would end up empty.
TrainTestSplit train_test_split(std::span<const DatasetRecord> records,
                                double test_fraction = 0.2, std::uint64_t seed = 0);

/// Prompt templates with {question} and {query} placeholders.
class PromptTemplateSet {
 public:
  static constexpr std::string_view kDefaultId = "default";

  /// Registers "default" and "alpaca".
  PromptTemplateSet();

  void add(std::string id, std::string text);
  bool contains(std::string_view id) const;
  /// Throws UnknownTemplateId.
  std::string render(std::string_view id, const DatasetRecord& record) const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

std::string format_prompt(const DatasetRecord& record,
                          std::string_view template_id = PromptTemplateSet::kDefaultId);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

struct Manifest {
  std::size_t count = 0;
  std::string strategy;
  std::string schema_sha256;
};

/// `<dataset>.manifest.json`
std::filesystem::path manifest_path(const std::filesystem::path& dataset);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

}  // namespace sparqlaug
