#pragma once

// SPARQL 1.1 Protocol client and execution-based dataset validation.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlaug/dataset.hpp"
#include "sparqlaug/errors.hpp"

namespace sparqlaug {

class NetworkError : public Error {
 public:
  using Error::Error;
};

class HttpError : public Error {
 public:
  HttpError(int status, std::string excerpt);
  int status() const { return status_; }
  const std::string& excerpt() const { return excerpt_; }

 private:
  int status_;
  std::string excerpt_;
};

class MalformedResults : public Error {
 public:
  using Error::Error;
};

class Timeout : public Error {
 public:
  using Error::Error;
};

enum class ValueKind { kIri, kLiteral, kBnode };

struct BoundValue {
  std::string value;
  ValueKind kind = ValueKind::kLiteral;
  bool operator==(const BoundValue&) const = default;
};

struct BindingsTable {
  std::vector<std::string> variables;
  std::vector<std::map<std::string, BoundValue>> rows;
};

/// Decodes an application/sparql-results+json document. Throws
/// MalformedResults.
BindingsTable parse_results_json(std::string_view body);

/// Replaces the query's LIMIT (or appends one). Throws Error for 0.
std::string with_limit(std::string_view query_text, std::uint64_t limit);

/// POSTs `query=` form-encoded to `endpoint` (http:// or https:// URL).
/// The query is parsed locally first, so parse errors surface as the
/// parser's exceptions before any request is made.
BindingsTable execute_select(const std::string& endpoint, std::string_view query_text,
                             std::chrono::milliseconds timeout = std::chrono::seconds(30),
                             std::optional<std::uint64_t> limit_override = std::nullopt);

struct ValidationOutcome {
  std::string id;
  bool parsed = false;
  bool executed = false;
  bool nonempty = false;
  std::optional<std::string> error;
  std::chrono::milliseconds latency{0};
};

struct ValidationTotals {
  std::size_t records = 0;
  std::size_t parsed = 0;
  std::size_t executed = 0;
  std::size_t nonempty = 0;
};

struct ValidationReport {
  /// Sorted by id.
  std::vector<ValidationOutcome> outcomes;
  ValidationTotals totals;
};

struct ValidateOptions {
  std::size_t concurrency = 4;
  std::uint64_t limit_override = 10;
  std::chrono::milliseconds timeout = std::chrono::seconds(30);
  /// Extra attempts after a NetworkError; other failures are final.
  int retries = 2;
  std::chrono::milliseconds initial_backoff{100};
};

/// At most `concurrency` requests are in flight. Never throws for
/// per-record failures; they are recorded in the report.
ValidationReport validate_dataset(std::span<const DatasetRecord> records,
                                  const std::string& endpoint,
                                  const ValidateOptions& options = {});

/// JSON rendering without latencies, so equal outcomes render equal bytes.
std::string report_to_json(const ValidationReport& report);

}  // namespace sparqlaug
