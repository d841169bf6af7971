#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "sparqlaug/endpoint.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "sparqlaug/ast.hpp"

namespace sparqlaug {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kExcerptBytes = 200;

struct EndpointUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

EndpointUrl split_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw NetworkError("endpoint URL lacks a scheme: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw NetworkError("unsupported endpoint scheme '" + scheme + "'");
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

ValueKind value_kind(const std::string& type) {
  if (type == "uri") return ValueKind::kIri;
  if (type == "bnode") return ValueKind::kBnode;
  if (type == "literal" || type == "typed-literal") return ValueKind::kLiteral;
  throw MalformedResults("unknown RDF term type '" + type + "'");
}

BindingsTable execute_once(const EndpointUrl& url, const std::string& query,
                           std::chrono::milliseconds timeout) {
  httplib::Client client(url.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const httplib::Headers headers{{"Accept", "application/sparql-results+json"}};
  const auto started = Clock::now();
  auto result = client.Post(url.path, headers, httplib::Params{{"query", query}});
  if (!result) {
    const auto err = result.error();
    const auto elapsed = Clock::now() - started;
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= timeout * 9 / 10)) {
      throw Timeout("no response within " + std::to_string(timeout.count()) + " ms");
    }
    throw NetworkError("network error: " + httplib::to_string(err));
  }
  if (result->status < 200 || result->status >= 300) {
    throw HttpError(result->status, result->body.substr(0, kExcerptBytes));
  }
  return parse_results_json(result->body);
}

}  // namespace

HttpError::HttpError(int status, std::string excerpt)
    : Error("HTTP " + std::to_string(status) + ": " + excerpt),
      status_(status),
      excerpt_(std::move(excerpt)) {}

BindingsTable parse_results_json(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw MalformedResults(std::string("results are not JSON: ") + e.what());
  }
  try {
    BindingsTable table;
    for (const auto& v : doc.at("head").at("vars")) table.variables.push_back(v.get<std::string>());
    for (const auto& binding : doc.at("results").at("bindings")) {
      std::map<std::string, BoundValue> row;
      for (const auto& [name, term] : binding.items()) {
        if (std::find(table.variables.begin(), table.variables.end(), name) ==
            table.variables.end()) {
          throw MalformedResults("binding for undeclared variable '" + name + "'");
        }
        row[name] = BoundValue{term.at("value").get<std::string>(),
                               value_kind(term.at("type").get<std::string>())};
      }
      table.rows.push_back(std::move(row));
    }
    return table;
  } catch (const json::exception& e) {
    throw MalformedResults(std::string("unexpected results layout: ") + e.what());
  }
}

std::string with_limit(std::string_view query_text, std::uint64_t limit) {
  if (limit == 0) throw Error("a limit override of 0 is not allowed");
  SelectQuery query = parse_query(query_text);
  query.modifiers.limit = limit;
  return serialize(query, false);
}

BindingsTable execute_select(const std::string& endpoint, std::string_view query_text,
                             std::chrono::milliseconds timeout,
                             std::optional<std::uint64_t> limit_override) {
  const std::string query = limit_override ? with_limit(query_text, *limit_override)
                                           : serialize(parse_query(query_text), false);
  return execute_once(split_url(endpoint), query, timeout);
}

ValidationReport validate_dataset(std::span<const DatasetRecord> records,
                                  const std::string& endpoint, const ValidateOptions& options) {
  if (options.concurrency == 0) throw Error("concurrency must be at least 1");
  if (options.limit_override == 0) throw Error("a limit override of 0 is not allowed");

  std::vector<ValidationOutcome> outcomes(records.size());
  std::atomic<std::size_t> next{0};

  auto validate_one = [&](const DatasetRecord& record, ValidationOutcome& out) {
    out.id = record.id;
    std::string query;
    try {
      query = with_limit(record.query, options.limit_override);
      out.parsed = true;
    } catch (const Error& e) {
      out.error = e.what();
      return;
    }
    const auto started = Clock::now();
    auto backoff = options.initial_backoff;
    for (int attempt = 0;; ++attempt) {
      try {
        const EndpointUrl url = split_url(endpoint);
        const BindingsTable table = execute_once(url, query, options.timeout);
        out.executed = true;
        out.nonempty = !table.rows.empty();
        out.error.reset();
        break;
      } catch (const NetworkError& e) {
        out.error = e.what();
        if (attempt >= options.retries) break;
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      } catch (const Error& e) {
        out.error = e.what();
        break;
      }
    }
    out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started);
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) validate_one(records[i], outcomes[i]);
  };
  const std::size_t workers = std::min(options.concurrency, records.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  ValidationReport report;
  report.totals.records = outcomes.size();
  for (const auto& o : outcomes) {
    report.totals.parsed += o.parsed;
    report.totals.executed += o.executed;
    report.totals.nonempty += o.nonempty;
  }
  report.outcomes = std::move(outcomes);
  return report;
}

std::string report_to_json(const ValidationReport& report) {
  nlohmann::ordered_json doc;
  doc["totals"] = {{"records", report.totals.records},
                   {"parsed", report.totals.parsed},
                   {"executed", report.totals.executed},
                   {"nonempty", report.totals.nonempty}};
  auto& rows = doc["outcomes"] = nlohmann::ordered_json::array();
  for (const auto& o : report.outcomes) {
    nlohmann::ordered_json row;
    row["id"] = o.id;
    row["parsed"] = o.parsed;
    row["executed"] = o.executed;
    row["nonempty"] = o.nonempty;
    row["error"] = o.error ? nlohmann::ordered_json(*o.error) : nlohmann::ordered_json(nullptr);
    rows.push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

}  // namespace sparqlaug
