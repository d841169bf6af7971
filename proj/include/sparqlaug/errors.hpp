#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparqlaug {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A location in UTF-8 input text. `offset` is a byte index; line and
/// column are 1-based (column counts bytes).
struct SourcePosition {
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;

  bool operator==(const SourcePosition&) const = default;
  std::string to_string() const;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePosition position, std::vector<std::string> expected,
              std::string found);

  const SourcePosition& position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourcePosition position_;
  std::vector<std::string> expected_;
  std::string found_;
};

class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(std::string name, SourcePosition position);

  const std::string& name() const { return name_; }
  const SourcePosition& position() const { return position_; }

 private:
  std::string name_;
  SourcePosition position_;
};

/// Well-formed text that violates a query invariant (e.g. a projected
/// variable missing from the WHERE clause).
class SemanticError : public Error {
 public:
  using Error::Error;
};

class UnresolvablePrefix : public Error {
 public:
  explicit UnresolvablePrefix(std::string prefix);
  const std::string& prefix() const { return prefix_; }

 private:
  std::string prefix_;
};

class UnknownTemplateId : public Error {
 public:
  explicit UnknownTemplateId(const std::string& id)
      : Error("unknown template id '" + id + "'") {}
};

class InvalidLabel : public Error {
 public:
  using Error::Error;
};

class DuplicateId : public Error {
 public:
  explicit DuplicateId(const std::string& id)
      : Error("duplicate id '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class DuplicateSeedId : public DuplicateId {
 public:
  using DuplicateId::DuplicateId;
};

class SeedParseFailure : public Error {
 public:
  SeedParseFailure(const std::string& seed_id, const std::string& reason)
      : Error("seed '" + seed_id + "' does not parse: " + reason),
        seed_id_(seed_id) {}
  const std::string& seed_id() const { return seed_id_; }

 private:
  std::string seed_id_;
};

class EmptyInput : public Error {
 public:
  EmptyInput() : Error("input contains no tokens") {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus contains no pairs") {}
};

class VocabularyClosureError : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  EmptyDataset() : Error("dataset is empty") {}
};

class UnsatisfiableStratification : public Error {
 public:
  using Error::Error;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DestinationUnwritable : public Error {
 public:
  explicit DestinationUnwritable(const std::string& path)
      : Error("cannot write '" + path + "'"), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IdMismatch : public Error {
 public:
  explicit IdMismatch(std::vector<std::string> unmatched);
  const std::vector<std::string>& unmatched() const { return unmatched_; }

 private:
  std::vector<std::string> unmatched_;
};

}  // namespace sparqlaug
