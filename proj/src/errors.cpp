#include "sparqlaug/errors.hpp"

#include <sstream>

namespace sparqlaug {

std::string SourcePosition::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

namespace {

std::string describe_syntax(const SourcePosition& pos,
                            const std::vector<std::string>& expected,
                            const std::string& found) {
  std::ostringstream out;
  out << "syntax error at " << pos.to_string() << ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) out << (i + 1 == expected.size() ? " or " : ", ");
    out << expected[i];
  }
  out << ", found " << (found.empty() ? "end of input" : "'" + found + "'");
  return out.str();
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

}  // namespace

SyntaxError::SyntaxError(SourcePosition position,
                         std::vector<std::string> expected, std::string found)
    : Error(describe_syntax(position, expected, found)),
      position_(position),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

UnsupportedConstruct::UnsupportedConstruct(std::string name,
                                           SourcePosition position)
    : Error("unsupported construct '" + name + "' at " + position.to_string()),
      name_(std::move(name)),
      position_(position) {}

UnresolvablePrefix::UnresolvablePrefix(std::string prefix)
    : Error("prefix '" + prefix + ":' is not declared"),
      prefix_(std::move(prefix)) {}

IdMismatch::IdMismatch(std::vector<std::string> unmatched)
    : Error("ids without a counterpart: " + join_ids(unmatched)),
      unmatched_(std::move(unmatched)) {}

}  // namespace sparqlaug
