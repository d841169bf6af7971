#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sparqlaug {

/// Non-fatal findings collected while loading or transforming data.
struct Diagnostics {
  std::vector<std::string> warnings;
  /// Inputs dropped because they were malformed.
  std::size_t skipped = 0;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

}  // namespace sparqlaug
