#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace sparqlaug {

/// Surface-form variants of a dataset. Tags are used verbatim in CLI flags
/// and dataset records.
enum class Strategy {
  kOriginal,                ///< comments stripped, names kept
  kOriginalWithComments,    ///< label comments injected, names kept
  kRandomVars,              ///< ?x0, ?x1, ... and no comments
  kMeaningfulVars,          ///< class-derived names, no comments
  kMeaningfulVarsComments,  ///< class-derived names and label comments
};

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::kOriginal, Strategy::kOriginalWithComments, Strategy::kRandomVars,
    Strategy::kMeaningfulVars, Strategy::kMeaningfulVarsComments};

constexpr std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kOriginal: return "original";
    case Strategy::kOriginalWithComments: return "original-with-comments";
    case Strategy::kRandomVars: return "random-vars";
    case Strategy::kMeaningfulVars: return "meaningful-vars";
    case Strategy::kMeaningfulVarsComments: return "meaningful-vars-comments";
  }
  return "";
}

constexpr std::optional<Strategy> parse_strategy(std::string_view tag) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == tag) return s;
  }
  return std::nullopt;
}

}  // namespace sparqlaug
