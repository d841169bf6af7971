#pragma once

#include <map>
#include <string>
#include <string_view>

namespace sparqlaug {

/// Substitutes `{name}` placeholders. `{{` and `}}` emit literal braces.
/// Throws Error on an unterminated or unknown placeholder.
std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values);

}  // namespace sparqlaug
