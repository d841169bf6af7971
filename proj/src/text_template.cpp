#include "sparqlaug/text_template.hpp"

#include "sparqlaug/errors.hpp"

namespace sparqlaug {

std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if ((c == '{' || c == '}') && i + 1 < text.size() && text[i + 1] == c) {
      out += c;
      ++i;
      continue;
    }
    if (c != '{') {
      out += c;
      continue;
    }
    const std::size_t close = text.find('}', i + 1);
    if (close == std::string_view::npos) throw Error("unterminated placeholder in template");
    const std::string name(text.substr(i + 1, close - i - 1));
    auto it = values.find(name);
    if (it == values.end()) throw Error("unknown placeholder {" + name + "} in template");
    out += it->second;
    i = close;
  }
  return out;
}

}  // namespace sparqlaug
