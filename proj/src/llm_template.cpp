#include "leducmind/llm/prompt_template.hpp"

#include <fstream>
#include <sstream>

namespace leducmind::llm {

std::string read_text_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw TemplateError("cannot read file: " + path);
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& bindings) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '{') {
      out.push_back(c);
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < text.size() &&
           ((text[j] >= 'a' && text[j] <= 'z') || text[j] == '_')) {
      ++j;
    }
    if (j > i + 1 && j < text.size() && text[j] == '}') {
      const std::string name = text.substr(i + 1, j - i - 1);
      const auto it = bindings.find(name);
      if (it == bindings.end()) {
        throw TemplateError("unbound placeholder '{" + name + "}'");
      }
      out += it->second;
      i = j + 1;
    } else {
      // Not a placeholder token; emit the brace literally.
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

std::string render_template_file(const std::string& path,
                                 const std::map<std::string, std::string>& bindings) {
  return render_template(read_text_file(path), bindings);
}

}  // namespace leducmind::llm
