#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace leducmind::llm {

struct TemplateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pure {placeholder} substitution. Placeholders are lowercase [a-z_]+ tokens
// in braces; any token without a binding is an error, extra bindings are
// ignored. Nothing unresolved is ever emitted.
std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& bindings);

std::string render_template_file(const std::string& path,
                                 const std::map<std::string, std::string>& bindings);

std::string read_text_file(const std::string& path);

}  // namespace leducmind::llm
